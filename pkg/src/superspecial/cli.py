"""Command-line entry point: build, spectra, walk, and verify commands.

Outputs are deterministic for a fixed command line and seed: JSON is
dumped with sorted keys and no timestamps, and every randomized subroutine
draws from generators derived from the single --seed value.

Exit codes: 0 success, 2 precondition failure, 3 invariant failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .elliptic import build_gamma1
from .field import FieldError
from .graph import (
    GraphBuildError,
    SuperspecialGraph,
    build_graph,
    census,
    diameter,
    dual_round_trip,
    edges_csv,
    extended_dual_transport,
    is_strongly_connected,
    period,
    product_neighbor_edge_counts,
    ratio_principle_violations,
    subgraph,
    to_dot,
    to_json_dict,
)
from .spectra import (
    SpectraError,
    imbalance_spec_from_graph,
    lambda_star,
    linear_imbalance_solve,
    spectra_csv_rows,
    stationary_closed_form,
    verify_detailed_balance,
    verify_stationary,
)
from .walk import WalkConfig, random_walk, walk_csv, walk_json_dict

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INVARIANT = 3
EXIT_IO = 4

OUT_ENV = "SUPERSPECIAL_OUT"


class VerifyFailure(Exception):
    """One or more invariant checks failed."""


def _parse_primes(text: str) -> list:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        out = [n for n in range(lo, hi + 1) if _is_probable_prime(n)]
        return out
    return [int(text)]


def _is_probable_prime(n: int) -> bool:
    from .field import is_prime

    return is_prime(n)


def _outdir(args) -> str:
    out = args.out or os.environ.get(OUT_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _summary_text(g: SuperspecialGraph) -> str:
    rep = census(g)
    lines = [
        f"superspecial (2,2)-isogeny graph, p = {g.p}",
        f"vertices: {len(g.vertices)}   edges: {len(g.edges)}   "
        f"seed: {g.seed_description}",
        "",
        f"{'type':>10} {'observed':>9} {'expected':>9}",
    ]
    for t in sorted(rep.expected):
        lines.append(f"{t:>10} {rep.observed.get(t, 0):>9} {rep.expected[t]:>9}")
    lines.append("")
    lines.append(f"census match: {rep.ok}")
    return "\n".join(lines) + "\n"


def cmd_build(args) -> int:
    out = _outdir(args)
    for p in _parse_primes(args.prime):
        g = build_graph(p, seed=args.seed)
        base = os.path.join(out, f"gamma2_p{p}")
        formats = args.format or ["json", "dot", "csv"]
        if "json" in formats:
            _write(base + ".json",
                   json.dumps(to_json_dict(g), indent=2, sort_keys=True) + "\n")
        if "dot" in formats:
            _write(base + ".dot", to_dot(g))
        if "csv" in formats:
            _write(base + ".csv", edges_csv(g))
        _write(base + "_summary.txt", _summary_text(g))
        if not args.no_figures:
            from .report import graph_figure

            graph_figure(g, base + ".png")
        print(f"p={p}: {len(g.vertices)} vertices, {len(g.edges)} edges -> {base}.*")
        if not census(g).ok:
            raise GraphBuildError(f"census mismatch at p={p}")
    return EXIT_OK


def cmd_spectra(args) -> int:
    out = _outdir(args)
    primes = _parse_primes(args.prime)
    if not primes:
        label = args.prime.replace("..", "_")
        path = os.path.join(out, f"spectra_{label}.csv")
        _write(path, spectra_csv_rows({}))
        print(f"wrote {path} (no primes in range)")
        return EXIT_OK
    reports = {}
    solver_kw = {}
    if getattr(args, "dense_threshold", None) is not None:
        solver_kw["dense_threshold"] = args.dense_threshold
    for p in primes:
        g = build_graph(p, seed=args.seed)
        gj = subgraph(g, "jacobian")
        ge = subgraph(g, "product")
        reports[p] = (lambda_star(g, **solver_kw), lambda_star(gj, **solver_kw),
                      lambda_star(ge, **solver_kw))
        rg = reports[p][0]
        print(f"p={p}: d=({rg.diameter},{reports[p][1].diameter},"
              f"{reports[p][2].diameter}) lambda=({rg.lambda_star_scaled:.3f},"
              f"{reports[p][1].lambda_star_scaled:.3f},"
              f"{reports[p][2].lambda_star_scaled:.3f})")
        if p == 11:
            jz = 7 + math.sqrt(3)
            print(f"p=11 diagnostic: adjacency lambda_2 = "
                  f"{15 * rg.second_largest:.9f} (7 + sqrt(3) = {jz:.9f}); "
                  f"Ramanujan bound 2*sqrt(14) = {2 * math.sqrt(14):.9f} -> "
                  f"{'non-Ramanujan' if 15 * rg.second_largest > 2 * math.sqrt(14) else 'Ramanujan'}")
    csv = spectra_csv_rows(reports)
    path = os.path.join(out, f"spectra_{primes[0]}_{primes[-1]}.csv")
    _write(path, csv)
    print(f"wrote {path}")
    if not args.no_figures and reports:
        from .report import spectra_figures

        for fig in spectra_figures(reports, os.path.splitext(path)[0]):
            print(f"wrote {fig}")
    return EXIT_OK


def cmd_walk(args) -> int:
    out = _outdir(args)
    (p,) = _parse_primes(args.prime)
    g = build_graph(p, seed=args.seed)
    if args.subgraph != "full":
        g = subgraph(g, args.subgraph)
    cfg = WalkConfig(steps=args.steps, seed=args.seed, start=args.start,
                     subgraph=args.subgraph)
    stats = random_walk(g, cfg, keep_trajectory=True)
    base = os.path.join(out, f"walk_p{p}_n{args.steps}_s{args.seed}")
    _write(base + ".json",
           json.dumps(walk_json_dict(stats), indent=2, sort_keys=True) + "\n")
    _write(base + ".csv", walk_csv(g, stats))
    if not args.no_figures:
        from .report import walk_figure

        walk_figure(g, stats, base + ".png")
    print(f"p={p}: {args.steps} steps, product ratio {stats.product_ratio:.5f} "
          f"(scaled {stats.scaled_ratio:.4f}/p), exact stationary mass "
          f"{stats.expected_product_mass:.5f} -> {base}.*")
    return EXIT_OK


def _verify_one(p: int, seed: int, extended: bool) -> list:
    checks = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except (FieldError, SpectraError) as exc:
            ok, detail = False, str(exc)
        checks.append((name, ok, detail))
        return ok

    g = build_graph(p, seed=seed)
    gj = subgraph(g, "jacobian")
    ge = subgraph(g, "product")

    check("out-weight sums = 15",
          lambda: (all(g.deg(v) == 15 for v in g.vertex_ids()), ""))
    check("census matches closed forms",
          lambda: (census(g).ok, str(census(g).deltas)))
    check("aggregate ratio principle",
          lambda: (not ratio_principle_violations(g),
                   str(ratio_principle_violations(g)[:3])))
    check("dual round trip on all edges",
          lambda: (dual_round_trip(g) == len(g.edges), ""))

    def stationarity():
        for graph in (g, gj, ge):
            phi = stationary_closed_form(graph)
            if not verify_stationary(graph, phi):
                return False, f"M phi != phi on {graph.kind}"
            if not verify_detailed_balance(graph, phi):
                return False, f"detailed balance fails on {graph.kind}"
        return True, ""

    check("stationarity and detailed balance (G, J, E)", stationarity)

    def connectivity():
        for graph, name in ((g, "G"), (gj, "J"), (ge, "E")):
            if not is_strongly_connected(graph):
                return False, f"{name} not strongly connected"
            if period(graph) != 1:
                return False, f"{name} not aperiodic"
        return True, ""

    check("connectivity and aperiodicity (G, J, E)", connectivity)

    def diameters():
        dg, dj = diameter(g), diameter(gj)
        if not (dg - 2 <= dj <= 2 * dg):
            return False, f"d(G)={dg}, d(J)={dj}"
        return True, f"d(G)={dg}, d(J)={dj}, d(E)={diameter(ge)}"

    check("diameter inequalities", diameters)

    def kt_counts():
        expected = {"A": 0, "II": 0, "I": 1, "IV": 1, "VI": 1, "III": 2, "V": 2}
        for vid, n in product_neighbor_edge_counts(g).items():
            t = g.vertices[vid].ra_type
            if n != expected[t]:
                return False, f"vertex {vid} type {t} has {n} product edges"
        return True, ""

    check("Katsura-Takashima product-edge counts", kt_counts)

    if p % 12 == 11:
        def imbalance():
            g1 = build_gamma1(p, seed=seed)
            spec = imbalance_spec_from_graph(g1)
            sol = linear_imbalance_solve(spec)
            want = {"E": Fraction(1), "E0": Fraction(1, 3),
                    "E1728": Fraction(1, 2)}
            first = spec.classes[0]
            scale = sol.alphas[first] / want[first]
            got = {k: v / scale for k, v in sol.alphas.items()}
            ok = sol.composable and all(got[c] == want[c] for c in spec.classes)
            return (ok, str(got))

        check("Gamma_1 linear imbalance (1, 1/3, 1/2)", imbalance)

        def gamma1_checks():
            g1 = build_gamma1(p, seed=seed)
            if not all(g1.deg(v) == 3 for v in g1.vertex_ids()):
                return False, "out-weight != 3"
            if not is_strongly_connected(g1):
                return False, "Gamma_1 not connected"
            return True, ""

        check("Gamma_1 structure", gamma1_checks)

    if extended:
        check("extended per-edge dual transport",
              lambda: ((lambda bad: (not bad, str(bad[:3])))(
                  extended_dual_transport(g))))

    return checks


def cmd_verify(args) -> int:
    failed = False
    for p in _parse_primes(args.prime):
        checks = _verify_one(p, args.seed, args.extended_checks)
        for name, ok, detail in checks:
            tag = "PASS" if ok else "FAIL"
            suffix = f"  [{detail}]" if detail and not ok else (
                f"  ({detail})" if detail else "")
            print(f"p={p}: {tag}  {name}{suffix}")
            failed = failed or not ok
    if failed:
        raise VerifyFailure("one or more invariants failed")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superspecial",
        description="Superspecial (2,2)-isogeny graphs: construction, "
                    "classification, and spectral analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-p", "--prime", required=True,
                        help="prime p, or an inclusive range a..b")
        sp.add_argument("--seed", type=int, default=0,
                        help="global seed for all randomized subroutines")
        sp.add_argument("--out", default=None,
                        help=f"output directory (default ${OUT_ENV} or .)")
        sp.add_argument("--no-figures", action="store_true",
                        help="skip matplotlib figure output")

    sp = sub.add_parser("build", help="build the graph and export JSON/DOT/CSV")
    common(sp)
    sp.add_argument("--format", action="append",
                    choices=["json", "dot", "csv"],
                    help="restrict export formats (default: all)")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("spectra",
                        help="diameters and scaled eigenvalues, CSV + figures")
    common(sp)
    sp.add_argument("--dense-threshold", type=int, default=None,
                    help="vertex count above which the Lanczos solver is used")
    sp.set_defaults(func=cmd_spectra)

    sp = sub.add_parser("walk", help="seeded random walk with statistics")
    common(sp)
    sp.add_argument("-n", "--steps", type=int, default=10000)
    sp.add_argument("--start", type=int, default=None, help="start vertex id")
    sp.add_argument("--subgraph", choices=["full", "jacobian", "product"],
                    default="full")
    sp.set_defaults(func=cmd_walk)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    sp.add_argument("--extended-checks", action="store_true",
                    help="per-edge dual transport (slow)")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphBuildError, SpectraError, VerifyFailure) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FieldError, ValueError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
