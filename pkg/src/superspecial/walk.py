"""Seeded random-walk simulation and distribution-convergence experiments.

Walks sample the next vertex with probability weight/degree using integer
cumulative-weight draws from a seeded generator, so runs are reproducible
bit for bit.  The primary convergence check propagates exact rational
point masses through the transition matrix; sampled walks are a secondary
statistical check against the closed-form stationary distribution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .graph import SuperspecialGraph
from .spectra import SpectralReport, mixing_bound, stationary_closed_form


@dataclass
class WalkConfig:
    steps: int
    seed: int = 0
    start: int | None = None      # vertex id; default: lowest id
    subgraph: str = "full"        # full | jacobian | product

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("need at least one step")


@dataclass
class WalkStats:
    p: int
    steps: int
    seed: int
    start: int
    visit_counts: dict
    product_hits: int
    product_ratio: float
    scaled_ratio: float           # (N / steps) * p
    expected_product_mass: float  # sum of phi over product vertices
    trajectory: list = dc_field(default_factory=list, repr=False)


def random_walk(g: SuperspecialGraph, cfg: WalkConfig,
                keep_trajectory: bool = False) -> WalkStats:
    """Walk cfg.steps steps; visit counts are over steps 1..n."""
    rng = random.Random(f"walk:{cfg.seed}")
    start = cfg.start if cfg.start is not None else g.vertex_ids()[0]
    counts = {v: 0 for v in g.vertex_ids()}
    trajectory = [start] if keep_trajectory else []
    current = start
    hits = 0
    for _ in range(cfg.steps):
        edges = g.out_edges(current)
        draw = rng.randrange(g.deg(current))
        acc = 0
        for e in edges:
            acc += e.weight
            if draw < acc:
                current = e.dst
                break
        counts[current] += 1
        if g.vertices[current].kind == "product":
            hits += 1
        if keep_trajectory:
            trajectory.append(current)
    phi = stationary_closed_form(g)
    mass = sum(phi[v] for v in g.vertex_ids()
               if g.vertices[v].kind == "product")
    ratio = hits / cfg.steps
    return WalkStats(p=g.p, steps=cfg.steps, seed=cfg.seed, start=start,
                     visit_counts=counts, product_hits=hits,
                     product_ratio=ratio, scaled_ratio=ratio * g.p,
                     expected_product_mass=float(mass),
                     trajectory=trajectory)


def exact_distribution(g: SuperspecialGraph, start: int, n: int) -> dict:
    """M^n applied to the point mass at start, in exact rationals."""
    dist = {v: Fraction(0) for v in g.vertex_ids()}
    dist[start] = Fraction(1)
    degs = {v: g.deg(v) for v in g.vertex_ids()}
    for _ in range(n):
        nxt = {v: Fraction(0) for v in dist}
        for u, mass in dist.items():
            if mass == 0:
                continue
            q = mass / degs[u]
            for e in g.out_edges(u):
                nxt[e.dst] += q * e.weight
        dist = nxt
    return dist


@dataclass
class ConvergenceReport:
    start: int
    n: int
    max_deviation: float
    max_bound: float
    violations: list
    ok: bool


def empirical_distribution_check(g: SuperspecialGraph, report: SpectralReport,
                                 start: int, n: int) -> ConvergenceReport:
    """Exact n-step distribution versus the stationary closed form.

    Every vertexwise deviation must sit below the spectral mixing bound;
    a violation would falsify the stationary-distribution computation.
    """
    phi = stationary_closed_form(g)
    dist = exact_distribution(g, start, n)
    violations = []
    max_dev = 0.0
    max_bound = 0.0
    for v in g.vertex_ids():
        dev = abs(float(dist[v] - phi[v]))
        bound = mixing_bound(g, report, start, v, n)
        max_dev = max(max_dev, dev)
        max_bound = max(max_bound, bound)
        if dev > bound + 1e-12:
            violations.append((v, dev, bound))
    return ConvergenceReport(start=start, n=n, max_deviation=max_dev,
                             max_bound=max_bound, violations=violations,
                             ok=not violations)


def walk_csv(g: SuperspecialGraph, stats: WalkStats) -> str:
    """step index, vertex id, vertex kind (requires a kept trajectory)."""
    lines = ["step,vertex,kind"]
    for t, v in enumerate(stats.trajectory):
        lines.append(f"{t},{v},{g.vertices[v].kind}")
    return "\n".join(lines) + "\n"


def walk_json_dict(stats: WalkStats) -> dict:
    return {
        "p": stats.p,
        "steps": stats.steps,
        "seed": stats.seed,
        "start": stats.start,
        "product_hits": stats.product_hits,
        "product_ratio": stats.product_ratio,
        "scaled_ratio": stats.scaled_ratio,
        "expected_product_mass": stats.expected_product_mass,
        "visit_counts": {str(k): v for k, v in sorted(stats.visit_counts.items())},
    }
