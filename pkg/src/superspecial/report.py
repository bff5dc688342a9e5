"""Figure rendering for the command-line report paths.

Every figure lands next to its delimited output: spectra runs chart the
scaled eigenvalues (with the conjectured [11, 12] band) and diameters
against p, graph builds draw the weighted graph for small vertex counts,
and walk runs compare empirical visit frequencies with the stationary
distribution.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .graph import SuperspecialGraph
from .spectra import stationary_closed_form
from .walk import WalkStats


def spectra_figures(reports_by_prime: dict, out_prefix: str) -> list:
    """Two charts from Appendix-style rows: scaled lambdas and diameters."""
    primes = sorted(reports_by_prime)
    rows = [reports_by_prime[p] for p in primes]
    written = []

    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(primes, [r[0].lambda_star_scaled for r in rows], "o-", label=r"$\tilde\lambda_\star(G)$")
    ax.plot(primes, [r[1].lambda_star_scaled for r in rows], "s-", label=r"$\tilde\lambda_\star(J)$")
    ax.plot(primes, [r[2].lambda_star_scaled for r in rows], "^-", label=r"$\tilde\lambda_\star(E)$")
    ax.axhspan(11, 12, alpha=0.15, color="gray", label="conjectured band (p >= 41)")
    ax.axhline(2 * math.sqrt(14), linestyle="--", color="black", linewidth=0.8,
               label=r"Ramanujan bound $2\sqrt{14}$")
    ax.set_xlabel("p")
    ax.set_ylabel("scaled second eigenvalue")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = f"{out_prefix}_lambda.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(primes, [r[0].diameter for r in rows], "o-", label="d(G)")
    ax.plot(primes, [r[1].diameter for r in rows], "s-", label="d(J)")
    ax.plot(primes, [r[2].diameter for r in rows], "^-", label="d(E)")
    ax.set_xlabel("p")
    ax.set_ylabel("diameter")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = f"{out_prefix}_diameter.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def graph_figure(g: SuperspecialGraph, path: str, max_vertices: int = 60):
    """Circular drawing with weight labels, for small graphs."""
    ids = g.vertex_ids()
    n = len(ids)
    if n > max_vertices:
        return None
    pos = {v: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
           for i, v in enumerate(ids)}
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    for e in g.edges:
        x1, y1 = pos[e.src]
        x2, y2 = pos[e.dst]
        if e.src == e.dst:
            r = 0.12
            cx, cy = x1 * (1 + r), y1 * (1 + r)
            ax.add_patch(plt.Circle((cx, cy), r, fill=False, color="tab:gray",
                                    linewidth=0.8))
            ax.annotate(str(e.weight), (x1 * (1 + 2.4 * r), y1 * (1 + 2.4 * r)),
                        fontsize=7, ha="center", color="tab:red")
        else:
            ax.annotate("", xy=(x2, y2), xytext=(x1, y1),
                        arrowprops=dict(arrowstyle="-|>", color="tab:gray",
                                        lw=0.8, shrinkA=12, shrinkB=12,
                                        connectionstyle="arc3,rad=0.08"))
            ax.annotate(str(e.weight), (0.62 * x1 + 0.38 * x2, 0.62 * y1 + 0.38 * y2),
                        fontsize=7, ha="center", color="tab:red")
    for v in ids:
        x, y = pos[v]
        rec = g.vertices[v]
        color = "tab:blue" if rec.kind == "jacobian" else "tab:orange"
        ax.plot([x], [y], "o", markersize=16, color=color, zorder=3)
        ax.annotate(rec.ra_type, (x, y), fontsize=6, ha="center", va="center",
                    color="white", zorder=4)
    ax.set_xlim(-1.45, 1.45)
    ax.set_ylim(-1.45, 1.45)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"superspecial (2,2)-isogeny graph, p = {g.p}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def walk_figure(g: SuperspecialGraph, stats: WalkStats, path: str,
                max_vertices: int = 80):
    """Empirical visit frequency against the stationary distribution."""
    ids = g.vertex_ids()
    if len(ids) > max_vertices:
        ids = sorted(ids, key=lambda v: -stats.visit_counts[v])[:max_vertices]
    phi = stationary_closed_form(g)
    emp = [stats.visit_counts[v] / stats.steps for v in ids]
    exact = [float(phi[v]) for v in ids]
    x = range(len(ids))
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(x, emp, width=0.8, alpha=0.6, label=f"empirical ({stats.steps} steps)")
    ax.plot(x, exact, "k_", markersize=9, label="stationary deg/#RA")
    ax.set_xlabel("vertex (by id)" if len(ids) == len(g.vertices)
                  else "vertex (most visited)")
    ax.set_ylabel("probability")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
