"""Preferential-attachment (Barabasi-Albert) baseline graphs.

The generator grows a graph from an m-clique; every arriving node attaches
to m distinct existing nodes with probability proportional to degree,
sampled O(1) per draw from an urn of edge endpoints.  Duplicate targets
are rejected and redrawn.  The result is exposed as a directed
:class:`~knowgrow.graph_metrics.SnapshotGraph` with symmetric arcs so the
one metrics engine serves both real and simulated snapshots.

``theory`` supplies the closed-form reference column for such graphs
(density m/n, diameter ln N/ln ln N, clustering (ln N)^2/N, degree law
P(k) = 2 m^2 k^-3) and ``compare`` tabulates empirical-to-reference ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_metrics import (
    SnapshotGraph,
    clustering_coefficient,
    effective_diameter,
    powerlaw_fit,
)

__all__ = ["BAParams", "BATheory", "generate", "theory", "compare", "DEFAULT_BANDS"]


@dataclass(frozen=True)
class BAParams:
    n: int
    m: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.n > self.m >= 1:
            raise ValueError(f"require n > m >= 1, got n={self.n}, m={self.m}")

    @property
    def edge_count(self) -> int:
        """Undirected edges after full growth: m(n-m) + m(m-1)/2."""
        return self.m * (self.n - self.m) + self.m * (self.m - 1) // 2


def generate(params: BAParams) -> SnapshotGraph:
    """Grow a preferential-attachment graph; bit-identical per seed.

    The undirected edge list is materialized as symmetric arcs, so the
    snapshot has ``2 * params.edge_count`` arcs and out-degrees equal to
    undirected degrees.
    """
    n, m = params.n, params.m
    rng = np.random.default_rng(params.seed)
    n_edges = params.edge_count
    urn = np.empty(2 * n_edges, dtype=np.int64)
    src = np.empty(n_edges, dtype=np.int64)
    dst = np.empty(n_edges, dtype=np.int64)

    k = 0
    e = 0
    for i in range(m):
        for j in range(i + 1, m):
            src[e] = i
            dst[e] = j
            urn[k] = i
            urn[k + 1] = j
            k += 2
            e += 1

    buf = rng.random(1 << 16)
    bi = 0
    for v in range(m, n):
        chosen: list[int] = []
        if k == 0:
            chosen.append(0)  # m = 1: the single seed node carries no edges yet
        while len(chosen) < m:
            if bi >= buf.size:
                buf = rng.random(1 << 16)
                bi = 0
            u = int(urn[int(buf[bi] * k)])
            bi += 1
            if u not in chosen:
                chosen.append(u)
        for u in sorted(chosen):
            src[e] = u
            dst[e] = v
            urn[k] = u
            urn[k + 1] = v
            k += 2
            e += 1

    # arcs are simple and loop-free by construction: skip from_edges' dedup
    return SnapshotGraph(
        n=n,
        src=np.concatenate([src, dst]),
        dst=np.concatenate([dst, src]),
    )


@dataclass(frozen=True)
class BATheory:
    """Closed-form reference values for a preferential-attachment graph."""

    n: int
    m: int
    density: float
    effective_diameter: float
    clustering: float

    def pk(self, k: float | np.ndarray) -> float | np.ndarray:
        """Degree-law density 2 m^2 k^-3."""
        return 2.0 * self.m**2 * np.asarray(k, dtype=float) ** -3.0


def theory(params: BAParams) -> BATheory:
    if params.n < 10:
        raise ValueError("reference formulas assume n >= 10")
    n = params.n
    ln = math.log(n)
    return BATheory(
        n=n,
        m=params.m,
        density=params.m / n,
        effective_diameter=ln / math.log(ln),
        clustering=ln * ln / n,
    )


#: Acceptable empirical/reference ratio bands, per metric.
DEFAULT_BANDS: dict[str, tuple[float, float]] = {
    "density": (0.9, 1.1),
    "effective_diameter": (0.5, 2.0),
    "clustering": (0.2, 5.0),
    "powerlaw_exponent": (0.9, 1.1),
}


def compare(
    g: SnapshotGraph,
    params: BAParams,
    bands: dict[str, tuple[float, float]] | None = None,
    sources: int = 64,
) -> dict:
    """Empirical metrics of a generated graph against the theory column.

    ``g`` must have been produced by :func:`generate` with ``params``: the
    density row halves the symmetric arc count to recover undirected edges.
    Returns a JSON-ready report with one row per metric, the ratio to its
    reference, and a flag for ratios outside the configured band.
    """
    bands = {**DEFAULT_BANDS, **(bands or {})}
    ref = theory(params)
    undirected_edges = g.arc_count // 2
    emp_density = undirected_edges / (g.n * (g.n - 1))
    emp_diameter = effective_diameter(g, quantile=0.9, sources=sources, seed=params.seed)
    emp_clustering = clustering_coefficient(g)
    pl = powerlaw_fit(g.degrees("out"))

    rows = []
    for name, emp, reference in [
        ("density", emp_density, ref.density),
        ("effective_diameter", float(emp_diameter), ref.effective_diameter),
        ("clustering", emp_clustering, ref.clustering),
        ("powerlaw_exponent", pl.exponent, 3.0),
    ]:
        ratio = emp / reference
        lo, hi = bands[name]
        rows.append(
            {
                "metric": name,
                "empirical": emp,
                "reference": reference,
                "ratio": ratio,
                "band": [lo, hi],
                "within_band": bool(lo <= ratio <= hi),
            }
        )
    return {
        "n": params.n,
        "m": params.m,
        "seed": params.seed,
        "undirected_edges": undirected_edges,
        "powerlaw_kmin": pl.kmin,
        "rows": rows,
    }
