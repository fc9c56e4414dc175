"""Structural metrics on directed snapshot graphs.

The graph container is a compact CSR adjacency over dense integer node ids;
loaders intern arbitrary string labels.  Metrics follow the conventions of
scale-free network analysis: directed density E/(N(N-1)), Shannon entropy
of the degree histogram, BFS-sampled effective diameter and mean distance
over reachable ordered pairs, mean local clustering on the undirected
projection, and maximum-likelihood tail fits (discrete power law with
KS-minimizing k_min in the style of Clauset et al., and lognormal).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.optimize import minimize_scalar
from scipy.special import ndtr, zeta

__all__ = [
    "SnapshotGraph",
    "PowerlawFit",
    "LognormalFit",
    "density",
    "mean_degree",
    "degree_entropy",
    "normalized_structural_entropy",
    "entropy_reference_curve",
    "effective_diameter",
    "avg_shortest_path",
    "clustering_coefficient",
    "powerlaw_fit",
    "lognormal_fit",
]

_DIRECTIONS = ("in", "out", "total")


@dataclass
class SnapshotGraph:
    """Directed graph of one corpus snapshot.

    Arcs are deduplicated and self-loops are dropped from the adjacency at
    construction; both removals are counted and reported.  All metric
    edge counts therefore refer to the cleaned arc set.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    labels: list[str] | None = None
    self_loop_count: int = 0
    duplicate_count: int = 0
    _out: sparse.csr_matrix | None = field(default=None, repr=False, compare=False)
    _in: sparse.csr_matrix | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        edges: np.ndarray | list[tuple[int, int]],
        n: int | None = None,
        labels: list[str] | None = None,
    ) -> "SnapshotGraph":
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 1
        if n < 1:
            raise ValueError("graph needs at least one node")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint outside [0, {n})")
        loops = arr[:, 0] == arr[:, 1]
        self_loops = int(np.count_nonzero(loops))
        arr = arr[~loops]
        before = len(arr)
        if len(arr):
            arr = np.unique(arr, axis=0)
        dupes = before - len(arr)
        return cls(
            n=n,
            src=arr[:, 0].copy(),
            dst=arr[:, 1].copy(),
            labels=labels,
            self_loop_count=self_loops,
            duplicate_count=dupes,
        )

    @property
    def arc_count(self) -> int:
        return int(len(self.src))

    def out_csr(self) -> sparse.csr_matrix:
        if self._out is None:
            data = np.ones(len(self.src), dtype=np.int8)
            self._out = sparse.csr_matrix((data, (self.src, self.dst)), shape=(self.n, self.n))
        return self._out

    def in_csr(self) -> sparse.csr_matrix:
        if self._in is None:
            data = np.ones(len(self.src), dtype=np.int8)
            self._in = sparse.csr_matrix((data, (self.dst, self.src)), shape=(self.n, self.n))
        return self._in

    def degrees(self, direction: str = "total") -> np.ndarray:
        if direction not in _DIRECTIONS:
            raise ValueError(f"direction must be one of {_DIRECTIONS}")
        out_deg = np.bincount(self.src, minlength=self.n)
        in_deg = np.bincount(self.dst, minlength=self.n)
        if direction == "out":
            return out_deg
        if direction == "in":
            return in_deg
        return out_deg + in_deg

    def undirected_csr(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency of the undirected projection."""
        s = np.concatenate([self.src, self.dst])
        d = np.concatenate([self.dst, self.src])
        a = sparse.csr_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(self.n, self.n))
        a.data[:] = 1
        return a


def density(g: SnapshotGraph) -> float:
    """Directed density E / (N (N - 1)), self-loops excluded from E."""
    if g.n < 2:
        raise ValueError("density needs at least 2 nodes")
    return g.arc_count / (g.n * (g.n - 1))


def mean_degree(g: SnapshotGraph) -> float:
    """Arcs per node, E / N."""
    return g.arc_count / g.n


def degree_entropy(g: SnapshotGraph, direction: str = "total") -> float:
    """Shannon entropy (natural log) of the empirical degree histogram."""
    deg = g.degrees(direction)
    _, counts = np.unique(deg, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log(p)).sum())


def normalized_structural_entropy(g: SnapshotGraph, direction: str = "total") -> float:
    """Degree entropy divided by ln N; lies in [0, 1]."""
    if g.n < 2:
        raise ValueError("normalized entropy needs at least 2 nodes")
    return degree_entropy(g, direction) / math.log(g.n)


def entropy_reference_curve(n: float, a: float, c: float, x: float) -> float:
    """Reference entropy trend (a/c^2) * x * (ln(N)^2 - 2 ln(N) + 2).

    The three shape constants are caller-supplied; this is a plotting aid
    for comparing measured entropies against a log-squared trend, so N may
    be any real >= 2.
    """
    if n < 2:
        raise ValueError("reference curve defined for N >= 2")
    if c == 0:
        raise ValueError("c must be nonzero")
    ln = math.log(n)
    return (a / c**2) * x * (ln * ln - 2.0 * ln + 2.0)


# ---------------------------------------------------------------------------
# BFS-sampled distance metrics


def _frontier_bfs(indptr: np.ndarray, indices: np.ndarray, n: int, source: int) -> np.ndarray:
    """Distances from ``source`` (-1 where unreachable), level-synchronous."""
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        counts = (indptr[frontier + 1] - indptr[frontier]).astype(np.int64)
        total = int(counts.sum())
        if total == 0:
            break
        excl = np.concatenate([[0], counts[:-1]]).cumsum()
        offs = np.repeat(indptr[frontier].astype(np.int64) - excl, counts) + np.arange(total)
        neigh = indices[offs]
        new = neigh[dist[neigh] < 0]
        if new.size == 0:
            break
        dist[new] = level
        frontier = np.unique(new)
    return dist


def _sample_distances(g: SnapshotGraph, sources: int, seed: int) -> np.ndarray:
    """Pooled finite distances (self-pairs excluded) from BFS sources.

    When ``sources >= n`` every node is used in index order (exhaustive and
    seed-independent); otherwise sources are drawn without replacement from
    a seeded generator, so results are reproducible.
    """
    if sources < 1:
        raise ValueError("need at least one BFS source")
    csr = g.out_csr()
    indptr, indices = csr.indptr, csr.indices
    if sources >= g.n:
        chosen = np.arange(g.n, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(g.n, size=sources, replace=False)).astype(np.int64)
    pools = []
    for s in chosen:
        dist = _frontier_bfs(indptr, indices, g.n, int(s))
        reachable = dist[dist > 0]
        if reachable.size:
            pools.append(reachable)
    if not pools:
        return np.empty(0, dtype=np.int32)
    return np.concatenate(pools)


def effective_diameter(
    g: SnapshotGraph, quantile: float = 0.9, sources: int = 64, seed: int = 0
) -> int:
    """Smallest d covering >= ``quantile`` of reachable ordered pairs.

    Unreachable pairs are ignored; a graph with no reachable pairs has
    effective diameter 0.  Exhaustive when ``sources >= N``, otherwise based
    on seeded BFS sampling.
    """
    if not 0.0 < quantile <= 1.0:
        raise ValueError("quantile must lie in (0, 1]")
    dists = _sample_distances(g, sources, seed)
    if dists.size == 0:
        return 0
    dists.sort()
    rank = max(int(math.ceil(quantile * dists.size)) - 1, 0)
    return int(dists[rank])


def avg_shortest_path(g: SnapshotGraph, sources: int = 64, seed: int = 0) -> float:
    """Mean distance over sampled reachable ordered pairs (0 if none)."""
    dists = _sample_distances(g, sources, seed)
    return float(dists.mean()) if dists.size else 0.0


def clustering_coefficient(g: SnapshotGraph) -> float:
    """Mean local clustering of the undirected projection.

    Nodes of degree < 2 contribute 0.  Triangles are counted through the
    sparse product A.(A@A), which stays tractable well past 10^5 nodes for
    the sparse graphs this package targets.
    """
    if g.n < 3:
        raise ValueError("clustering needs at least 3 nodes")
    a = g.undirected_csr()
    deg = np.asarray(a.sum(axis=1)).ravel().astype(np.int64)
    tri = np.asarray(a.multiply(a @ a).sum(axis=1)).ravel() / 2.0
    pairs = deg * (deg - 1) / 2.0
    mask = deg >= 2
    local = np.zeros(g.n)
    local[mask] = tri[mask] / pairs[mask]
    return float(local.mean())


# ---------------------------------------------------------------------------
# tail-distribution fits


@dataclass(frozen=True)
class PowerlawFit:
    exponent: float
    kmin: int
    ks_distance: float
    n_tail: int


@dataclass(frozen=True)
class LognormalFit:
    mu: float
    sigma: float
    ks_distance: float


MIN_TAIL = 50


def _discrete_powerlaw_mle(tail: np.ndarray, kmin: int) -> float:
    slog = float(np.log(tail).sum())
    n = len(tail)

    def nll(alpha: float) -> float:
        return alpha * slog + n * math.log(zeta(alpha, kmin))

    res = minimize_scalar(nll, bounds=(1.05, 8.0), method="bounded", options={"xatol": 1e-8})
    return float(res.x)


def _powerlaw_ks(tail: np.ndarray, kmin: int, alpha: float) -> float:
    ks = np.unique(tail)
    z = zeta(alpha, kmin)
    ccdf_fit = zeta(alpha, ks) / z
    idx = np.searchsorted(tail, ks, side="left")
    ccdf_emp = 1.0 - idx / len(tail)
    return float(np.abs(ccdf_fit - ccdf_emp).max())


def powerlaw_fit(degrees: np.ndarray, kmin: int | None = None) -> PowerlawFit:
    """Discrete maximum-likelihood power-law fit of a degree sample.

    The exponent maximizes the Hurwitz-zeta likelihood of the tail
    ``k >= kmin``; when ``kmin`` is None it is chosen to minimize the KS
    distance between empirical and fitted tail CDFs.  Requires at least
    ``MIN_TAIL`` tail samples spanning more than one distinct value.
    """
    xs = np.sort(np.asarray(degrees, dtype=np.int64))
    xs = xs[xs >= 1]
    if kmin is not None:
        tail = xs[xs >= kmin]
        if len(tail) < MIN_TAIL:
            raise ValueError(f"fewer than {MIN_TAIL} samples >= kmin={kmin}")
        if np.unique(tail).size < 2:
            raise ValueError("degenerate tail: all degrees equal")
        alpha = _discrete_powerlaw_mle(tail, kmin)
        return PowerlawFit(alpha, int(kmin), _powerlaw_ks(tail, kmin, alpha), len(tail))

    best: PowerlawFit | None = None
    for candidate in np.unique(xs)[:-1]:
        tail = xs[xs >= candidate]
        if len(tail) < MIN_TAIL:
            break
        if np.unique(tail).size < 2:
            continue
        alpha = _discrete_powerlaw_mle(tail, int(candidate))
        ks = _powerlaw_ks(tail, int(candidate), alpha)
        if best is None or ks < best.ks_distance:
            best = PowerlawFit(alpha, int(candidate), ks, len(tail))
    if best is None:
        raise ValueError(f"insufficient tail: need {MIN_TAIL} samples above some kmin")
    return best


def lognormal_fit(samples: np.ndarray) -> LognormalFit:
    """Lognormal MLE: mu and sigma are moments of the log-values.

    ``sigma`` is the population standard deviation (the MLE), so constant
    samples give sigma 0.  KS distance compares the empirical CDF with the
    fitted lognormal CDF.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 3:
        raise ValueError("need at least 3 samples")
    if np.any(x <= 0):
        raise ValueError("lognormal samples must be positive")
    logs = np.log(x)
    mu = float(logs.mean())
    sigma = float(logs.std(ddof=0))
    xs = np.sort(x)
    if sigma == 0.0:
        fitted = (xs >= math.exp(mu)).astype(float)
    else:
        fitted = ndtr((np.log(xs) - mu) / sigma)
    n = xs.size
    upper = np.arange(1, n + 1) / n - fitted
    lower = fitted - np.arange(0, n) / n
    ks = float(max(upper.max(), lower.max()))
    return LognormalFit(mu, sigma, ks)
