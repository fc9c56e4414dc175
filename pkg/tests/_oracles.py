"""Independent reference implementations used to generate expected values.

Everything here is deliberately naive and structurally unrelated to the
package code it checks: fixed-step Simpson quadrature, deque-based BFS,
per-focal set enumeration for disruption scores, and level-by-level
closure for category counting.
"""
from __future__ import annotations

from collections import deque

import numpy as np


def simpson_li(x: float, steps_per_segment: int = 4096) -> float:
    """Fixed-step composite Simpson value of int_2^x du/ln(u).

    The range is cut into dyadic segments [2,4], [4,8], ... so the fixed
    step stays proportional to the integrand's scale; the node set is
    fully predetermined (no adaptivity).
    """
    if x < 2.0:
        raise ValueError("x must be >= 2")
    if x == 2.0:
        return 0.0
    total = 0.0
    lo = 2.0
    while lo < x:
        hi = min(lo * 2.0, x)
        n = steps_per_segment  # even
        u = np.linspace(lo, hi, n + 1)
        f = 1.0 / np.log(u)
        h = (hi - lo) / n
        total += (h / 3.0) * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
        lo = hi
    return total


def bfs_distances(n: int, adjacency: dict[int, list[int]], source: int) -> list[int]:
    """Plain deque BFS; -1 marks unreachable nodes."""
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency.get(u, ()):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def all_pairs_stats(n: int, edges: list[tuple[int, int]]) -> tuple[int, float, list[int]]:
    """(exact reachable-pair diameter, mean distance, all pair distances)."""
    adjacency: dict[int, list[int]] = {}
    for s, d in edges:
        adjacency.setdefault(s, []).append(d)
    pooled: list[int] = []
    for src in range(n):
        for dist in bfs_distances(n, adjacency, src):
            if dist > 0:
                pooled.append(dist)
    if not pooled:
        return 0, 0.0, []
    return max(pooled), sum(pooled) / len(pooled), pooled


def naive_disruption(
    paper_ids: list[str], edges: list[tuple[str, str]], focal: str
) -> tuple[int, int, int, float]:
    """Per-focal enumeration over every other paper, straight from the edges."""
    cites: dict[str, set[str]] = {p: set() for p in paper_ids}
    for citing, cited in edges:
        cites[citing].add(cited)
    refs = cites[focal]
    n_i = n_j = n_k = 0
    for p in paper_ids:
        if p == focal:
            continue
        cites_focal = focal in cites[p]
        cites_ref = bool(cites[p] & refs)
        if cites_focal and not cites_ref:
            n_i += 1
        elif cites_focal and cites_ref:
            n_j += 1
        elif cites_ref:
            n_k += 1
    denom = n_i + n_j + n_k
    d = (n_i - n_j) / denom if denom else 0.0
    return n_i, n_j, n_k, d


def closure_member_counts(
    edges: list[tuple[str, str, str]], roots: list[str], depth: int
) -> tuple[int, int]:
    """(articles, categories) within ``depth`` levels, by edge relaxation.

    Category distances start at 0 on the roots and are relaxed one level
    per sweep, which handles cycles and multi-parent links without any
    traversal machinery.
    """
    children: dict[str, list[str]] = {}
    articles_of: dict[str, set[str]] = {}
    categories = set()
    for child, parent, kind in edges:
        categories.add(parent)
        if kind == "category":
            categories.add(child)
            children.setdefault(parent, []).append(child)
        else:
            articles_of.setdefault(parent, set()).add(child)
    reached = set(roots)
    for _ in range(depth):
        new = set()
        for cat in reached:
            new.update(children.get(cat, ()))
        if new <= reached:
            break
        reached |= new
    articles: set[str] = set()
    for cat in reached:
        articles |= articles_of.get(cat, set())
    return len(articles), len(reached)


def sample_discrete_powerlaw(
    exponent: float, kmin: int, size: int, seed: int, kmax: int = 200_000
) -> np.ndarray:
    """Inverse-CDF sampling of p(k) proportional to k^-exponent, k >= kmin."""
    ks = np.arange(kmin, kmax + 1, dtype=float)
    weights = ks**-exponent
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    u = rng.random(size)
    return (np.searchsorted(cdf, u, side="left") + kmin).astype(np.int64)


def topological_order_exists(names: list[str], edges: list[tuple[str, str]]) -> bool:
    """Kahn's algorithm success test on the given directed edges."""
    indeg = {n: 0 for n in names}
    out: dict[str, list[str]] = {n: [] for n in names}
    for a, b in edges:
        out[a].append(b)
        indeg[b] += 1
    queue = deque(n for n in names if indeg[n] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen == len(names)
