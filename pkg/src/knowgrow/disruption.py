"""Disruption index over citation graphs and ranked-set intersections.

The disruption index of a focal paper classifies the papers engaging with
its citation neighbourhood (Funk & Owen-Smith 2017): among later works,

- ``n_i`` cite the focal paper but none of its references,
- ``n_j`` cite the focal paper and at least one reference,
- ``n_k`` cite at least one reference but not the focal paper,

and ``d = (n_i - n_j) / (n_i + n_j + n_k)`` in [-1, 1].  A paper nobody
engages with (zero denominator) is reported with ``d = 0`` and
``defined=False`` rather than dropped, which keeps rankings stable.

No publication-year cutoff is applied when collecting the engaging papers;
callers who want one can filter the ranking by year range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CitationGraph",
    "DScore",
    "d_index",
    "d_index_all",
    "rank",
    "intersect_analysis",
    "inclusion_lag",
]

YEAR_RANGE = (1900, 2100)


@dataclass
class CitationGraph:
    """Papers with publication years; directed arcs run citing -> cited."""

    ids: list[str]
    years: np.ndarray
    fields: list[str | None]
    index: dict[str, int]
    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray

    @classmethod
    def build(
        cls,
        papers: list[tuple],
        edges: list[tuple[str, str]],
    ) -> "CitationGraph":
        """Build from ``(id, year[, field])`` rows and ``(citing, cited)`` pairs."""
        ids: list[str] = []
        years: list[int] = []
        fields: list[str | None] = []
        index: dict[str, int] = {}
        for row in papers:
            pid, year = row[0], int(row[1])
            fld = row[2] if len(row) > 2 else None
            if pid in index:
                raise ValueError(f"duplicate paper id {pid!r}")
            if not YEAR_RANGE[0] <= year <= YEAR_RANGE[1]:
                raise ValueError(f"year {year} of {pid!r} outside {YEAR_RANGE}")
            index[pid] = len(ids)
            ids.append(pid)
            years.append(year)
            fields.append(fld)

        n = len(ids)
        srcs = np.empty(len(edges), dtype=np.int64)
        dsts = np.empty(len(edges), dtype=np.int64)
        for e, (citing, cited) in enumerate(edges):
            try:
                a, b = index[citing], index[cited]
            except KeyError as exc:
                raise ValueError(f"edge references unknown paper id {exc.args[0]!r}") from None
            if a == b:
                raise ValueError(f"self-citation on {citing!r}")
            srcs[e] = a
            dsts[e] = b

        def csr(row: np.ndarray, col: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            order = np.lexsort((col, row))
            row, col = row[order], col[order]
            ptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(ptr, row + 1, 1)
            return ptr.cumsum(), col

        out_ptr, out_idx = csr(srcs, dsts)
        in_ptr, in_idx = csr(dsts, srcs)
        return cls(ids, np.asarray(years), fields, index, out_ptr, out_idx, in_ptr, in_idx)

    def __len__(self) -> int:
        return len(self.ids)

    def references(self, i: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[i] : self.out_ptr[i + 1]]

    def citers(self, i: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[i] : self.in_ptr[i + 1]]

    def citation_counts(self) -> np.ndarray:
        return self.in_ptr[1:] - self.in_ptr[:-1]


@dataclass(frozen=True)
class DScore:
    paper: str
    n_i: int
    n_j: int
    n_k: int
    d: float
    defined: bool

    def to_json(self) -> dict:
        return {
            "paper": self.paper,
            "n_i": self.n_i,
            "n_j": self.n_j,
            "n_k": self.n_k,
            "d": self.d,
            "defined": self.defined,
        }


def _score(g: CitationGraph, focal: int) -> DScore:
    refs = set(int(r) for r in g.references(focal))
    citer_ids = g.citers(focal)
    n_i = 0
    n_j = 0
    for c in citer_ids:
        cited = g.references(int(c))
        if refs and any(int(x) in refs for x in cited):
            n_j += 1
        else:
            n_i += 1
    citer_set = set(int(c) for c in citer_ids)
    k_set: set[int] = set()
    for r in refs:
        k_set.update(int(c) for c in g.citers(r))
    k_set -= citer_set
    k_set.discard(focal)
    n_k = len(k_set)
    denom = n_i + n_j + n_k
    if denom == 0:
        return DScore(g.ids[focal], 0, 0, 0, 0.0, False)
    return DScore(g.ids[focal], n_i, n_j, n_k, (n_i - n_j) / denom, True)


def d_index(g: CitationGraph, focal: str) -> DScore:
    """Disruption score of one focal paper."""
    if focal not in g.index:
        raise KeyError(f"unknown paper id {focal!r}")
    return _score(g, g.index[focal])


def d_index_all(g: CitationGraph) -> dict[str, DScore]:
    """Disruption scores for every paper, keyed and ordered by sorted id.

    Work per focal paper is proportional to the out-degrees of its citers
    plus the in-degrees of its references (reference sets are hashed once
    per focal), so whole-graph scoring stays near-linear in practice.
    """
    scores = {g.ids[i]: _score(g, i) for i in range(len(g))}
    return {pid: scores[pid] for pid in sorted(scores)}


def rank(
    g: CitationGraph,
    key: str = "citations",
    k: int | None = None,
    year_range: tuple[int, int] | None = None,
) -> list[str]:
    """Paper ids in descending order of citations or disruption.

    Ties break by ascending id; ``year_range`` (inclusive) filters by
    publication year before ranking.  ``k`` truncates the result and may
    exceed the population.
    """
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    if key == "citations":
        values = {g.ids[i]: int(c) for i, c in enumerate(g.citation_counts())}
    elif key == "disruption":
        values = {pid: s.d for pid, s in d_index_all(g).items()}
    else:
        raise ValueError(f"unknown ranking key {key!r} (expected citations|disruption)")
    candidates = range(len(g))
    if year_range is not None:
        lo, hi = year_range
        candidates = [i for i in candidates if lo <= int(g.years[i]) <= hi]
    ordered = sorted((g.ids[i] for i in candidates), key=lambda p: (-values[p], p))
    return ordered[:k] if k is not None else ordered


def intersect_analysis(
    a: set[str],
    b: set[str],
    ctop: list[str],
    percentiles: list[float],
) -> list[dict]:
    """Overlap of two id sets with prefixes of a ranked id list.

    For each percentile p the top ``floor(p% of len(ctop))`` ids form the
    prefix; each intersection size is reported as a fraction of the owning
    set's size and as a fraction of the prefix size.
    """
    if not ctop:
        raise ValueError("ctop ranking is empty")
    for p in percentiles:
        if not 0.0 < p <= 100.0:
            raise ValueError(f"percentile {p} outside (0, 100]")
    rows = []
    for p in percentiles:
        size = int(len(ctop) * p / 100.0)
        prefix = set(ctop[:size])
        ia = len(a & prefix)
        ib = len(b & prefix)
        rows.append(
            {
                "percentile": p,
                "prefix_size": size,
                "a_count": ia,
                "b_count": ib,
                "a_frac_of_set": ia / len(a) if a else 0.0,
                "b_frac_of_set": ib / len(b) if b else 0.0,
                "a_frac_of_prefix": ia / size if size else 0.0,
                "b_frac_of_prefix": ib / size if size else 0.0,
            }
        )
    return rows


def inclusion_lag(
    pub_years: np.ndarray,
    incl_years: np.ndarray,
    fields: list[str] | None = None,
) -> dict:
    """Lag between publication and inclusion years, optionally per field.

    Negative lags (inclusion before publication) are tolerated but counted
    in ``negative_count`` so dirty records are visible.
    """
    pub = np.asarray(pub_years, dtype=np.int64)
    incl = np.asarray(incl_years, dtype=np.int64)
    if pub.shape != incl.shape:
        raise ValueError(f"length mismatch: {pub.shape} vs {incl.shape}")
    if fields is not None and len(fields) != len(pub):
        raise ValueError("fields vector must align with the year vectors")
    lags = incl - pub
    report = {
        "mean_lag": float(lags.mean()) if lags.size else 0.0,
        "lags": lags.tolist(),
        "negative_count": int(np.count_nonzero(lags < 0)),
        "per_field": {},
    }
    if fields is not None:
        per: dict[str, list[int]] = {}
        for f, lag in zip(fields, lags):
            per.setdefault(f, []).append(int(lag))
        report["per_field"] = {f: float(np.mean(v)) for f, v in sorted(per.items())}
    return report
