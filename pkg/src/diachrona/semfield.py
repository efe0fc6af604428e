"""Semantic-field maps: pivot-centered cooccurrence submatrices projected
onto their first two factor axes by correspondence analysis.

The submatrix takes the pivot plus its strongest collocates and counts
windowed pairs among them; correspondence analysis then decomposes the
table in the chi-square metric, yielding per-term planar coordinates whose
axes carry decreasing shares of the table's total inertia (chi-square /
grand total).  Raw counts feed the decomposition by default because CA's
geometry expects a contingency-like table; a Dice-weighted variant is
available for exploration.

``CorrespondenceAnalysis`` wraps the decomposition in a fit/transform
estimator so the projection composes with the wider numerical ecosystem;
``correspondence_analysis`` is the plain functional entry point.
"""

from __future__ import annotations

import warnings
from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cooc import top_cooccurrents
from .corpus import CorpusError, CorpusIndex
from .frequency import _docset_counts
from .jacobi import jacobi_svd

__all__ = [
    "DSMSubmatrix",
    "CAResult",
    "SemanticMap",
    "MapPoint",
    "CorrespondenceAnalysis",
    "build_submatrix",
    "correspondence_analysis",
    "semantic_map",
]

_RANK_EPS = 1.0e-12


@dataclass(frozen=True)
class DSMSubmatrix:
    """Symmetric windowed pair counts among a pivot's top collocates.

    Diagonal is forced to zero; rows/columns that ended up all-zero have
    been pruned (their lemmas are listed in ``pruned``).
    """

    terms: tuple[str, ...]
    counts: np.ndarray  # square int64, symmetric, zero diagonal
    pruned: tuple[str, ...]


def build_submatrix(
    index: CorpusIndex,
    docset,
    pivot: str,
    window: int,
    m: int,
    pos_filter: Iterable[str] | None = None,
    min_count: int = 1,
    include_pivot: bool = True,
    weight: str = "raw",
) -> DSMSubmatrix:
    """Pair-count matrix over the pivot and its top Dice-ranked collocates.

    ``m`` is the total number of terms on the map; with ``include_pivot``
    the pivot occupies slot 0 and the top m-1 collocates follow.  Cells use
    the cooccurrence module's unordered-pair counting rule.  ``weight``
    may be "raw" (counts, the default) or "dice" (each cell rescaled by
    the marginal frequencies of its two terms).
    """
    if m < 3:
        raise CorpusError("submatrix needs at least 3 terms")
    if weight not in ("raw", "dice"):
        raise CorpusError(f"unknown weight mode: {weight!r}")
    needed = m - 1 if include_pivot else m
    ranked = top_cooccurrents(
        index, docset, pivot, window, k=needed, pos_filter=pos_filter, min_count=min_count
    )
    if len(ranked) < needed:
        raise CorpusError(
            f"pivot {pivot!r} has only {len(ranked)} qualifying cooccurrents, "
            f"need {needed} for a {m}-term map"
        )
    terms = ([pivot] if include_pivot else []) + [c.lemma for c in ranked]
    term_ids = np.asarray([index.lemmas.id_of(t) for t in terms], dtype=np.int64)

    counts = _pairs_among(index, docset, term_ids, window)
    np.fill_diagonal(counts, 0)

    if weight == "dice":
        freqs = _docset_counts(index, docset)[term_ids].astype(np.float64)
        denom = freqs[:, None] + freqs[None, :]
        weighted = np.where(denom > 0, 2.0 * counts / np.maximum(denom, 1.0), 0.0)
        matrix = weighted
    else:
        matrix = counts

    keep = ~np.all(matrix == 0, axis=1)
    pruned = tuple(t for t, ok in zip(terms, keep) if not ok)
    if pruned:
        warnings.warn(
            f"pruned {len(pruned)} all-zero term(s) from submatrix: {', '.join(pruned)}",
            stacklevel=2,
        )
        matrix = matrix[np.ix_(keep, keep)]
        terms = [t for t, ok in zip(terms, keep) if ok]
    return DSMSubmatrix(tuple(terms), matrix, pruned)


def _pairs_among(index: CorpusIndex, docset, term_ids: np.ndarray, window: int) -> np.ndarray:
    """Windowed unordered pair counts among a restricted lemma set."""
    t = len(term_ids)
    slot = np.full(len(index.lemmas), -1, dtype=np.int64)
    slot[term_ids] = np.arange(t)
    counts = np.zeros((t, t), dtype=np.int64)
    lem = index.lemma_ids
    n = len(lem)
    if n == 0:
        return counts
    doc_of = index.doc_of()
    dmask = index.doc_mask(docset)
    for d in range(1, window + 1):
        if d >= n:
            break
        si = slot[lem[:-d]]
        sj = slot[lem[d:]]
        ok = (si >= 0) & (sj >= 0) & (doc_of[:-d] == doc_of[d:])
        if dmask is not None:
            ok &= dmask[doc_of[:-d]]
        np.add.at(counts, (si[ok], sj[ok]), 1)
    full = counts + counts.T  # each unordered pair was seen once, in position order
    return full


class CAResult(NamedTuple):
    """First two factor axes of a correspondence analysis."""

    row_coords: np.ndarray  # (m, 2)
    col_coords: np.ndarray  # (n, 2)
    inertia_fractions: np.ndarray  # (2,)
    total_inertia: float
    singular_values: np.ndarray  # all min(m, n) values, descending


class CorrespondenceAnalysis:
    """Chi-square-metric factor decomposition of a non-negative table.

    Estimator-style interface: ``fit`` decomposes a table and exposes the
    learned quantities as trailing-underscore attributes; ``transform``
    projects supplementary row profiles onto the fitted axes via the CA
    transition formula; ``fit_transform`` returns the fitted row
    coordinates directly.

    Parameters
    ----------
    n_axes:
        Number of leading factor axes to keep (default 2).
    """

    def __init__(self, n_axes: int = 2) -> None:
        self.n_axes = n_axes

    def get_params(self, deep: bool = True) -> dict:
        return {"n_axes": self.n_axes}

    def set_params(self, **params) -> "CorrespondenceAnalysis":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, X, y=None) -> "CorrespondenceAnalysis":
        table = _validate_table(X, self.n_axes)
        grand = table.sum()
        p = table / grand
        r = p.sum(axis=1)
        c = p.sum(axis=0)
        s = (p - np.outer(r, c)) / np.sqrt(np.outer(r, c))
        u, sigma, vt = jacobi_svd(s)
        if len(sigma) and sigma[0] > 0:
            # axes below working precision are rank artifacts: report as zero
            sigma = np.where(sigma <= sigma[0] * _RANK_EPS, 0.0, sigma)

        axes = self.n_axes
        rank = min(axes, len(sigma))
        sig = np.zeros(axes)
        sig[:rank] = sigma[:rank]
        u_pad = np.zeros((table.shape[0], axes))
        u_pad[:, :rank] = u[:, :rank]
        v_pad = np.zeros((table.shape[1], axes))
        v_pad[:, :rank] = vt.T[:, :rank]
        row = (u_pad * sig) / np.sqrt(r)[:, None]
        col = (v_pad * sig) / np.sqrt(c)[:, None]

        total = float(np.sum(sigma**2))
        if total > _RANK_EPS:
            fractions = (sig**2) / total
        else:
            fractions = np.zeros(axes)

        self.row_coordinates_ = row
        self.column_coordinates_ = col
        self.inertia_fractions_ = fractions
        self.total_inertia_ = total
        self.singular_values_ = sigma
        self.row_masses_ = r
        self.column_masses_ = c
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).row_coordinates_

    def transform(self, X) -> np.ndarray:
        """Project supplementary rows (same column space) onto fitted axes."""
        if not hasattr(self, "singular_values_"):
            raise CorpusError("CorrespondenceAnalysis is not fitted")
        table = np.asarray(X, dtype=np.float64)
        if table.ndim == 1:
            table = table[None, :]
        if table.shape[1] != len(self.column_masses_):
            raise CorpusError("supplementary rows must match the fitted column count")
        sums = table.sum(axis=1, keepdims=True)
        if np.any(sums <= 0):
            raise CorpusError("supplementary rows must have positive totals")
        profiles = table / sums
        axes = self.row_coordinates_.shape[1]
        sig = np.zeros(axes)
        have = min(axes, len(self.singular_values_))
        sig[:have] = self.singular_values_[:have]
        safe = np.where(sig > _RANK_EPS, sig, 1.0)
        std_cols = np.where(sig > _RANK_EPS, self.column_coordinates_ / safe, 0.0)
        return profiles @ std_cols


def _validate_table(X, n_axes: int) -> np.ndarray:
    table = np.asarray(X, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
        raise CorpusError("correspondence analysis needs a 2-D table")
    if n_axes < 1:
        raise CorpusError("n_axes must be >= 1")
    if np.any(table < 0):
        raise CorpusError("correspondence analysis needs non-negative values")
    if table.sum() <= 0:
        raise CorpusError("correspondence analysis needs a positive grand total")
    row_zero = np.nonzero(table.sum(axis=1) == 0)[0]
    col_zero = np.nonzero(table.sum(axis=0) == 0)[0]
    if len(row_zero) or len(col_zero):
        raise CorpusError(
            "table has all-zero rows/columns "
            f"(rows {row_zero.tolist()}, columns {col_zero.tolist()}); prune them first"
        )
    return table


def correspondence_analysis(matrix) -> CAResult:
    """Row/column coordinates on the first two factor axes, plus inertias.

    Total inertia equals chi-square / grand-total; per-axis inertia is the
    squared singular value.  A rank-1 (independence-like) table yields zero
    inertia and all-zero coordinates; a rank-deficient second axis comes
    back as zeros with zero inertia.
    """
    ca = CorrespondenceAnalysis(n_axes=2).fit(matrix)
    return CAResult(
        ca.row_coordinates_,
        ca.column_coordinates_,
        ca.inertia_fractions_,
        ca.total_inertia_,
        ca.singular_values_,
    )


class MapPoint(NamedTuple):
    lemma: str
    x: float
    y: float


@dataclass(frozen=True)
class SemanticMap:
    """Planar factor coordinates of a pivot's semantic field."""

    pivot: str
    points: tuple[MapPoint, ...]
    inertia_fractions: tuple[float, float]
    total_inertia: float


def semantic_map(
    index: CorpusIndex,
    docset,
    pivot: str,
    window: int,
    m: int,
    pos_filter: Iterable[str] | None = None,
    min_count: int = 1,
    include_pivot: bool = True,
    weight: str = "raw",
) -> SemanticMap:
    """Compose the submatrix and its correspondence analysis into a map.

    Axis orientation is made deterministic by flipping each axis, when
    needed, so the first term's coordinate is non-negative.
    """
    sub = build_submatrix(
        index,
        docset,
        pivot,
        window,
        m,
        pos_filter=pos_filter,
        min_count=min_count,
        include_pivot=include_pivot,
        weight=weight,
    )
    result = correspondence_analysis(sub.counts)
    coords = result.row_coords.copy()
    for axis in range(coords.shape[1]):
        if coords[0, axis] < 0:
            coords[:, axis] = -coords[:, axis]
    points = tuple(
        MapPoint(term, float(coords[i, 0]), float(coords[i, 1]))
        for i, term in enumerate(sub.terms)
    )
    fractions = (float(result.inertia_fractions[0]), float(result.inertia_fractions[1]))
    return SemanticMap(pivot, points, fractions, result.total_inertia)
