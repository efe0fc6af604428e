"""Equal-token chronological tranching and strongest-evolving collocates.

Dated documents are sorted by date midpoint and cut into k contiguous
tranches of near-equal token mass (never splitting a document).  Counting
collocates per tranche, and scoring each candidate by the least-squares
slope of its per-tranche Dice values relative to their mean, surfaces the
associations that rise or fall most strongly across the timeline.

The trend statistic is a documented reconstruction: slope / mean is
scale-equivariant (rescaling all Dice values leaves scores unchanged) and
sign-interpretable, and the raw per-tranche Dice vectors are always
exposed so callers can apply a different statistic.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .cooc import _pivot_pair_vector, _pos_majority_pass, cooc_counts
from .corpus import CorpusError, CorpusIndex
from .frequency import _docset_counts

__all__ = [
    "TrancheSet",
    "TrendEntry",
    "TrendReport",
    "make_tranches",
    "cooc_by_tranche",
    "evolving_cooccurrents",
    "ols_slope",
]

SCORE_EPSILON = 1e-12


@dataclass(frozen=True)
class TrancheSet:
    """An ordered partition of the dated documents into k token-mass slices.

    ``doc_order`` lists document positions sorted by (date midpoint,
    doc_id); ``boundaries`` are k+1 cut indices into that order, so tranche
    t covers doc_order[boundaries[t]:boundaries[t+1]].
    """

    k: int
    boundaries: tuple[int, ...]
    token_masses: tuple[int, ...]
    doc_order: tuple[int, ...]

    def tranche_positions(self, t: int) -> np.ndarray:
        lo, hi = self.boundaries[t], self.boundaries[t + 1]
        return np.asarray(self.doc_order[lo:hi], dtype=np.int64)


def make_tranches(index: CorpusIndex, k: int) -> TrancheSet:
    """Cut the date-sorted dated documents into k near-equal token masses.

    Boundary i falls after the document whose cumulative mass first
    reaches i*T/k, pulled one document earlier when that is strictly
    closer to the target.  Comparisons use exact integer arithmetic, so
    the cut is fully deterministic.
    """
    if k < 2:
        raise CorpusError("tranche count must be >= 2")
    order = index.dated_order()
    n = len(order)
    if n < k:
        raise CorpusError(f"need at least {k} dated documents, found {n}")
    lens = [index.documents[pos].token_len for pos in order]
    cum = np.cumsum(lens)  # cum[j] = mass of docs 0..j
    total = int(cum[-1]) if n else 0

    boundaries = [0]
    for i in range(1, k):
        target = i * total  # compare k*cum against i*total: exact integers
        j = int(np.searchsorted(k * cum, target, side="left"))
        j = min(j, n - 1)
        boundary = j + 1
        if j >= 1 and abs(k * int(cum[j - 1]) - target) < abs(k * int(cum[j]) - target):
            boundary = j
        # keep boundaries strictly increasing and leave one doc per tranche
        boundary = max(boundary, boundaries[-1] + 1)
        boundary = min(boundary, n - (k - i))
        boundaries.append(boundary)
    boundaries.append(n)

    masses = tuple(
        int(cum[b - 1]) - (int(cum[a - 1]) if a > 0 else 0) if b > a else 0
        for a, b in zip(boundaries, boundaries[1:])
    )
    return TrancheSet(k, tuple(boundaries), masses, order)


def _tranche_matrices(
    index: CorpusIndex, tranches: TrancheSet, pivot_id: int, window: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-tranche pair counts, lemma frequencies, pivot frequencies."""
    v = len(index.lemmas)
    pairs = np.zeros((tranches.k, v), dtype=np.int64)
    freqs = np.zeros((tranches.k, v), dtype=np.int64)
    for t in range(tranches.k):
        positions = tranches.tranche_positions(t)
        dmask = index.doc_mask(positions)
        pairs[t] = _pivot_pair_vector(index, dmask, pivot_id, window)
        freqs[t] = _docset_counts(index, positions)
    pivot_freqs = freqs[:, pivot_id].copy()
    return pairs, freqs, pivot_freqs


def _dice_matrix(pairs: np.ndarray, freqs: np.ndarray, pivot_freqs: np.ndarray) -> np.ndarray:
    denom = freqs + pivot_freqs[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(denom > 0, 2.0 * pairs / np.maximum(denom, 1), 0.0)
    return d


def cooc_by_tranche(
    index: CorpusIndex,
    tranches: TrancheSet,
    pivot: str,
    window: int,
    pos_filter: Iterable[str] | None = None,
    min_count: int = 1,
):
    """Per-tranche cooccurrence tables plus per-lemma Dice vectors.

    Returns (tables, vectors): one :class:`CoocTable` per tranche, computed
    on exactly that tranche's documents with tranche-local frequencies, and
    a dict lemma -> length-k Dice array for every candidate whose total
    pair count reaches ``min_count`` and whose POS majority (over all dated
    documents) passes the filter.  Tranches where a lemma is absent
    contribute 0.0.
    """
    pivot_id = index.lemmas.id_of(pivot)
    tables = [
        cooc_counts(index, tranches.tranche_positions(t), pivot, window)
        for t in range(tranches.k)
    ]
    if pivot_id is None:
        return tables, {}
    pairs, freqs, pivot_freqs = _tranche_matrices(index, tranches, pivot_id, window)
    dice_mat = _dice_matrix(pairs, freqs, pivot_freqs)
    totals = pairs.sum(axis=0)
    candidate = totals >= max(min_count, 1)
    all_dated = np.asarray(tranches.doc_order, dtype=np.int64)
    pos_ok = _pos_majority_pass(index, all_dated, pos_filter)
    if pos_ok is not None:
        candidate &= pos_ok
    candidate[pivot_id] = False
    vectors = {
        index.lemmas[int(i)]: dice_mat[:, i].copy() for i in np.nonzero(candidate)[0]
    }
    return tables, vectors


def ols_slope(values) -> float:
    """Ordinary-least-squares slope of values against positions 1..k."""
    y = np.asarray(values, dtype=np.float64)
    k = len(y)
    if k < 2:
        raise CorpusError("slope needs at least two values")
    x = np.arange(1, k + 1, dtype=np.float64)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


@dataclass(frozen=True)
class TrendEntry:
    lemma: str
    dice_by_tranche: tuple[float, ...]
    total_pairs: int
    score: float
    direction: str  # "rising" | "falling" | "flat"


@dataclass(frozen=True)
class TrendReport:
    pivot: str
    window: int
    k: int
    entries: tuple[TrendEntry, ...]


def evolving_cooccurrents(
    index: CorpusIndex,
    tranches: TrancheSet,
    pivot: str,
    window: int,
    pos_filter: Iterable[str] | None = None,
    min_count: int = 1,
    top_n: int = 20,
) -> TrendReport:
    """Collocates whose association with the pivot changes most across time.

    Score = OLS slope of the per-tranche Dice vector divided by
    max(mean Dice, epsilon); entries are ranked by |score| with ties broken
    by total pair count then lemma.  Direction follows the slope sign.
    """
    if min_count < 1:
        raise CorpusError("min_count must be >= 1")
    if top_n < 1:
        raise CorpusError("top_n must be >= 1")
    pivot_id = index.lemmas.id_of(pivot)
    if pivot_id is None:
        return TrendReport(pivot, window, tranches.k, ())
    pairs, freqs, pivot_freqs = _tranche_matrices(index, tranches, pivot_id, window)
    dice_mat = _dice_matrix(pairs, freqs, pivot_freqs)
    totals = pairs.sum(axis=0)
    candidate = totals >= min_count
    all_dated = np.asarray(tranches.doc_order, dtype=np.int64)
    pos_ok = _pos_majority_pass(index, all_dated, pos_filter)
    if pos_ok is not None:
        candidate &= pos_ok
    candidate[pivot_id] = False

    entries = []
    for i in np.nonzero(candidate)[0]:
        d = dice_mat[:, i]
        slope = ols_slope(d)
        score = slope / max(float(d.mean()), SCORE_EPSILON)
        if slope > 0:
            direction = "rising"
        elif slope < 0:
            direction = "falling"
        else:
            direction = "flat"
        entries.append(
            TrendEntry(
                index.lemmas[int(i)],
                tuple(float(x) for x in d),
                int(totals[i]),
                score,
                direction,
            )
        )
    entries.sort(key=lambda e: (-abs(e.score), -e.total_pairs, e.lemma))
    return TrendReport(pivot, window, tranches.k, tuple(entries[:top_n]))
