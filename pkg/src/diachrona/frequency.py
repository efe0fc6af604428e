"""Lemma counting: totals, cross-slice count tables, ratios, ranks, form
shares, and dated time series.

All queries are pure reads over the columnar arrays; counts are exact
integers, never estimates.  Time series bin dated documents by interval
midpoint; undated documents never contribute.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .corpus import CorpusError, CorpusIndex

__all__ = [
    "Ratio",
    "CountTable",
    "TimeBin",
    "TimeSeries",
    "lemma_count",
    "count_table",
    "ratio",
    "lemma_rank",
    "form_share",
    "time_series",
    "moving_average",
]

def _docset_counts(index: CorpusIndex, docset) -> np.ndarray:
    """Per-lemma frequency vector over the docset."""
    mask = index.token_mask(docset)
    ids = index.lemma_ids if mask is None else index.lemma_ids[mask]
    return np.bincount(ids, minlength=len(index.lemmas))


def lemma_count(index: CorpusIndex, docset, lemma: str) -> int:
    """Exact number of tokens with ``lemma`` inside the docset (0 if unknown)."""
    lid = index.lemmas.id_of(lemma)
    if lid is None:
        return 0
    mask = index.token_mask(docset)
    hits = index.lemma_ids == lid
    if mask is not None:
        hits &= mask
    return int(np.count_nonzero(hits))


@dataclass(frozen=True)
class CountTable:
    """Lemma x docset count matrix with exact marginal sums."""

    lemmas: tuple[str, ...]
    labels: tuple[str, ...]
    counts: np.ndarray  # shape (len(lemmas), len(labels)), int64

    @classmethod
    def from_counts(cls, lemmas: Sequence[str], labels: Sequence[str], counts) -> "CountTable":
        mat = np.asarray(counts, dtype=np.int64)
        if mat.shape != (len(lemmas), len(labels)):
            raise CorpusError(
                f"count matrix shape {mat.shape} does not match "
                f"{len(lemmas)} lemmas x {len(labels)} labels"
            )
        return cls(tuple(lemmas), tuple(labels), mat)

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def grand_total(self) -> int:
        return int(self.counts.sum())


def count_table(
    index: CorpusIndex,
    lemmas: Sequence[str],
    docsets: Sequence,
    labels: Sequence[str] | None = None,
) -> CountTable:
    """Cell (i, j) = count of lemmas[i] within docsets[j]."""
    if labels is None:
        labels = [f"docset{j}" for j in range(len(docsets))]
    mat = np.zeros((len(lemmas), len(docsets)), dtype=np.int64)
    for j, docset in enumerate(docsets):
        freqs = _docset_counts(index, docset)
        for i, lemma in enumerate(lemmas):
            lid = index.lemmas.id_of(lemma)
            if lid is not None:
                mat[i, j] = freqs[lid]
    return CountTable.from_counts(lemmas, labels, mat)


class Ratio(NamedTuple):
    """Quotient of two counts, with both operands kept for reporting."""

    a: int
    b: int
    value: float

    def __float__(self) -> float:
        return self.value


def ratio(count_a: int, count_b: int) -> Ratio:
    """count_a / count_b as a float; division by zero is an error, never inf."""
    if count_b == 0:
        raise CorpusError("ratio undefined: denominator count is zero")
    return Ratio(count_a, count_b, count_a / count_b)


def lemma_rank(index: CorpusIndex, docset, lemma: str) -> int | None:
    """1-based frequency rank of ``lemma`` in the docset.

    Lemmas are ordered by descending count, ties broken by ascending lemma
    string.  Returns None when the lemma does not occur in the docset.
    """
    lid = index.lemmas.id_of(lemma)
    if lid is None:
        return None
    freqs = _docset_counts(index, docset)
    target = freqs[lid]
    if target == 0:
        return None
    higher = int(np.count_nonzero(freqs > target))
    tied = np.nonzero(freqs == target)[0]
    before = sum(1 for other in tied if index.lemmas[int(other)] < lemma)
    return higher + before + 1


def form_share(index: CorpusIndex, docset, lemma: str, forms: Iterable[str]) -> float:
    """Share of the lemma's tokens whose surface form (case-folded) is in ``forms``."""
    lid = index.lemmas.id_of(lemma)
    total = lemma_count(index, docset, lemma)
    if total == 0:
        raise CorpusError(f"form share undefined: lemma {lemma!r} has zero count in docset")
    folded = {f.casefold() for f in forms}
    wanted_ids = np.fromiter(
        (i for i, entry in enumerate(index.forms) if entry.casefold() in folded),
        dtype=np.int64,
    )
    mask = index.token_mask(docset)
    hits = index.lemma_ids == lid
    if mask is not None:
        hits &= mask
    if len(wanted_ids) == 0:
        return 0.0
    in_set = np.isin(index.form_ids[hits], wanted_ids.astype(np.uint32))
    return int(np.count_nonzero(in_set)) / total


class TimeBin(NamedTuple):
    start_year: int
    count: int
    token_mass: int
    per_million: float | None


@dataclass(frozen=True)
class TimeSeries:
    """Contiguous ordered year bins with counts, token mass, per-million rate."""

    lemma: str
    bin_width: int
    bins: tuple[TimeBin, ...]

    def total_count(self) -> int:
        return sum(b.count for b in self.bins)


def _dated_doc_arrays(index: CorpusIndex, docset) -> tuple[np.ndarray, np.ndarray]:
    """(positions, midpoints) of dated documents inside the docset."""
    positions = index.doc_positions(docset)
    mids = []
    dated = []
    for pos in positions:
        mid = index.documents[int(pos)].date.midpoint()
        if mid is not None:
            dated.append(int(pos))
            mids.append(mid)
    return np.asarray(dated, dtype=np.int64), np.asarray(mids, dtype=np.int64)


def time_series(
    index: CorpusIndex,
    lemma: str,
    bin_width: int,
    date_policy: str = "midpoint",
    docset=None,
) -> TimeSeries:
    """Per-bin counts of ``lemma`` over dated documents.

    Bin edges align to multiples of ``bin_width``; a document lands in the
    bin containing its date midpoint.  Each bin reports the lemma count,
    the token mass of contributing documents, and the per-million rate
    (None for bins with zero mass).
    """
    if bin_width < 1:
        raise CorpusError("bin width must be >= 1")
    if date_policy != "midpoint":
        raise CorpusError(f"unsupported date policy: {date_policy!r}")
    positions, mids = _dated_doc_arrays(index, docset)
    if len(positions) == 0:
        return TimeSeries(lemma, bin_width, ())
    starts = (mids // bin_width) * bin_width
    lo = int(starts.min())
    hi = int(starts.max())
    n_bins = (hi - lo) // bin_width + 1
    bin_of_doc = (starts - lo) // bin_width

    lens = np.fromiter((index.documents[int(p)].token_len for p in positions), dtype=np.int64)
    masses = np.bincount(bin_of_doc, weights=lens, minlength=n_bins).astype(np.int64)

    counts = np.zeros(n_bins, dtype=np.int64)
    lid = index.lemmas.id_of(lemma)
    if lid is not None:
        doc_of = index.doc_of()
        hit_docs = doc_of[index.lemma_ids == lid]
        per_doc = np.bincount(hit_docs, minlength=len(index.documents))
        doc_counts = per_doc[positions]
        counts = np.bincount(bin_of_doc, weights=doc_counts, minlength=n_bins).astype(np.int64)

    bins = []
    for b in range(n_bins):
        mass = int(masses[b])
        count = int(counts[b])
        per_million = 1e6 * count / mass if mass > 0 else None
        bins.append(TimeBin(lo + b * bin_width, count, mass, per_million))
    return TimeSeries(lemma, bin_width, tuple(bins))


def moving_average(values: Sequence[float | None], window: int) -> list[float | None]:
    """Centered moving average skipping undefined entries; window must be odd."""
    if window < 1 or window % 2 == 0:
        raise CorpusError("moving average window must be a positive odd number")
    half = window // 2
    out: list[float | None] = []
    for i in range(len(values)):
        seen = [v for v in values[max(0, i - half) : i + half + 1] if v is not None]
        out.append(sum(seen) / len(seen) if seen else None)
    return out
