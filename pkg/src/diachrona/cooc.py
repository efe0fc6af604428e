"""Windowed cooccurrence counting and Dice-scored collocate ranking.

Counting rule: every unordered token pair (i < j) inside one document with
position distance <= w, where exactly one of the two tokens carries the
pivot lemma, adds 1 to that neighbor's pair count.  Pairs never cross
document boundaries, and pivot-pivot pairs are excluded, so a pivot never
appears among its own neighbors.

The counters are implemented as w shifted-slice passes over the columnar
arrays (O(w * N) with numpy doing the inner loops), which keeps
100M-token-scale corpora tractable.  Counting by document shards merges
associatively, so results are independent of shard boundaries.
"""

from __future__ import annotations

from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .corpus import CorpusError, CorpusIndex
from .frequency import _dated_doc_arrays, _docset_counts

__all__ = [
    "CoocTable",
    "Cooccurrent",
    "PairBin",
    "cooc_counts",
    "dice",
    "top_cooccurrents",
    "adjacency_count",
    "pair_evolution",
]


def dice(pair_count: int, freq_a: int, freq_b: int) -> float:
    """Sorensen-Dice association: 2 * pair_count / (freq_a + freq_b)."""
    if pair_count < 0 or freq_a < 0 or freq_b < 0:
        raise CorpusError("dice arguments must be non-negative")
    total = freq_a + freq_b
    if total == 0:
        raise CorpusError("dice undefined: both frequencies are zero")
    return 2.0 * pair_count / total


@dataclass(frozen=True)
class CoocTable:
    """Sparse pivot-neighbor pair counts plus the marginals Dice needs."""

    pivot: str
    window: int
    pair_counts: dict[str, int]
    pivot_freq: int
    neighbor_freqs: dict[str, int]

    def dice_of(self, lemma: str) -> float:
        count = self.pair_counts.get(lemma, 0)
        return dice(count, self.pivot_freq, self.neighbor_freqs.get(lemma, 0))


class Cooccurrent(NamedTuple):
    lemma: str
    pair_count: int
    freq: int
    dice: float


def _pivot_pair_vector(
    index: CorpusIndex, dmask: np.ndarray | None, pivot_id: int, window: int
) -> np.ndarray:
    """Per-lemma pair counts with the pivot, as a dense int64 vector."""
    counts = np.zeros(len(index.lemmas), dtype=np.int64)
    lem = index.lemma_ids
    n = len(lem)
    if n == 0:
        return counts
    doc_of = index.doc_of()
    for d in range(1, window + 1):
        if d >= n:
            break
        left = lem[:-d]
        right = lem[d:]
        ok = doc_of[:-d] == doc_of[d:]
        if dmask is not None:
            ok &= dmask[doc_of[:-d]]
        lp = left == pivot_id
        rp = right == pivot_id
        sel = ok & (lp ^ rp)
        if not sel.any():
            continue
        neighbors = np.where(lp[sel], right[sel], left[sel])
        counts += np.bincount(neighbors, minlength=len(index.lemmas))
    return counts


def _sharded_pair_vector(
    index: CorpusIndex, docset, pivot_id: int, window: int, shards: int
) -> np.ndarray:
    """Shard the docset into contiguous document groups and merge counts."""
    positions = index.doc_positions(docset)
    shards = max(1, min(shards, len(positions)))
    if shards == 1:
        return _pivot_pair_vector(index, index.doc_mask(docset), pivot_id, window)
    groups = np.array_split(positions, shards)

    def run(group: np.ndarray) -> np.ndarray:
        return _pivot_pair_vector(index, index.doc_mask(group), pivot_id, window)

    with ThreadPoolExecutor(max_workers=shards) as pool:
        parts = list(pool.map(run, groups))
    return np.sum(parts, axis=0)


def cooc_counts(
    index: CorpusIndex, docset, pivot: str, window: int, shards: int = 1
) -> CoocTable:
    """Window-w pair counts of every lemma with ``pivot`` over the docset."""
    if window < 1:
        raise CorpusError("window must be >= 1")
    pivot_id = index.lemmas.id_of(pivot)
    freqs = _docset_counts(index, docset)
    if pivot_id is None:
        return CoocTable(pivot, window, {}, 0, {})
    counts = _sharded_pair_vector(index, docset, pivot_id, window, shards)
    nonzero = np.nonzero(counts)[0]
    pair_counts = {index.lemmas[int(i)]: int(counts[i]) for i in nonzero}
    neighbor_freqs = {index.lemmas[int(i)]: int(freqs[i]) for i in nonzero}
    return CoocTable(pivot, window, pair_counts, int(freqs[pivot_id]), neighbor_freqs)


def _pos_majority_pass(
    index: CorpusIndex, docset, pos_filter: Iterable[str] | None
) -> np.ndarray | None:
    """Boolean per-lemma vector: at least half its docset tokens carry an
    allowed POS tag.  None when no filter applies."""
    if pos_filter is None:
        return None
    allowed_ids = {index.pos_tags.id_of(t) for t in pos_filter}
    allowed_ids.discard(None)
    mask = index.token_mask(docset)
    lem = index.lemma_ids if mask is None else index.lemma_ids[mask]
    pos = index.pos_ids if mask is None else index.pos_ids[mask]
    totals = np.bincount(lem, minlength=len(index.lemmas))
    if allowed_ids:
        pos_ok = np.isin(pos, np.fromiter(allowed_ids, dtype=np.uint16))
        good = np.bincount(lem[pos_ok], minlength=len(index.lemmas))
    else:
        good = np.zeros(len(index.lemmas), dtype=np.int64)
    return 2 * good >= np.maximum(totals, 1)


def top_cooccurrents(
    index: CorpusIndex,
    docset,
    pivot: str,
    window: int,
    k: int,
    pos_filter: Iterable[str] | None = None,
    min_count: int = 1,
    shards: int = 1,
) -> list[Cooccurrent]:
    """Top-k collocates of ``pivot`` ranked by Dice.

    Candidates must reach ``min_count`` pairs and, when a POS filter is
    given, have a majority of their docset tokens tagged with an allowed
    POS.  Ordering: Dice descending, then pair count descending, then
    lemma ascending.  An absent pivot yields an empty list.
    """
    if k < 1:
        raise CorpusError("k must be >= 1")
    if window < 1:
        raise CorpusError("window must be >= 1")
    pivot_id = index.lemmas.id_of(pivot)
    if pivot_id is None:
        return []
    freqs = _docset_counts(index, docset)
    if freqs[pivot_id] == 0:
        return []
    counts = _sharded_pair_vector(index, docset, pivot_id, window, shards)
    candidate = counts >= max(min_count, 1)
    pos_ok = _pos_majority_pass(index, docset, pos_filter)
    if pos_ok is not None:
        candidate &= pos_ok
    candidate[pivot_id] = False
    ids = np.nonzero(candidate)[0]
    pivot_freq = int(freqs[pivot_id])
    scored = [
        Cooccurrent(
            index.lemmas[int(i)],
            int(counts[i]),
            int(freqs[i]),
            dice(int(counts[i]), pivot_freq, int(freqs[i])),
        )
        for i in ids
    ]
    scored.sort(key=lambda c: (-c.dice, -c.pair_count, c.lemma))
    return scored[:k]


def _pair_count_vectorized(
    index: CorpusIndex, dmask: np.ndarray | None, a_id: int, b_id: int, window: int
) -> int:
    """Unordered pair count of two specific lemmas within the window."""
    lem = index.lemma_ids
    n = len(lem)
    total = 0
    doc_of = index.doc_of()
    for d in range(1, window + 1):
        if d >= n:
            break
        left = lem[:-d]
        right = lem[d:]
        ok = doc_of[:-d] == doc_of[d:]
        if dmask is not None:
            ok &= dmask[doc_of[:-d]]
        if a_id == b_id:
            sel = ok & (left == a_id) & (right == a_id)
        else:
            sel = ok & (
                ((left == a_id) & (right == b_id)) | ((left == b_id) & (right == a_id))
            )
        total += int(np.count_nonzero(sel))
    return total


def adjacency_count(index: CorpusIndex, docset, lemma_a: str, lemma_b: str) -> int:
    """Pairs of the two lemmas at distance exactly 1 (either order)."""
    a_id = index.lemmas.id_of(lemma_a)
    b_id = index.lemmas.id_of(lemma_b)
    if a_id is None or b_id is None:
        return 0
    return _pair_count_vectorized(index, index.doc_mask(docset), a_id, b_id, 1)


class PairBin(NamedTuple):
    start_year: int
    pair_count: int
    dice: float


def pair_evolution(
    index: CorpusIndex,
    lemma_a: str,
    lemma_b: str,
    window: int,
    bin_width: int,
    docset=None,
) -> list[PairBin]:
    """Per-period pair counts and Dice for two lemmas over dated documents.

    Bins align to multiples of ``bin_width`` (document midpoint binning);
    per-bin Dice uses per-bin frequencies and is 0 for bins where neither
    lemma occurs.
    """
    if window < 1:
        raise CorpusError("window must be >= 1")
    if bin_width < 1:
        raise CorpusError("bin width must be >= 1")
    positions, mids = _dated_doc_arrays(index, docset)
    if len(positions) == 0:
        return []
    a_id = index.lemmas.id_of(lemma_a)
    b_id = index.lemmas.id_of(lemma_b)
    starts = (mids // bin_width) * bin_width
    lo = int(starts.min())
    hi = int(starts.max())
    out = []
    for start in range(lo, hi + 1, bin_width):
        in_bin = positions[starts == start]
        if a_id is None or b_id is None:
            out.append(PairBin(start, 0, 0.0))
            continue
        dmask = index.doc_mask(in_bin)
        pair = _pair_count_vectorized(index, dmask, a_id, b_id, window)
        freqs = _docset_counts(index, in_bin)
        fa = int(freqs[a_id])
        fb = int(freqs[b_id])
        value = dice(pair, fa, fb) if fa + fb > 0 else 0.0
        out.append(PairBin(start, pair, value))
    return out
