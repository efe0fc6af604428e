"""Immutable corpus model: interned vocabularies, columnar token arrays,
and a document table with dating metadata.

A :class:`CorpusIndex` stores three parallel integer arrays (lemma ids,
form ids, POS ids) covering every retained token of the corpus, plus an
ordered document table mapping each document onto a contiguous slice of
those arrays.  Everything is frozen after construction, so an index can be
shared freely between threads; all query modules are pure readers.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "CorpusError",
    "Vocabulary",
    "DateKind",
    "DateSpec",
    "Document",
    "CorpusIndex",
    "subcorpus",
    "dated_within",
    "has_typology",
    "is_dated",
]

# POS ids are stored as u16 on disk; the vocabulary must fit.
MAX_POS_ENTRIES = 1 << 16


class CorpusError(Exception):
    """Domain error raised by corpus construction and corpus queries."""


class Vocabulary:
    """Dense string interner: ids are consecutive integers starting at 0.

    ``intern`` is the builder-side entry point and returns the existing id
    for a known string.  Constructing from an explicit entry sequence (the
    deserialization path) rejects duplicates instead of merging them.
    """

    __slots__ = ("entries", "_lookup")

    def __init__(self, entries: Iterable[str] = ()) -> None:
        self.entries: list[str] = []
        self._lookup: dict[str, int] = {}
        for entry in entries:
            if entry in self._lookup:
                raise CorpusError(f"duplicate vocabulary entry: {entry!r}")
            self._lookup[entry] = len(self.entries)
            self.entries.append(entry)

    def intern(self, entry: str) -> int:
        ident = self._lookup.get(entry)
        if ident is None:
            ident = len(self.entries)
            self._lookup[entry] = ident
            self.entries.append(entry)
        return ident

    def id_of(self, entry: str) -> int | None:
        """Return the id of ``entry``, or None when it was never interned."""
        return self._lookup.get(entry)

    def __getitem__(self, ident: int) -> str:
        return self.entries[ident]

    def __contains__(self, entry: str) -> bool:
        return entry in self._lookup

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"Vocabulary({len(self.entries)} entries)"


class DateKind(IntEnum):
    """Wire values for document dating; stable in the index file format."""

    UNDATED = 0
    EXACT = 1
    RANGE = 2


@dataclass(frozen=True)
class DateSpec:
    """A document's dating: an exact year, a closed year interval, or unknown."""

    kind: DateKind
    lo: int | None = None
    hi: int | None = None

    def __post_init__(self) -> None:
        if self.kind is DateKind.UNDATED:
            if self.lo is not None or self.hi is not None:
                raise CorpusError("undated DateSpec must not carry years")
        else:
            if self.lo is None or self.hi is None:
                raise CorpusError("dated DateSpec requires lo and hi")
            if self.lo > self.hi:
                raise CorpusError(f"date interval reversed: {self.lo} > {self.hi}")
            if self.kind is DateKind.EXACT and self.lo != self.hi:
                raise CorpusError("exact DateSpec requires lo == hi")

    @classmethod
    def undated(cls) -> "DateSpec":
        return cls(DateKind.UNDATED)

    @classmethod
    def exact(cls, year: int) -> "DateSpec":
        return cls(DateKind.EXACT, year, year)

    @classmethod
    def year_range(cls, lo: int, hi: int) -> "DateSpec":
        if lo == hi:
            return cls(DateKind.EXACT, lo, hi)
        return cls(DateKind.RANGE, lo, hi)

    @property
    def is_dated(self) -> bool:
        return self.kind is not DateKind.UNDATED

    def midpoint(self) -> int | None:
        """Floor midpoint of the interval; None for undated documents."""
        if self.kind is DateKind.UNDATED:
            return None
        return (self.lo + self.hi) // 2


@dataclass(frozen=True)
class Document:
    """One document: id, dating, optional typology tag, and its token slice."""

    doc_id: str
    date: DateSpec
    typology: str | None
    token_start: int
    token_len: int


class CorpusIndex:
    """Read-only corpus: vocabularies + columnar token ids + document table.

    Construction validates every invariant once (array lengths, id ranges,
    contiguous disjoint document slices, unique document ids) and freezes
    the arrays; afterwards the index is safe for unlimited concurrent
    readers.
    """

    def __init__(
        self,
        lemmas: Vocabulary,
        forms: Vocabulary,
        pos_tags: Vocabulary,
        lemma_ids: np.ndarray,
        form_ids: np.ndarray,
        pos_ids: np.ndarray,
        documents: list[Document],
    ) -> None:
        lemma_ids = np.ascontiguousarray(lemma_ids)
        form_ids = np.ascontiguousarray(form_ids)
        pos_ids = np.ascontiguousarray(pos_ids)
        n = len(lemma_ids)
        if len(form_ids) != n or len(pos_ids) != n:
            raise CorpusError("token id arrays differ in length")
        _check_ids(lemma_ids, len(lemmas), "lemma")
        _check_ids(form_ids, len(forms), "form")
        _check_ids(pos_ids, len(pos_tags), "POS")
        if len(pos_tags) > MAX_POS_ENTRIES:
            raise CorpusError("POS vocabulary exceeds u16 capacity")

        offset = 0
        seen: set[str] = set()
        for doc in documents:
            if doc.token_len < 0:
                raise CorpusError(f"negative token_len in document {doc.doc_id!r}")
            if doc.token_start != offset:
                raise CorpusError(
                    f"document {doc.doc_id!r} starts at {doc.token_start}, expected {offset}"
                )
            if doc.doc_id in seen:
                raise CorpusError(f"duplicate document id: {doc.doc_id!r}")
            seen.add(doc.doc_id)
            offset += doc.token_len
        if offset != n:
            raise CorpusError(f"documents cover {offset} tokens, arrays hold {n}")

        self.lemmas = lemmas
        self.forms = forms
        self.pos_tags = pos_tags
        self.lemma_ids = lemma_ids.astype(np.uint32, copy=False)
        self.form_ids = form_ids.astype(np.uint32, copy=False)
        self.pos_ids = pos_ids.astype(np.uint16, copy=False)
        self.documents = tuple(documents)
        for arr in (self.lemma_ids, self.form_ids, self.pos_ids):
            arr.flags.writeable = False
        self._position_of = {doc.doc_id: i for i, doc in enumerate(self.documents)}
        self._doc_of: np.ndarray | None = None
        self._dated_order: tuple[int, ...] | None = None

    @property
    def total_tokens(self) -> int:
        return len(self.lemma_ids)

    def __len__(self) -> int:
        return len(self.documents)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorpusIndex):
            return NotImplemented
        return (
            self.lemmas == other.lemmas
            and self.forms == other.forms
            and self.pos_tags == other.pos_tags
            and np.array_equal(self.lemma_ids, other.lemma_ids)
            and np.array_equal(self.form_ids, other.form_ids)
            and np.array_equal(self.pos_ids, other.pos_ids)
            and self.documents == other.documents
        )

    def position_of(self, doc_id: str) -> int:
        try:
            return self._position_of[doc_id]
        except KeyError:
            raise CorpusError(f"unknown document id: {doc_id!r}") from None

    def doc_of(self) -> np.ndarray:
        """Token-aligned array: document position of every token (cached)."""
        if self._doc_of is None:
            lens = np.fromiter(
                (d.token_len for d in self.documents), dtype=np.int64, count=len(self.documents)
            )
            arr = np.repeat(np.arange(len(self.documents), dtype=np.int32), lens)
            arr.flags.writeable = False
            self._doc_of = arr
        return self._doc_of

    def dated_order(self) -> tuple[int, ...]:
        """Positions of dated documents sorted by (midpoint, doc_id), stable."""
        if self._dated_order is None:
            dated = [
                (doc.date.midpoint(), doc.doc_id, pos)
                for pos, doc in enumerate(self.documents)
                if doc.date.is_dated
            ]
            dated.sort(key=lambda t: (t[0], t[1]))
            self._dated_order = tuple(t[2] for t in dated)
        return self._dated_order

    def doc_positions(self, docset: Iterable[str] | np.ndarray | None) -> np.ndarray:
        """Resolve a docset to sorted document positions.

        ``docset`` may be None (all documents), an iterable of document id
        strings, or an integer array of document positions.
        """
        if docset is None:
            return np.arange(len(self.documents), dtype=np.int64)
        if isinstance(docset, np.ndarray) and docset.dtype.kind in "iu":
            positions = np.unique(docset.astype(np.int64))
            if len(positions) and (positions[0] < 0 or positions[-1] >= len(self.documents)):
                raise CorpusError("document position out of range")
            return positions
        positions = sorted({self.position_of(d) for d in docset})
        return np.asarray(positions, dtype=np.int64)

    def doc_mask(self, docset: Iterable[str] | np.ndarray | None) -> np.ndarray | None:
        """Boolean membership table over document positions; None = all."""
        if docset is None:
            return None
        mask = np.zeros(len(self.documents), dtype=bool)
        mask[self.doc_positions(docset)] = True
        return mask

    def token_mask(self, docset: Iterable[str] | np.ndarray | None) -> np.ndarray | None:
        """Boolean mask over tokens belonging to the docset; None = all."""
        dmask = self.doc_mask(docset)
        if dmask is None:
            return None
        return dmask[self.doc_of()]


def _check_ids(ids: np.ndarray, size: int, what: str) -> None:
    if ids.dtype.kind not in "iu":
        raise CorpusError(f"{what} ids must be integers")
    if len(ids) == 0:
        return
    lo = int(ids.min())
    hi = int(ids.max())
    if lo < 0 or hi >= size:
        raise CorpusError(f"{what} id out of vocabulary range: {hi if hi >= size else lo}")


def subcorpus(index: CorpusIndex, predicate: Callable[[Document], bool]) -> set[str]:
    """Document ids of exactly the documents satisfying ``predicate``."""
    return {doc.doc_id for doc in index.documents if predicate(doc)}


def dated_within(lo: int, hi: int) -> Callable[[Document], bool]:
    """Predicate: document midpoint lies in [lo, hi] (undated never matches)."""

    def check(doc: Document) -> bool:
        mid = doc.date.midpoint()
        return mid is not None and lo <= mid <= hi

    return check


def has_typology(tag: str) -> Callable[[Document], bool]:
    def check(doc: Document) -> bool:
        return doc.typology == tag

    return check


def is_dated(doc: Document) -> bool:
    return doc.date.is_dated
