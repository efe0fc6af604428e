"""Ingestion: vertical-file parsing and a plain-text fallback path.

The primary input is tagger-style vertical text, one token per line with
tab-separated form / POS / lemma columns.  ``#doc`` header lines open a new
document and carry space-separated key=value pairs (``id`` required,
``date`` and ``typology`` optional).  The fallback path tokenizes raw text
and lemmatizes through a lookup lexicon.

Ingestion fails loud: wrong column counts, missing ids, and malformed
dates raise :class:`VerticalParseError` with the offending line number.
Token lines whose POS tag is in the drop set (punctuation by default) are
not emitted as positions, so window distances downstream are measured on
the retained word stream.
"""

from __future__ import annotations

import re
from array import array
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .corpus import CorpusError, CorpusIndex, DateSpec, Document, Vocabulary

__all__ = [
    "UNKNOWN_LEMMA",
    "UNKNOWN_POS",
    "DEFAULT_DROP_POS",
    "VerticalParseError",
    "VerticalRecord",
    "Lexicon",
    "parse_vertical",
    "tokenize_plain",
    "lemmatize",
    "index_from_documents",
]

UNKNOWN_LEMMA = "<unknown>"
UNKNOWN_POS = "<unk>"
DEFAULT_DROP_POS = frozenset({"PUN", "SENT"})

_DATE_RE = re.compile(r"^(\d{1,6})(?:-(\d{1,6}))?$")
_WORD_RE = re.compile(r"[^\W\d_]+")


class VerticalParseError(CorpusError):
    """Raised for malformed vertical input; message carries the line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class VerticalRecord(NamedTuple):
    form: str
    pos: str
    lemma: str


@dataclass
class Lexicon:
    """Case-folded form -> (lemma, POS) lookup for the plain-text path.

    Lookups that miss fall back to lemma = form, POS = ``<unk>``.
    """

    mapping: dict[str, tuple[str, str]] = field(default_factory=dict)

    def add(self, form: str, lemma: str, pos: str) -> None:
        self.mapping[form.casefold()] = (lemma, pos)

    def lookup(self, form: str) -> tuple[str, str]:
        hit = self.mapping.get(form.casefold())
        if hit is None:
            return form, UNKNOWN_POS
        return hit

    @classmethod
    def from_tsv(cls, lines: Iterable[str] | str) -> "Lexicon":
        """Build from tab-separated lines: form, lemma, POS."""
        if isinstance(lines, str):
            lines = lines.splitlines()
        lex = cls()
        for line_no, line in enumerate(lines, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise VerticalParseError(line_no, f"lexicon line has {len(cols)} columns, expected 3")
            lex.add(cols[0], cols[1], cols[2])
        return lex


class _Builder:
    """Accumulates interned token columns and the document table."""

    def __init__(self) -> None:
        self.lemmas = Vocabulary()
        self.forms = Vocabulary()
        self.pos_tags = Vocabulary()
        self.lemma_col = array("I")
        self.form_col = array("I")
        self.pos_col = array("I")
        self.documents: list[Document] = []
        self._open_id: str | None = None
        self._open_date = DateSpec.undated()
        self._open_typology: str | None = None
        self._open_start = 0

    def open_document(self, doc_id: str, date: DateSpec, typology: str | None) -> None:
        self.close_document()
        self._open_id = doc_id
        self._open_date = date
        self._open_typology = typology
        self._open_start = len(self.lemma_col)

    def ensure_document(self) -> None:
        if self._open_id is None:
            self.open_document("doc0", DateSpec.undated(), None)

    def close_document(self) -> None:
        if self._open_id is None:
            return
        self.documents.append(
            Document(
                self._open_id,
                self._open_date,
                self._open_typology,
                self._open_start,
                len(self.lemma_col) - self._open_start,
            )
        )
        self._open_id = None

    def add_token(self, form: str, pos: str, lemma: str) -> None:
        self.lemma_col.append(self.lemmas.intern(lemma))
        self.form_col.append(self.forms.intern(form))
        self.pos_col.append(self.pos_tags.intern(pos))

    def finish(self) -> CorpusIndex:
        self.close_document()
        return CorpusIndex(
            self.lemmas,
            self.forms,
            self.pos_tags,
            np.asarray(self.lemma_col, dtype=np.uint32),
            np.asarray(self.form_col, dtype=np.uint32),
            np.asarray(self.pos_col, dtype=np.uint16),
            self.documents,
        )


def _parse_header(line: str, line_no: int) -> tuple[str, DateSpec, str | None]:
    fields: dict[str, str] = {}
    for chunk in line[len("#doc"):].split():
        if "=" not in chunk:
            raise VerticalParseError(line_no, f"malformed header field {chunk!r} (expected key=value)")
        key, _, value = chunk.partition("=")
        fields[key] = value
    doc_id = fields.get("id")
    if not doc_id:
        raise VerticalParseError(line_no, "document header missing id")
    date = DateSpec.undated()
    if "date" in fields:
        m = _DATE_RE.match(fields["date"])
        if m is None:
            raise VerticalParseError(line_no, f"invalid date syntax: {fields['date']!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if lo > hi:
            raise VerticalParseError(line_no, f"date interval reversed: {fields['date']!r}")
        date = DateSpec.year_range(lo, hi)
    return doc_id, date, fields.get("typology")


def parse_vertical(
    lines: Iterable[str] | str,
    drop_pos: frozenset[str] | set[str] = DEFAULT_DROP_POS,
) -> CorpusIndex:
    """Parse vertical text into a :class:`CorpusIndex`.

    ``lines`` is a line iterable (an open file works) or a single string.
    Tokens appearing before any ``#doc`` header go into an implicit
    undated document named ``doc0``.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    builder = _Builder()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("#doc"):
            builder.open_document(*_parse_header(line, line_no))
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise VerticalParseError(line_no, f"token line has {len(cols)} columns, expected 3")
        form, pos, lemma = cols
        if not form:
            raise VerticalParseError(line_no, "empty form column")
        if pos in drop_pos:
            continue
        builder.ensure_document()
        builder.add_token(form, pos, lemma)
    return builder.finish()


def tokenize_plain(text: str) -> list[str]:
    """Maximal runs of Unicode letters; everything else separates tokens."""
    return _WORD_RE.findall(text)


def lemmatize(forms: Sequence[str], lex: Lexicon) -> list[VerticalRecord]:
    """Map each form through the lexicon (case-folded); misses keep the form."""
    records = []
    for form in forms:
        lemma, pos = lex.lookup(form)
        records.append(VerticalRecord(form, pos, lemma))
    return records


def index_from_documents(
    docs: Iterable[tuple[str, DateSpec, str | None, Sequence[VerticalRecord | tuple[str, str, str]]]],
) -> CorpusIndex:
    """Assemble an index from (doc_id, date, typology, records) tuples."""
    builder = _Builder()
    for doc_id, date, typology, records in docs:
        builder.open_document(doc_id, date, typology)
        for form, pos, lemma in records:
            builder.add_token(form, pos, lemma)
    return builder.finish()
