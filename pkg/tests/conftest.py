"""Shared corpus builders and oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from diachrona.corpus import CorpusIndex, DateSpec
from diachrona.ingest import index_from_documents

POS_TAGS = ("NOM", "ADJ", "VER")


def build_index(docs) -> CorpusIndex:
    """Index from (doc_id, date, typology, [(form, pos, lemma), ...]) tuples."""
    return index_from_documents(docs)


def lemma_doc(doc_id, date, lemmas, pos="NOM", typology=None):
    """Document whose forms equal its lemmas; convenient for counting tests."""
    return (doc_id, date, typology, [(lem, pos, lem) for lem in lemmas])


def random_index(
    rng: np.random.Generator,
    min_tokens: int = 30,
    max_tokens: int = 1000,
    max_vocab: int = 30,
    dated_fraction: float = 0.8,
    max_doc_len: int = 80,
) -> CorpusIndex:
    """Small random corpus: uniform lemma draws, per-token random POS,
    mixed exact/range/undated documents.

    Intentionally built through the ingestion path (string records), so it
    exercises interning as well; structurally independent from
    diachrona.synth.
    """
    n_tokens = int(rng.integers(min_tokens, max_tokens + 1))
    vocab = int(rng.integers(2, max_vocab + 1))
    lemma_of = [f"l{i:02d}" for i in range(vocab)]
    docs = []
    produced = 0
    doc_no = 0
    while produced < n_tokens:
        length = int(rng.integers(1, max_doc_len + 1))
        length = min(length, n_tokens - produced)
        tokens = []
        for _ in range(length):
            lem = lemma_of[int(rng.integers(0, vocab))]
            variant = int(rng.integers(0, 2))
            form = lem if variant == 0 else lem + "a"
            pos = POS_TAGS[int(rng.integers(0, len(POS_TAGS)))]
            tokens.append((form, pos, lem))
        if rng.random() < dated_fraction:
            year = int(rng.integers(600, 1400))
            if rng.random() < 0.25:
                date = DateSpec.year_range(year, year + int(rng.integers(1, 40)))
            else:
                date = DateSpec.exact(year)
        else:
            date = DateSpec.undated()
        typology = ("charter", "letter", None)[int(rng.integers(0, 3))]
        docs.append((f"r{doc_no:04d}", date, typology, tokens))
        produced += length
        doc_no += 1
    return build_index(docs)


def doc_lemma_lists(index: CorpusIndex) -> list[list[str]]:
    """Per-document lemma strings; the substrate for brute-force oracles."""
    out = []
    for doc in index.documents:
        span = index.lemma_ids[doc.token_start : doc.token_start + doc.token_len]
        out.append([index.lemmas[int(i)] for i in span])
    return out


# ---------------------------------------------------------------------------
# acceptance reporting: one visible pass/fail line per criterion
# ---------------------------------------------------------------------------


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion metadata")
    config._criterion_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    item.config._criterion_results[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_criterion_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed = results[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:02d} {status}  {title}")
