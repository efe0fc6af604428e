from collections import Counter

import numpy as np
import pytest

from diachrona.cooc import (
    adjacency_count,
    cooc_counts,
    dice,
    pair_evolution,
    top_cooccurrents,
)
from diachrona.corpus import CorpusError, DateSpec
from diachrona.frequency import lemma_count

from conftest import build_index, doc_lemma_lists, lemma_doc, random_index


def brute_pair_counts(index, pivot, window):
    """O(N*w) enumeration over per-document lemma lists (pure Python)."""
    counts = Counter()
    for lemmas in doc_lemma_lists(index):
        for i, left in enumerate(lemmas):
            for j in range(i + 1, min(i + window, len(lemmas) - 1) + 1):
                right = lemmas[j]
                if (left == pivot) != (right == pivot):
                    counts[right if left == pivot else left] += 1
    return dict(counts)


def brute_freqs(index):
    freqs = Counter()
    for lemmas in doc_lemma_lists(index):
        freqs.update(lemmas)
    return freqs


def single_doc(tokens, pivot=None):
    return build_index([lemma_doc("d0", DateSpec.undated(), tokens)])


class TestCoocCounts:
    def test_single_in_window_pair(self):
        index = single_doc("p c x x x".split())
        table = cooc_counts(index, None, "p", 5)
        assert table.pair_counts["c"] == 1
        assert table.pivot_freq == 1
        # the filler tokens are real tokens and count too (distances 2..4)
        assert table.pair_counts["x"] == 3

    def test_beyond_window_not_counted(self):
        index = single_doc("p x x x x x c".split())
        table = cooc_counts(index, None, "p", 5)
        assert "c" not in table.pair_counts  # distance 6 > 5

    def test_exhaustive_pair_enumeration(self):
        index = single_doc("a b a b".split())
        table = cooc_counts(index, None, "a", 1)
        assert table.pair_counts == {"b": 3}  # pairs (0,1), (1,2), (2,3)
        assert table.pivot_freq == 2

    def test_pivot_never_its_own_neighbor(self):
        index = single_doc("p p p q".split())
        table = cooc_counts(index, None, "p", 3)
        assert "p" not in table.pair_counts

    def test_windows_do_not_cross_documents(self):
        index = build_index(
            [
                lemma_doc("d1", DateSpec.undated(), ["p"]),
                lemma_doc("d2", DateSpec.undated(), ["q"]),
            ]
        )
        assert cooc_counts(index, None, "p", 5).pair_counts == {}

    def test_absent_pivot_gives_empty_table(self):
        index = single_doc(["a"])
        table = cooc_counts(index, None, "zzz", 3)
        assert table.pair_counts == {} and table.pivot_freq == 0

    def test_docset_restriction(self):
        index = build_index(
            [
                lemma_doc("d1", DateSpec.undated(), ["p", "a"]),
                lemma_doc("d2", DateSpec.undated(), ["p", "b"]),
            ]
        )
        table = cooc_counts(index, {"d1"}, "p", 2)
        assert table.pair_counts == {"a": 1}
        assert table.pivot_freq == 1

    def test_matches_brute_force_on_random_corpora(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            index = random_index(rng, min_tokens=10, max_tokens=300, max_vocab=12)
            window = int(rng.integers(1, 7))
            freqs = brute_freqs(index)
            pivot = max(freqs, key=lambda l: (freqs[l], l))
            table = cooc_counts(index, None, pivot, window)
            assert table.pair_counts == brute_pair_counts(index, pivot, window)

    def test_document_locality_shuffle_invariance(self):
        rng = np.random.default_rng(32)
        index = random_index(rng, min_tokens=100, max_tokens=300, max_vocab=10)
        docs = []
        for d in index.documents:
            span = slice(d.token_start, d.token_start + d.token_len)
            tokens = [
                (index.forms[int(f)], index.pos_tags[int(p)], index.lemmas[int(l)])
                for f, p, l in zip(
                    index.form_ids[span], index.pos_ids[span], index.lemma_ids[span]
                )
            ]
            docs.append((d.doc_id, d.date, d.typology, tokens))
        order = rng.permutation(len(docs))
        shuffled = build_index([docs[int(i)] for i in order])
        pivot = index.lemmas[0]
        a = cooc_counts(index, None, pivot, 4)
        b = cooc_counts(shuffled, None, pivot, 4)
        assert a.pair_counts == b.pair_counts
        assert a.neighbor_freqs == b.neighbor_freqs

    def test_shard_independence(self):
        rng = np.random.default_rng(33)
        index = random_index(rng, min_tokens=200, max_tokens=500, max_vocab=10)
        pivot = index.lemmas[0]
        base = cooc_counts(index, None, pivot, 5, shards=1)
        for shards in (2, 3, 7):
            sharded = cooc_counts(index, None, pivot, 5, shards=shards)
            assert sharded.pair_counts == base.pair_counts

    def test_pair_count_bound(self):
        rng = np.random.default_rng(34)
        for _ in range(10):
            index = random_index(rng, min_tokens=10, max_tokens=200, max_vocab=8)
            window = int(rng.integers(1, 7))
            freqs = brute_freqs(index)
            pivot = index.lemmas[0]
            table = cooc_counts(index, None, pivot, window)
            for lemma, count in table.pair_counts.items():
                bound = 2 * window * min(table.pivot_freq, freqs[lemma])
                assert count <= bound

    def test_window_validated(self):
        index = single_doc(["a"])
        with pytest.raises(CorpusError):
            cooc_counts(index, None, "a", 0)


class TestDice:
    def test_perfect_one_shot(self):
        assert dice(1, 1, 1) == 1.0

    def test_no_cooccurrence(self):
        assert dice(0, 10, 3) == 0.0

    def test_token_pair_counting_can_exceed_one(self):
        index = single_doc("a b a b".split())
        table = cooc_counts(index, None, "a", 1)
        assert dice(table.pair_counts["b"], table.pivot_freq, table.neighbor_freqs["b"]) == 1.5

    def test_symmetry_is_bit_exact(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            c = int(rng.integers(0, 50))
            fa = int(rng.integers(0, 1000))
            fb = int(rng.integers(0, 1000))
            if fa + fb == 0:
                continue
            assert dice(c, fa, fb) == dice(c, fb, fa)

    def test_both_zero_frequencies_error(self):
        with pytest.raises(CorpusError):
            dice(0, 0, 0)

    def test_provable_upper_bound_two_w(self):
        # pair_count <= 2*w*min(fa, fb) <= w*(fa+fb), so dice <= 2*w; reached
        # only by degenerate clustering (the "a b a b" case gives 1.5 at w=1)
        rng = np.random.default_rng(42)
        for _ in range(30):
            index = random_index(rng, min_tokens=5, max_tokens=250, max_vocab=10)
            window = int(rng.integers(1, 7))
            for lid in range(len(index.lemmas)):
                pivot = index.lemmas[lid]
                table = cooc_counts(index, None, pivot, window)
                for lemma, count in table.pair_counts.items():
                    val = dice(count, table.pivot_freq, table.neighbor_freqs[lemma])
                    assert 0.0 <= val <= 2.0 * window


class TestTopCooccurrents:
    def test_constructed_ranking(self):
        # q always adjacent to the pivot, r never near it
        docs = [lemma_doc(f"d{i}", DateSpec.undated(), ["p", "q", "z", "z", "z", "r"]) for i in range(3)]
        index = build_index(docs)
        ranked = top_cooccurrents(index, None, "p", 1, k=10)
        assert ranked[0].lemma == "q"
        assert all(c.lemma != "r" for c in ranked)

    def test_k_larger_than_candidates_no_padding(self):
        index = single_doc("p a b".split())
        ranked = top_cooccurrents(index, None, "p", 2, k=50)
        assert len(ranked) == 2

    def test_absent_pivot_empty(self):
        index = single_doc(["a"])
        assert top_cooccurrents(index, None, "zzz", 3, k=5) == []

    def test_min_count_monotonicity(self):
        rng = np.random.default_rng(51)
        index = random_index(rng, min_tokens=200, max_tokens=500, max_vocab=10)
        pivot = index.lemmas[0]
        previous = None
        for mc in (1, 2, 4, 8):
            got = {c.lemma for c in top_cooccurrents(index, None, pivot, 4, k=100, min_count=mc)}
            if previous is not None:
                assert got <= previous
            previous = got

    def test_pos_majority_rule(self):
        # q is tagged NOM in 2 of 3 tokens -> majority passes {NOM};
        # r is NOM in 1 of 3 -> fails
        docs = [
            ("d0", DateSpec.undated(), None, [("p", "NOM", "p"), ("q", "NOM", "q"), ("r", "NOM", "r")]),
            ("d1", DateSpec.undated(), None, [("p", "NOM", "p"), ("q", "NOM", "q"), ("r", "VER", "r")]),
            ("d2", DateSpec.undated(), None, [("p", "NOM", "p"), ("q", "VER", "q"), ("r", "VER", "r")]),
        ]
        index = build_index(docs)
        ranked = top_cooccurrents(index, None, "p", 2, k=10, pos_filter={"NOM"})
        lemmas = {c.lemma for c in ranked}
        assert "q" in lemmas and "r" not in lemmas

    def test_exactly_half_passes_pos_majority(self):
        docs = [
            ("d0", DateSpec.undated(), None, [("p", "NOM", "p"), ("q", "NOM", "q")]),
            ("d1", DateSpec.undated(), None, [("p", "NOM", "p"), ("q", "VER", "q")]),
        ]
        index = build_index(docs)
        ranked = top_cooccurrents(index, None, "p", 1, k=10, pos_filter={"NOM"})
        assert {c.lemma for c in ranked} == {"q"}

    def test_matches_brute_force_ranking(self):
        rng = np.random.default_rng(52)
        for _ in range(20):
            index = random_index(rng, min_tokens=50, max_tokens=500, max_vocab=15)
            window = int(rng.integers(1, 7))
            freqs = brute_freqs(index)
            pivot = max(freqs, key=lambda l: (freqs[l], l))
            got = top_cooccurrents(index, None, pivot, window, k=1000)
            pairs = brute_pair_counts(index, pivot, window)
            expected = [
                (lemma, count, freqs[lemma], 2.0 * count / (freqs[pivot] + freqs[lemma]))
                for lemma, count in pairs.items()
            ]
            expected.sort(key=lambda t: (-t[3], -t[1], t[0]))
            assert [tuple(c) for c in got] == expected


class TestAdjacency:
    def test_single_bigram(self):
        assert adjacency_count(single_doc("sanctus pater".split()), None, "pater", "sanctus") == 1

    def test_gap_not_adjacent(self):
        assert adjacency_count(single_doc("sanctus x pater".split()), None, "pater", "sanctus") == 0

    def test_both_bigrams_counted(self):
        index = single_doc("pater sanctus pater".split())
        assert adjacency_count(index, None, "pater", "sanctus") == 2

    def test_order_symmetric(self):
        index = single_doc("a b b a a b".split())
        assert adjacency_count(index, None, "a", "b") == adjacency_count(index, None, "b", "a")

    def test_unknown_lemma_gives_zero(self):
        assert adjacency_count(single_doc(["a"]), None, "a", "zzz") == 0


class TestPairEvolution:
    def test_single_nonzero_bin(self):
        index = build_index(
            [
                lemma_doc("a", DateSpec.exact(850), ["x", "y"]),
                lemma_doc("b", DateSpec.exact(1050), ["z", "z"]),
            ]
        )
        bins = pair_evolution(index, "x", "y", 5, 100)
        by_start = {b.start_year: b for b in bins}
        assert by_start[800].pair_count == 1
        assert sum(b.pair_count for b in bins) == 1

    def test_no_dated_docs_empty(self):
        index = build_index([lemma_doc("a", DateSpec.undated(), ["x", "y"])])
        assert pair_evolution(index, "x", "y", 5, 100) == []

    def test_association_doubling_doubles_dice(self):
        # era 1: one adjacent pair; era 2: two adjacent pairs, same frequencies
        era1 = ["x", "y", "f1", "f2", "x", "f3", "y", "f4"]
        era2 = ["x", "y", "f1", "f2", "x", "y", "f3", "f4"]
        index = build_index(
            [
                lemma_doc("e1", DateSpec.exact(800), era1),
                lemma_doc("e2", DateSpec.exact(900), era2),
            ]
        )
        bins = pair_evolution(index, "x", "y", 1, 100)
        by_start = {b.start_year: b for b in bins}
        assert by_start[900].dice == pytest.approx(2 * by_start[800].dice, abs=1e-12)

    def test_undated_docs_excluded(self):
        index = build_index(
            [
                lemma_doc("a", DateSpec.exact(850), ["x", "y"]),
                lemma_doc("u", DateSpec.undated(), ["x", "y"]),
            ]
        )
        bins = pair_evolution(index, "x", "y", 3, 100)
        assert sum(b.pair_count for b in bins) == 1
