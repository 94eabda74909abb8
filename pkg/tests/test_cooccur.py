"""Window counting against a brute-force double-loop oracle."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sglab.cooccur import (
    count_cooccurrences,
    count_cooccurrences_sharded,
    ground_truth_prob,
    ground_truth_row,
    load_cooccur_tsv,
    save_cooccur_tsv,
    unigram_prob,
)
from sglab.corpus import Vocabulary, build_vocab
from sglab.errors import UndefinedProbabilityError

from conftest import random_corpus


def brute_force_counts(ids, radius, num_words, circular=False):
    """O(T * c) reference: walk every position and every offset."""
    mat = np.zeros((num_words, num_words), dtype=np.int64)
    n = len(ids)
    for t in range(n):
        for j in range(-radius, radius + 1):
            if j == 0:
                continue
            u = t + j
            if circular:
                mat[ids[t], ids[u % n]] += 1
            elif 0 <= u < n:
                mat[ids[t], ids[u]] += 1
    return mat


def test_matches_brute_force_on_random_corpora():
    rng = np.random.default_rng(42)
    for _ in range(50):
        ids = random_corpus(rng, max_tokens=200, max_words=12)
        radius = int(rng.integers(1, 5))
        w = int(ids.max()) + 1
        table = count_cooccurrences(ids, radius, num_words=w)
        expected = brute_force_counts(ids, radius, w)
        assert np.array_equal(table.pair_counts.toarray(), expected)
        assert np.array_equal(table.slot_counts, expected.sum(axis=1))


def test_circular_matches_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(20):
        ids = random_corpus(rng, max_tokens=60, max_words=6)
        radius = int(rng.integers(1, 4))
        if ids.size <= 2 * radius:
            continue
        w = int(ids.max()) + 1
        table = count_cooccurrences(ids, radius, num_words=w, circular=True)
        expected = brute_force_counts(ids, radius, w, circular=True)
        assert np.array_equal(table.pair_counts.toarray(), expected)
        # wraparound leaves no window truncated
        assert np.array_equal(
            table.slot_counts, 2 * radius * table.center_counts)


def test_song_counts_for_probe_word(song_table, song_vocab):
    every = song_vocab.id_of("every")
    expected = {"star": 2, "had": 2, "person": 2,
                "a": 1, "and": 1, "for": 1, "carrying": 1}
    row = song_table.context_row(every)
    nonzero = {song_vocab.words[i]: int(c)
               for i, c in enumerate(row) if c > 0}
    assert nonzero == expected
    assert song_table.slot_counts[every] == 10
    assert song_table.center_counts[every] == 3
    assert song_table.total_tokens == 36


def test_song_ground_truth_probabilities(song_table, song_vocab):
    every = song_vocab.id_of("every")
    star = song_vocab.id_of("star")
    # full-window denominator: 2 * 2 * 3 = 12 slots whether or not the
    # first window was clipped at the corpus start
    assert ground_truth_prob(song_table, every, star) == pytest.approx(2 / 12)
    assert ground_truth_prob(song_table, every, star, mode="actual") == pytest.approx(2 / 10)
    assert unigram_prob(song_table, every) == pytest.approx(3 / 36)


def test_ground_truth_row_sums(song_table, song_vocab):
    every = song_vocab.id_of("every")
    assert ground_truth_row(song_table, every, mode="actual").sum() == pytest.approx(1.0)
    # truncation leaks mass under the full-window denominator
    assert ground_truth_row(song_table, every).sum() == pytest.approx(10 / 12)


def test_unseen_word_probability_is_undefined(song_ids):
    table = count_cooccurrences(song_ids, 2, num_words=30)  # ids 26..29 unused
    with pytest.raises(UndefinedProbabilityError):
        ground_truth_prob(table, 28, 0)
    with pytest.raises(UndefinedProbabilityError):
        ground_truth_row(table, 28, mode="actual")


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        count_cooccurrences(np.array([0, 1]), radius=0)
    with pytest.raises(ValueError):
        count_cooccurrences(np.array([], dtype=np.int64), radius=2)
    with pytest.raises(ValueError):
        ground_truth_prob(
            count_cooccurrences(np.array([0, 1]), 1), 0, 1, mode="sideways")


def test_sharded_counting_equals_single_pass():
    rng = np.random.default_rng(3)
    for _ in range(25):
        ids = random_corpus(rng, max_tokens=150, max_words=9)
        radius = int(rng.integers(1, 5))
        w = int(ids.max()) + 1
        whole = count_cooccurrences(ids, radius, num_words=w)
        for n_shards in (1, 2, 3, 7):
            sharded = count_cooccurrences_sharded(
                ids, radius, num_words=w, n_shards=n_shards)
            assert np.array_equal(
                sharded.pair_counts.toarray(), whole.pair_counts.toarray())
            assert np.array_equal(sharded.slot_counts, whole.slot_counts)
            assert np.array_equal(sharded.center_counts, whole.center_counts)


def test_shards_can_outnumber_tokens():
    ids = np.array([0, 1, 0])
    sharded = count_cooccurrences_sharded(ids, 2, n_shards=10)
    whole = count_cooccurrences(ids, 2)
    assert np.array_equal(sharded.pair_counts.toarray(), whole.pair_counts.toarray())


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 5), min_size=1, max_size=80),
    st.integers(1, 4),
)
def test_count_table_invariants(id_list, radius):
    ids = np.array(id_list, dtype=np.int64)
    w = int(ids.max()) + 1
    table = count_cooccurrences(ids, radius, num_words=w)
    counts = table.pair_counts.toarray()
    # the pair relation is symmetric position-wise, so the matrix is too
    assert np.array_equal(counts, counts.T)
    assert np.array_equal(counts.sum(axis=1), table.slot_counts)
    assert table.slot_counts.sum() == counts.sum()
    # each of the T windows has at most 2c slots, fewer only at boundaries
    assert counts.sum() <= 2 * radius * ids.size
    assert np.all(table.slot_counts <= 2 * radius * table.center_counts)


def test_tsv_roundtrip(song_table, song_vocab, tmp_path):
    path = tmp_path / "pairs.tsv"
    save_cooccur_tsv(song_table, song_vocab, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# radius=2 total_tokens=36"
    assert "every\tstar\t2" in lines
    loaded = load_cooccur_tsv(path, song_vocab)
    assert np.array_equal(
        loaded.pair_counts.toarray(), song_table.pair_counts.toarray())
    assert loaded.radius == 2
    assert loaded.total_tokens == 36
    assert np.array_equal(loaded.slot_counts, song_table.slot_counts)


def test_load_tsv_rejects_missing_header(tmp_path, song_vocab):
    path = tmp_path / "bad.tsv"
    path.write_text("every\tstar\t2\n")
    with pytest.raises(ValueError):
        load_cooccur_tsv(path, song_vocab)
