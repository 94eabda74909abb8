"""Negative-sampling trainer: noise table, per-slot step, corpus sweep."""

import numpy as np
import pytest

from sglab.embeddings import EmbeddingSet, init_embeddings
from sglab.errors import TrainingDivergedError
from sglab.sgns import (
    HAVE_NUMBA,
    NoiseDistribution,
    SgnsConfig,
    build_noise_table,
    noise_from_counts,
    sample_negatives,
    sample_negatives_batch,
    sgns_objective,
    sgns_step,
    slots_in_corpus,
    suggested_negatives,
    train_sgns,
)

from test_softmax import fd_gradient, make_emb, rel_err


# ---------------------------------------------------------------------------
# noise distribution and alias sampler


def test_noise_probabilities_follow_the_power_law():
    counts = np.array([16, 81, 1, 0])
    noise = noise_from_counts(counts, power=0.75)
    raw = counts.astype(float) ** 0.75
    assert noise.probabilities == pytest.approx(raw / raw.sum())
    assert noise.probabilities.sum() == pytest.approx(1.0)
    assert noise.probabilities[3] == 0.0


def test_power_one_recovers_relative_frequencies():
    counts = np.array([3, 1])
    noise = noise_from_counts(counts, power=1.0)
    assert noise.probabilities == pytest.approx([0.75, 0.25])


def test_build_noise_table_uses_vocab_counts(song_vocab):
    noise = build_noise_table(song_vocab)
    raw = song_vocab.counts.astype(float) ** 0.75
    assert noise.probabilities == pytest.approx(raw / raw.sum())


def test_alias_table_encodes_the_distribution_exactly():
    # closed form for the alias method: word w is returned with mass
    # accept[w]/W plus (1 - accept[c])/W from every cell aliased to it
    rng = np.random.default_rng(0)
    for _ in range(20):
        w = int(rng.integers(1, 30))
        counts = rng.integers(0, 1000, size=w)
        if counts.sum() == 0:
            counts[0] = 1
        noise = noise_from_counts(counts)
        implied = noise.accept / w
        np.add.at(implied, noise.alias, (1.0 - noise.accept) / w)
        assert np.abs(implied - noise.probabilities).max() < 1e-12


def test_sampler_matches_distribution_statistically():
    counts = np.array([100, 10, 1, 50, 5])
    noise = noise_from_counts(counts)
    rng = np.random.default_rng(123)
    draws = noise.sample(rng, 200_000)
    freq = np.bincount(draws, minlength=5) / draws.size
    assert np.abs(freq - noise.probabilities).sum() < 0.01


def test_sample_negatives_shape_dtype_and_range():
    noise = noise_from_counts(np.array([5, 3, 2]))
    rng = np.random.default_rng(0)
    draws = sample_negatives(noise, 40, rng)
    assert draws.shape == (40,)
    assert draws.dtype == np.int32
    assert draws.min() >= 0 and draws.max() < 3


def test_sample_negatives_avoids_the_excluded_word():
    counts = np.array([20, 50, 30])
    noise = noise_from_counts(counts)
    rng = np.random.default_rng(7)
    for exclude in range(3):
        draws = sample_negatives(noise, 200, rng, exclude=exclude)
        assert not np.any(draws == exclude)


def test_batch_negatives_avoid_their_own_positive():
    counts = np.array([20, 50, 30, 10])
    noise = noise_from_counts(counts)
    rng = np.random.default_rng(11)
    positives = np.array([0, 1, 2, 3] * 50, dtype=np.int32)
    draws = sample_negatives_batch(noise, positives, 5, rng)
    assert draws.shape == (200, 5)
    assert not np.any(draws == positives[:, None])


def test_sampling_is_deterministic_given_the_seed():
    noise = noise_from_counts(np.array([5, 3, 2, 8]))
    a = noise.sample(np.random.default_rng(42), 100)
    b = noise.sample(np.random.default_rng(42), 100)
    assert np.array_equal(a, b)


def test_suggested_negatives_thresholds():
    assert suggested_negatives(999_999) == 15
    assert suggested_negatives(1_000_000) == 5
    assert suggested_negatives(36) == 15


# ---------------------------------------------------------------------------
# per-slot objective and update


def test_objective_at_zero_vectors():
    emb = EmbeddingSet(
        input_vectors=np.zeros((4, 3)),
        output_vectors=np.zeros((4, 3)),
        dim=3,
    )
    negs = np.array([2, 3, 3], dtype=np.int32)
    # every inner product is 0, so each of the 4 terms is log(1/2)
    assert sgns_objective(emb, 0, 1, negs) == pytest.approx(4 * np.log(0.5))


def test_step_matches_finite_differences_in_every_role():
    rng = np.random.default_rng(3)
    for trial in range(10):
        w = int(rng.integers(5, 9))
        dim = int(rng.integers(2, 5))
        emb = make_emb(rng, w, dim)
        center = int(rng.integers(0, w))
        context = int(rng.integers(0, w))
        negatives = rng.integers(0, w, size=4).astype(np.int32)
        if trial % 2 == 0:
            negatives[1] = negatives[0]  # duplicates must accumulate

        probe = emb.copy()

        def objective():
            return sgns_objective(probe, center, context, negatives)

        fd_in = fd_gradient(objective, probe.input_vectors)
        fd_out = fd_gradient(objective, probe.output_vectors)

        lr = 1e-3
        stepped = emb.copy()
        sgns_step(stepped, center, context, negatives, lr)
        got_in = (stepped.input_vectors - emb.input_vectors) / lr
        got_out = (stepped.output_vectors - emb.output_vectors) / lr

        assert rel_err(got_in, fd_in) < 1e-5
        assert rel_err(got_out, fd_out) < 1e-5


def test_step_touches_only_the_participating_rows():
    rng = np.random.default_rng(4)
    emb = make_emb(rng, 8, 3)
    before = emb.copy()
    negatives = np.array([5, 6], dtype=np.int32)
    sgns_step(emb, 1, 2, negatives, 0.1)
    untouched_in = [w for w in range(8) if w != 1]
    assert np.array_equal(emb.input_vectors[untouched_in],
                          before.input_vectors[untouched_in])
    untouched_out = [w for w in range(8) if w not in (2, 5, 6)]
    assert np.array_equal(emb.output_vectors[untouched_out],
                          before.output_vectors[untouched_out])


def test_step_increases_its_own_objective():
    rng = np.random.default_rng(5)
    emb = make_emb(rng, 6, 4)
    negatives = np.array([3, 4, 5], dtype=np.int32)
    before = sgns_objective(emb, 0, 1, negatives)
    sgns_step(emb, 0, 1, negatives, 0.05)
    assert sgns_objective(emb, 0, 1, negatives) > before


# ---------------------------------------------------------------------------
# corpus sweep


def test_slots_in_corpus_hand_values():
    assert slots_in_corpus(5, 2) == 14
    assert slots_in_corpus(1, 3) == 0
    assert slots_in_corpus(3, 5) == 6
    assert slots_in_corpus(36, 2) == 138


def test_train_is_deterministic(song_ids):
    cfg = SgnsConfig(negatives=3, epochs=2, radius=2, dim=12, seed=9)
    a = train_sgns(song_ids, cfg)
    b = train_sgns(song_ids, cfg)
    assert np.array_equal(a.input_vectors, b.input_vectors)
    assert np.array_equal(a.output_vectors, b.output_vectors)
    c = train_sgns(song_ids, SgnsConfig(negatives=3, epochs=2, radius=2,
                                        dim=12, seed=10))
    assert not np.allclose(a.input_vectors, c.input_vectors)


def test_log_reports_progress_and_rate_floor(tmp_path, song_ids):
    log = tmp_path / "log.csv"
    cfg = SgnsConfig(negatives=3, epochs=4, radius=2, dim=12, seed=0,
                     learning_rate=0.05)
    train_sgns(song_ids, cfg, log_path=log)
    rows = log.read_text().splitlines()
    assert rows[0] == "slots_processed,mean_objective,learning_rate"
    assert len(rows) == 5
    parsed = [r.split(",") for r in rows[1:]]
    slots = [int(p[0]) for p in parsed]
    assert slots == [138, 276, 414, 552]
    objs = [float(p[1]) for p in parsed]
    assert objs[-1] > objs[0]
    # the schedule bottoms out at 1e-4 of the starting rate
    assert float(parsed[-1][2]) == pytest.approx(0.05 * 1e-4)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_fast_and_reference_paths_agree(song_ids):
    cfg = SgnsConfig(negatives=4, epochs=2, radius=2, dim=10, seed=3)
    fast = train_sgns(song_ids, cfg, use_fast=True)
    slow = train_sgns(song_ids, cfg, use_fast=False)
    assert np.allclose(fast.input_vectors, slow.input_vectors, atol=1e-12)
    assert np.allclose(fast.output_vectors, slow.output_vectors, atol=1e-12)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_hogwild_smoke(song_ids):
    cfg = SgnsConfig(negatives=2, epochs=2, radius=2, dim=8, seed=0)
    emb = train_sgns(song_ids, cfg, threads=2)
    assert np.isfinite(emb.input_vectors).all()
    assert np.isfinite(emb.output_vectors).all()


def test_subsampling_shrinks_the_workload(tmp_path, song_ids):
    log = tmp_path / "log.csv"
    cfg = SgnsConfig(negatives=2, epochs=1, radius=2, dim=8, seed=0,
                     subsample_threshold=1e-4)
    train_sgns(song_ids, cfg, log_path=log)
    slots_seen = int(log.read_text().splitlines()[1].split(",")[0])
    assert 0 < slots_seen < slots_in_corpus(36, 2)


def test_empty_corpus_raises():
    with pytest.raises(ValueError):
        train_sgns(np.array([], dtype=np.int64), SgnsConfig())


@pytest.mark.parametrize("bad", [
    dict(negatives=0),
    dict(learning_rate=0.0),
    dict(epochs=0),
    dict(radius=0),
    dict(dim=0),
])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SgnsConfig(**bad)
