"""Skip-gram training with negative sampling.

Instead of normalizing scores over the whole vocabulary, each observed
(center, context) slot is contrasted against K words drawn from a noise
distribution proportional to unigram_count ** 0.75.  The per-slot
objective is

    log sigmoid(u_pos) + sum_k log sigmoid(-u_neg_k)

with u = output_vector . input_vector, and one ascent step touches only
K + 2 vectors, so cost no longer scales with vocabulary size.

Sampling uses an alias table (Vose's method): O(W) build, O(1) per draw,
vectorizes cleanly.  The sweep itself has two interchangeable backends, a
numba kernel and a plain python loop; both consume the same precomputed
negative draws so their results can be compared bit-for-bit in tests.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .corpus import Vocabulary
from .embeddings import EmbeddingSet, init_embeddings
from .errors import TrainingDivergedError

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    HAVE_NUMBA = False

_MAX_REDRAWS = 8
_LR_FLOOR_FRACTION = 1e-4
_CHUNK_POSITIONS = 131072


# ---------------------------------------------------------------------------
# noise distribution


@dataclass
class NoiseDistribution:
    """Unigram^power noise distribution with an alias table for sampling.

    accept[i] is the probability of keeping column i's own word; alias[i]
    is the word returned otherwise.  Both arrays have length W.
    """

    probabilities: np.ndarray
    power: float
    accept: np.ndarray
    alias: np.ndarray

    @property
    def num_words(self) -> int:
        return self.probabilities.size

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw word ids with probability self.probabilities, vectorized."""
        cols = rng.integers(0, self.num_words, size=size)
        keep = rng.random(size=size) < self.accept[cols]
        return np.where(keep, cols, self.alias[cols]).astype(np.int32)


def noise_from_counts(counts: np.ndarray, power: float = 0.75) -> NoiseDistribution:
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0 or counts.sum() <= 0:
        raise ValueError("noise distribution needs at least one observed word")
    weights = counts ** power
    probs = weights / weights.sum()
    accept, alias = _build_alias(probs)
    return NoiseDistribution(probabilities=probs, power=power,
                             accept=accept, alias=alias)


def build_noise_table(vocab: Vocabulary, power: float = 0.75) -> NoiseDistribution:
    return noise_from_counts(vocab.counts, power=power)


def _build_alias(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias construction.  probs must sum to 1."""
    n = probs.size
    accept = np.zeros(n, dtype=np.float64)
    alias = np.zeros(n, dtype=np.int64)
    scaled = probs * n
    small = [i for i in range(n) if scaled[i] < 1.0]
    large = [i for i in range(n) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        accept[s] = scaled[s]
        alias[s] = l
        scaled[l] = (scaled[l] + scaled[s]) - 1.0
        if scaled[l] < 1.0:
            small.append(l)
        else:
            large.append(l)
    # leftovers are exactly 1 up to rounding
    for i in large:
        accept[i] = 1.0
        alias[i] = i
    for i in small:
        accept[i] = 1.0
        alias[i] = i
    return accept, alias


def sample_negatives(
    noise: NoiseDistribution,
    k: int,
    rng: np.random.Generator,
    exclude: int | None = None,
) -> np.ndarray:
    """Draw k noise words, redrawing any that collide with `exclude`.

    Redraws are capped at 8 rounds; a draw that still collides after that
    is kept, so the call always terminates even on a near-degenerate
    noise distribution.
    """
    draws = noise.sample(rng, k)
    if exclude is not None:
        for _ in range(_MAX_REDRAWS):
            mask = draws == exclude
            if not mask.any():
                break
            draws[mask] = noise.sample(rng, int(mask.sum()))
    return draws


def sample_negatives_batch(
    noise: NoiseDistribution,
    positives: np.ndarray,
    k: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Negatives for many slots at once: row i avoids positives[i]."""
    n = positives.size
    draws = noise.sample(rng, (n, k))
    for _ in range(_MAX_REDRAWS):
        mask = draws == positives[:, None]
        if not mask.any():
            break
        draws[mask] = noise.sample(rng, int(mask.sum()))
    return draws


def suggested_negatives(total_tokens: int) -> int:
    """More noise words for small corpora, fewer once data is plentiful."""
    return 15 if total_tokens < 1_000_000 else 5


# ---------------------------------------------------------------------------
# per-slot objective and update


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def sgns_objective(
    emb: EmbeddingSet,
    center: int,
    context: int,
    negatives: np.ndarray,
) -> float:
    """Value of one slot's contrastive objective at the current vectors."""
    v_c = emb.input_vectors[center]
    u_pos = float(emb.output_vectors[context] @ v_c)
    u_neg = emb.output_vectors[negatives] @ v_c
    return float(_log_sigmoid(u_pos) + _log_sigmoid(-u_neg).sum())


def sgns_step(
    emb: EmbeddingSet,
    center: int,
    context: int,
    negatives: np.ndarray,
    lr: float,
) -> None:
    """One in-place ascent step on a single slot.

    All gradients are evaluated at the pre-step vectors: the input update
    reads the old output rows and the output updates read a saved copy of
    the old input row, so update order cannot leak into the math.
    """
    vin = emb.input_vectors
    vout = emb.output_vectors
    v_c = vin[center].copy()
    u_pos = float(vout[context] @ v_c)
    g_pos = 1.0 - float(expit(u_pos))
    u_neg = vout[negatives] @ v_c
    s_neg = expit(u_neg)
    vin[center] += lr * (g_pos * vout[context] - s_neg @ vout[negatives])
    vout[context] += lr * g_pos * v_c
    for j, w in enumerate(negatives):
        # looped on purpose: duplicate noise words must each contribute
        vout[w] -= lr * s_neg[j] * v_c


# ---------------------------------------------------------------------------
# corpus sweep


@dataclass
class SgnsConfig:
    negatives: int = 5
    learning_rate: float = 0.025
    epochs: int = 1
    radius: int = 5
    dim: int = 128
    seed: int = 0
    subsample_threshold: float | None = None

    def __post_init__(self):
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


def slots_in_corpus(total: int, radius: int) -> int:
    """Number of (center, context) slots in a corpus of `total` tokens."""
    return 2 * sum(max(total - j, 0) for j in range(1, radius + 1))


def _chunk_pairs(seq: np.ndarray, start: int, stop: int, radius: int):
    """Slots for centers in [start, stop), in corpus order.

    Per-center offset order is -radius..-1, 1..radius, matching a literal
    window walk, so sequential updates visit slots deterministically.
    """
    offsets = np.concatenate([np.arange(-radius, 0), np.arange(1, radius + 1)])
    pos = np.arange(start, stop)[:, None] + offsets[None, :]
    valid = (pos >= 0) & (pos < seq.size)
    centers = np.repeat(seq[start:stop], valid.sum(axis=1))
    contexts = seq[pos[valid]]
    return centers.astype(np.int32), contexts.astype(np.int32)


def _subsample(seq: np.ndarray, counts: np.ndarray, threshold: float,
               rng: np.random.Generator) -> np.ndarray:
    """Randomly drop very frequent words, word2vec style."""
    freq = counts[seq] / seq.size
    keep = np.minimum(1.0, np.sqrt(threshold / freq) + threshold / freq)
    return seq[rng.random(seq.size) < keep]


def train_sgns(
    ids: np.ndarray,
    config: SgnsConfig,
    num_words: int | None = None,
    log_path: str | Path | None = None,
    use_fast: bool = True,
    threads: int = 1,
) -> EmbeddingSet:
    """Sweep the corpus for config.epochs epochs of negative sampling.

    The learning rate decays linearly over all scheduled slots down to a
    floor of 1e-4 of its starting value.  With threads > 1 the sweep runs
    hogwild (concurrent, unsynchronized) and is no longer deterministic.
    Writes a per-epoch CSV log `slots_processed,mean_objective,learning_rate`
    when log_path is given.
    """
    ids = np.asarray(ids, dtype=np.int32)
    if ids.size == 0:
        raise ValueError("cannot train on an empty corpus")
    if num_words is None:
        num_words = int(ids.max()) + 1
    counts = np.bincount(ids, minlength=num_words).astype(np.int64)
    noise = noise_from_counts(counts)
    emb = init_embeddings(num_words, config.dim, config.seed)
    rng = np.random.default_rng([config.seed, 0x5347])

    lr0 = config.learning_rate
    lr_floor = _LR_FLOOR_FRACTION * lr0
    total_slots = config.epochs * slots_in_corpus(ids.size, config.radius)
    fast = use_fast and HAVE_NUMBA

    log_rows: list[str] = []
    slots_done = 0
    for epoch in range(config.epochs):
        seq = ids
        if config.subsample_threshold is not None:
            seq = _subsample(ids, counts, config.subsample_threshold, rng)
        epoch_obj = 0.0
        epoch_slots = 0
        for start in range(0, seq.size, _CHUNK_POSITIONS):
            stop = min(start + _CHUNK_POSITIONS, seq.size)
            centers, contexts = _chunk_pairs(seq, start, stop, config.radius)
            if centers.size == 0:
                continue
            negatives = sample_negatives_batch(noise, contexts,
                                               config.negatives, rng)
            slot_idx = slots_done + np.arange(centers.size)
            lrs = np.maximum(lr0 * (1.0 - slot_idx / total_slots), lr_floor)
            if fast:
                obj = _run_kernel(emb, centers, contexts, negatives, lrs,
                                  threads)
            else:
                obj = _sweep_python(emb, centers, contexts, negatives, lrs)
            epoch_obj += obj
            slots_done += centers.size
            epoch_slots += centers.size
        mean_obj = epoch_obj / max(epoch_slots, 1)
        if not (np.isfinite(mean_obj)
                and np.isfinite(emb.input_vectors).all()
                and np.isfinite(emb.output_vectors).all()):
            _flush_log(log_path, log_rows)
            raise TrainingDivergedError(epoch + 1)
        lr_now = max(lr0 * (1.0 - slots_done / total_slots), lr_floor)
        log_rows.append(f"{slots_done},{mean_obj!r},{lr_now!r}")
    _flush_log(log_path, log_rows)
    return emb


def _flush_log(log_path, rows: list[str]) -> None:
    if log_path is None:
        return
    with open(log_path, "w", encoding="utf-8") as fh:
        fh.write("slots_processed,mean_objective,learning_rate\n")
        fh.write("\n".join(rows) + "\n")


def _sweep_python(emb, centers, contexts, negatives, lrs) -> float:
    total = 0.0
    for i in range(centers.size):
        c = int(centers[i])
        o = int(contexts[i])
        negs = negatives[i]
        total += sgns_objective(emb, c, o, negs)
        sgns_step(emb, c, o, negs, float(lrs[i]))
    return total


def _run_kernel(emb, centers, contexts, negatives, lrs, threads) -> float:
    if threads <= 1:
        return _sweep_numba(emb.input_vectors, emb.output_vectors,
                            centers, contexts, negatives, lrs)
    bounds = np.linspace(0, centers.size, threads + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_sweep_numba, emb.input_vectors, emb.output_vectors,
                        centers[a:b], contexts[a:b], negatives[a:b], lrs[a:b])
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a
        ]
        return sum(f.result() for f in futures)


if HAVE_NUMBA:

    @numba.njit(inline="always")
    def _sigmoid_scalar(x):
        if x >= 0.0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)

    @numba.njit(inline="always")
    def _log_sigmoid_scalar(x):
        if x >= 0.0:
            return -math.log1p(math.exp(-x))
        return x - math.log1p(math.exp(x))

    @numba.njit(cache=True, nogil=True)
    def _sweep_numba(vin, vout, centers, contexts, negatives, lrs):
        n = centers.shape[0]
        k = negatives.shape[1]
        dim = vin.shape[1]
        delta = np.empty(dim)
        s_neg = np.empty(k)
        total = 0.0
        for i in range(n):
            wc = centers[i]
            wo = contexts[i]
            lr = lrs[i]
            u_pos = 0.0
            for d in range(dim):
                u_pos += vout[wo, d] * vin[wc, d]
            g_pos = 1.0 - _sigmoid_scalar(u_pos)
            total += _log_sigmoid_scalar(u_pos)
            for d in range(dim):
                delta[d] = g_pos * vout[wo, d]
            for j in range(k):
                wn = negatives[i, j]
                u_neg = 0.0
                for d in range(dim):
                    u_neg += vout[wn, d] * vin[wc, d]
                s_neg[j] = _sigmoid_scalar(u_neg)
                total += _log_sigmoid_scalar(-u_neg)
                for d in range(dim):
                    delta[d] -= s_neg[j] * vout[wn, d]
            # output rows first: they must see the pre-step input row
            for d in range(dim):
                vout[wo, d] += lr * g_pos * vin[wc, d]
            for j in range(k):
                wn = negatives[i, j]
                for d in range(dim):
                    vout[wn, d] -= lr * s_neg[j] * vin[wc, d]
            for d in range(dim):
                vin[wc, d] += lr * delta[d]
        return total
