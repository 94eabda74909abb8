"""Exact softmax model: probabilities, objective, analytic gradients.

The model estimates the conditional probability of a context word w given
a center word ws as

    p_hat(w | ws) = exp(out[w] . in[ws]) / sum_u exp(out[u] . in[ws])

and the training objective is the corpus-average log probability

    E = (1/T) * sum over positions t and window offsets j != 0
        of log p_hat(w_{t+j} | w_t)

with out-of-range offsets skipped at the corpus boundary.  Grouping the
sum by word pairs turns E into (1/T) * sum_{ws,w} n_{ws,w} log p_hat(w|ws)
with n taken from a CooccurrenceTable, and the analytic gradients below
come from that grouped form.  Everything here is plain dense numpy in
double precision; the exact model is deliberately toy-scale (cost per
probability row and per gradient is O(W * dim)).

Gradient mode:

* "actual" uses each word's true slot count and is the exact gradient of
  the truncated-window objective implemented here; gradient-check tests
  validate it against finite differences of E.
* "full_window" charges every center the idealized 2c * n_center slot
  budget, i.e. it ignores boundary truncation exactly like the classical
  update rule; it coincides with "actual" when no window is truncated
  (e.g. circular corpora).  Ascending it drives each probability row
  toward count / (2c * n_center), which is what the trainer wants, so it
  is the trainer's default.
"""

from __future__ import annotations

import numpy as np

from .cooccur import CooccurrenceTable
from .embeddings import EmbeddingSet


def softmax_row(emb: EmbeddingSet, center: int) -> np.ndarray:
    """Model probability vector p_hat(. | center), length W.

    Computed stably by subtracting the max inner product before
    exponentiation; components sum to 1.
    """
    scores = emb.output_vectors @ emb.input_vectors[center]
    scores = scores - scores.max()
    e = np.exp(scores)
    return e / e.sum()


def softmax_matrix(emb: EmbeddingSet) -> np.ndarray:
    """All probability rows at once: entry [ws, w] is p_hat(w | ws)."""
    return np.exp(log_prob_matrix(emb))


def log_prob_matrix(emb: EmbeddingSet) -> np.ndarray:
    """Entry [ws, w] is log p_hat(w | ws), computed with max subtraction."""
    scores = emb.input_vectors @ emb.output_vectors.T
    m = scores.max(axis=1, keepdims=True)
    log_z = m + np.log(np.exp(scores - m).sum(axis=1, keepdims=True))
    return scores - log_z


def average_log_prob(
    emb: EmbeddingSet, ids: np.ndarray, radius: int, circular: bool = False
) -> float:
    """The objective E summed position by position over the corpus."""
    ids = np.asarray(ids)
    log_p = log_prob_matrix(emb)
    total = 0.0
    for j in range(1, radius + 1):
        if circular:
            shifted = np.roll(ids, -j)
            total += log_p[ids, shifted].sum()
            total += log_p[shifted, ids].sum()
        elif j < ids.size:
            total += log_p[ids[:-j], ids[j:]].sum()
            total += log_p[ids[j:], ids[:-j]].sum()
    return float(total / ids.size)


def average_log_prob_grouped(emb: EmbeddingSet, table: CooccurrenceTable) -> float:
    """The objective E grouped by word pairs: (1/T) sum n_{ws,w} log p_hat."""
    log_p = log_prob_matrix(emb)
    coo = table.pair_counts.tocoo()
    total = float((coo.data * log_p[coo.row, coo.col]).sum())
    return total / table.total_tokens


def _slot_budget(table: CooccurrenceTable, mode: str) -> np.ndarray:
    """Per-word context-slot denominator used by the aggregate gradients."""
    if mode == "actual":
        return table.slot_counts.astype(np.float64)
    if mode == "full_window":
        return 2.0 * table.radius * table.center_counts.astype(np.float64)
    raise ValueError(f"unknown gradient mode: {mode!r}")


def grad_input(
    emb: EmbeddingSet, table: CooccurrenceTable, center: int,
    mode: str = "actual",
) -> np.ndarray:
    """Gradient of E with respect to the input vector of `center`.

    Aggregate form: (1/T) * sum_w (n_{center,w} - slots * p_hat(w|center))
    times the output vector of w.  With mode="full_window" this equals
    2c * p(center) * sum_w (p_c(w|center) - p_hat(w|center)) * out[w].
    """
    counts = table.context_row(center)
    slots = _slot_budget(table, mode)[center]
    p_hat = softmax_row(emb, center)
    coeff = counts - slots * p_hat
    return (coeff @ emb.output_vectors) / table.total_tokens


def grad_output(
    emb: EmbeddingSet, table: CooccurrenceTable, context: int,
    mode: str = "actual",
) -> np.ndarray:
    """Gradient of E with respect to the output vector of `context`.

    Aggregate form: (1/T) * sum_w (n_{w,context} - slots_w * p_hat(context|w))
    times the input vector of w; with the idealized slot budget this is
    sum_w 2c * p(w) * (p_c(context|w) - p_hat(context|w)) * in[w].
    """
    counts = np.asarray(table.pair_counts[:, context].todense()).ravel()
    slots = _slot_budget(table, mode)
    p_col = softmax_matrix(emb)[:, context]
    coeff = counts - slots * p_col
    return (coeff @ emb.input_vectors) / table.total_tokens


def grad_input_all(
    emb: EmbeddingSet, table: CooccurrenceTable, mode: str = "actual"
) -> np.ndarray:
    """Stacked grad_input for every word: (W, dim)."""
    slots = _slot_budget(table, mode)
    p_hat = softmax_matrix(emb)
    coeff = table.pair_counts.toarray() - slots[:, None] * p_hat
    return (coeff @ emb.output_vectors) / table.total_tokens


def grad_output_all(
    emb: EmbeddingSet, table: CooccurrenceTable, mode: str = "actual"
) -> np.ndarray:
    """Stacked grad_output for every word: (W, dim)."""
    slots = _slot_budget(table, mode)
    p_hat = softmax_matrix(emb)
    coeff = table.pair_counts.toarray() - slots[:, None] * p_hat
    return (coeff.T @ emb.input_vectors) / table.total_tokens


def _window_offsets(t: int, size: int, radius: int, circular: bool) -> list[int]:
    offsets = [j for j in range(-radius, radius + 1) if j != 0]
    if circular:
        return offsets
    return [j for j in offsets if 0 <= t + j < size]


def grad_input_positional(
    emb: EmbeddingSet, ids: np.ndarray, radius: int, center: int,
    circular: bool = False,
) -> np.ndarray:
    """Gradient of E on in[center] summed literally over corpus positions.

    For every occurrence of `center` and every valid offset, add the
    context's output vector minus the probability-weighted mean of all
    output vectors.  Slow by design; the aggregate form must match it.
    """
    ids = np.asarray(ids)
    p_hat = softmax_row(emb, center)
    mean_out = p_hat @ emb.output_vectors
    grad = np.zeros(emb.dim)
    for t in np.flatnonzero(ids == center):
        for j in _window_offsets(int(t), ids.size, radius, circular):
            context = ids[(int(t) + j) % ids.size]
            grad += emb.output_vectors[context] - mean_out
    return grad / ids.size


def grad_output_positional(
    emb: EmbeddingSet, ids: np.ndarray, radius: int, context: int,
    circular: bool = False,
) -> np.ndarray:
    """Gradient of E on out[context] summed literally over corpus positions.

    Position t contributes (times-in-window - valid-slots * p_hat) times
    the center's input vector, where times-in-window counts how often
    `context` appears in the window at t.
    """
    ids = np.asarray(ids)
    p_col = softmax_matrix(emb)[:, context]
    grad = np.zeros(emb.dim)
    for t in range(ids.size):
        offsets = _window_offsets(t, ids.size, radius, circular)
        in_window = sum(
            1 for j in offsets if ids[(t + j) % ids.size] == context)
        coeff = in_window - len(offsets) * p_col[ids[t]]
        grad += coeff * emb.input_vectors[ids[t]]
    return grad / ids.size


def decompose_input_gradient(
    emb: EmbeddingSet, center: int, winner: int
) -> tuple[float, np.ndarray]:
    """Competitive-learning split of one context occurrence's input gradient.

    For a single occurrence of `winner` in the window of `center`, the
    gradient on in[center] is a positive pull of (1 - p_hat(winner|center))
    along the winner's output vector and a negative push of -p_hat(w|center)
    along every other word's output vector.  Returns the winner coefficient
    and the W-1 loser coefficients in word-id order (winner removed); all
    coefficients sum to zero because the probabilities sum to one.
    """
    p_hat = softmax_row(emb, center)
    winner_coeff = 1.0 - p_hat[winner]
    loser_coeffs = np.delete(-p_hat, winner)
    return float(winner_coeff), loser_coeffs
