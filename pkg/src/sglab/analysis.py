"""Validation reports: does the model's softmax match counted probabilities?

At a true optimum of the full-softmax objective every estimated
probability p_hat(w|ws) equals the counted context probability, so the
quality of a trained model can be read off by comparing the two
distributions directly.  Two comparison styles live here:

* optimality_report: the full side-by-side table for one probe word
  (counted probability next to model probability, every vocabulary word).
* correlation: the scalar protocol for large vocabularies, a Pearson
  coefficient between the two probability samples over the N most
  frequent words.

optimal_E gives the attainable maximum of the average log probability,
which upper-bounds any embedding state (Gibbs' inequality) and turns the
training curve into a convergence gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cooccur import CooccurrenceTable, ground_truth_row
from .corpus import Vocabulary
from .embeddings import EmbeddingSet
from .errors import DegenerateCorrelationError, VocabularyMismatchError
from .softmax import softmax_row

# stock probe list for correlation runs: nouns, verbs, adjectives
DEFAULT_PROBE_WORDS = (
    "water", "man", "king", "car", "bird", "war",
    "run", "play", "eat", "drink", "fly", "draw",
    "smart", "pretty", "beautiful", "dark", "high", "low",
)


@dataclass
class OptimalityReport:
    """Side-by-side counted vs model probabilities for one probe word.

    rows hold (word, p_true, p_model) sorted by descending p_true, ties
    broken by descending p_model then the word string.  Context words
    (p_true > 0) therefore come first.
    """

    probe_word: str
    rows: list[tuple[str, float, float]]
    max_context_deviation: float
    max_noncontext_prob: float
    context_prob_mass: float
    total_variation: float


@dataclass
class CorrelationResult:
    probe_word: str
    n_compared: int
    corr: float
    mean_true: float
    mean_model: float
    # least-squares fit p_true ~ slope * p_model + intercept; reported
    # for inspection only, nothing downstream asserts their values
    slope: float
    intercept: float


def _probe_id(vocab: Vocabulary, probe_word: str) -> int:
    try:
        return vocab.id_of(probe_word)
    except KeyError:
        raise VocabularyMismatchError(
            f"probe word {probe_word!r} is not in the vocabulary"
        ) from None


def optimality_report(
    emb: EmbeddingSet,
    table: CooccurrenceTable,
    vocab: Vocabulary,
    probe_word: str,
    mode: str = "full_window",
) -> OptimalityReport:
    """Compare the model row against counted probabilities for one word."""
    ws = _probe_id(vocab, probe_word)
    p_true = ground_truth_row(table, ws, mode=mode)
    p_model = softmax_row(emb, ws)
    order = sorted(
        range(len(vocab)),
        key=lambda w: (-p_true[w], -p_model[w], vocab.words[w]),
    )
    rows = [(vocab.words[w], float(p_true[w]), float(p_model[w])) for w in order]
    context = p_true > 0
    max_dev = float(np.abs(p_model[context] - p_true[context]).max()) if context.any() else 0.0
    max_non = float(p_model[~context].max()) if (~context).any() else 0.0
    return OptimalityReport(
        probe_word=probe_word,
        rows=rows,
        max_context_deviation=max_dev,
        max_noncontext_prob=max_non,
        context_prob_mass=float(p_model[context].sum()),
        total_variation=0.5 * float(np.abs(p_model - p_true).sum()),
    )


def _pearson(x: np.ndarray, y: np.ndarray, label: str) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.sqrt(xc @ xc))
    sy = float(np.sqrt(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateCorrelationError(
            f"cannot correlate for {label!r}: a sample set has zero variance"
        )
    return float((xc @ yc) / (sx * sy))


def correlation(
    emb: EmbeddingSet,
    table: CooccurrenceTable,
    vocab: Vocabulary,
    probe_word: str,
    n: int | None = None,
    mode: str = "full_window",
) -> CorrelationResult:
    """Pearson correlation of counted vs model probabilities.

    The sample sets are p_true(w|probe) and p_model(w|probe) for the n
    most frequent words w, i.e. word ids 0..n-1 (ids are frequency-ranked).
    """
    ws = _probe_id(vocab, probe_word)
    if n is None:
        n = min(10_000, len(vocab))
    if not 1 <= n <= len(vocab):
        raise ValueError(f"n must be in 1..{len(vocab)}, got {n}")
    p_true = ground_truth_row(table, ws, mode=mode)[:n]
    p_model = softmax_row(emb, ws)[:n]
    corr = _pearson(p_model, p_true, probe_word)
    var_model = float(np.var(p_model))
    slope = float(np.cov(p_model, p_true, bias=True)[0, 1] / var_model)
    intercept = float(p_true.mean() - slope * p_model.mean())
    return CorrelationResult(
        probe_word=probe_word,
        n_compared=int(n),
        corr=corr,
        mean_true=float(p_true.mean()),
        mean_model=float(p_model.mean()),
        slope=slope,
        intercept=intercept,
    )


def optimal_E(table: CooccurrenceTable) -> float:
    """Attainable maximum of the average log probability on this table.

    Reached when every model row equals counts / slot_counts (the actual
    per-word slot totals, so the bound is exact even at corpus edges).
    Entries with zero count contribute zero.
    """
    coo = table.pair_counts.tocoo()
    counts = coo.data.astype(np.float64)
    slots = table.slot_counts[coo.row].astype(np.float64)
    return float((counts * (np.log(counts) - np.log(slots))).sum()
                 / table.total_tokens)


# ---------------------------------------------------------------------------
# artifact writers


def emit_report(obj, destination: str | Path) -> Path:
    """Serialize a report (or a batch of correlation results) as TSV.

    Floats are rounded to 4 decimals for eyeballing; use emit_profile for
    full-precision numbers.
    """
    destination = Path(destination)
    if isinstance(obj, OptimalityReport):
        lines = ["word\tp_true\tp_model"]
        lines += [f"{w}\t{pt:.4f}\t{pm:.4f}" for w, pt, pm in obj.rows]
    else:
        results = [obj] if isinstance(obj, CorrelationResult) else list(obj)
        lines = ["word\tcorr\tn\tslope\tintercept"]
        lines += [
            f"{r.probe_word}\t{r.corr:.4f}\t{r.n_compared}\t"
            f"{r.slope:.4f}\t{r.intercept:.4f}"
            for r in results
        ]
    destination.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return destination


def emit_profile(report: OptimalityReport, destination: str | Path) -> Path:
    """Two aligned full-precision CSV columns in report row order.

    Meant for external plotting of counted vs model probability profiles.
    """
    destination = Path(destination)
    lines = ["p_true,p_model"]
    lines += [f"{pt!r},{pm!r}" for _, pt, pm in report.rows]
    destination.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return destination
