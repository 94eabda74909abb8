"""Co-occurrence counting over radius-c center-removed windows.

For every corpus position t and every offset j with -c <= j <= c, j != 0,
the (center, context) pair (w_t, w_{t+j}) is counted once.  Windows are
truncated at the corpus edges: out-of-range offsets are skipped, so words
near the boundary contribute fewer context slots.  The optional circular
mode wraps offsets around instead, which makes every center own exactly
2c slots; tests use it when truncation effects must vanish.

Two denominator conventions coexist for the corpus conditional probability
of w given a center word:

* full_window mode (default): count / (2c * center occurrences), i.e.
  every occurrence is charged the full 2c-slot window whether or not the
  window was truncated.  Near boundaries the probabilities of a center
  word then sum to less than 1.
* actual mode: count / (valid slots the center really had), which always
  sums to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import Vocabulary
from .errors import UndefinedProbabilityError


@dataclass
class CooccurrenceTable:
    """Sparse pair counts plus the per-word totals needed for probabilities.

    pair_counts[ws, w] is the number of times word w appeared in the
    radius-`radius` center-removed window of word ws, counted with overlap.
    center_counts[ws] is the corpus occurrence count of ws and
    slot_counts[ws] the number of valid context slots its windows had
    (equal to 2c * center_counts[ws] unless truncated at a boundary).
    """

    pair_counts: sp.csr_matrix  # (W, W) int64
    center_counts: np.ndarray   # (W,) int64
    slot_counts: np.ndarray     # (W,) int64, row sums of pair_counts
    radius: int
    total_tokens: int

    @property
    def num_words(self) -> int:
        return self.pair_counts.shape[0]

    def count(self, center: int, context: int) -> int:
        return int(self.pair_counts[center, context])

    def context_row(self, center: int) -> np.ndarray:
        """Dense count vector n_{center, .} of length W."""
        return np.asarray(self.pair_counts.getrow(center).todense()).ravel()


def _pair_arrays(ids: np.ndarray, radius: int, circular: bool):
    """Yield (centers, contexts) id arrays, one pair of arrays per offset."""
    num = ids.size
    for j in range(1, radius + 1):
        if circular:
            shifted = np.roll(ids, -j)
            yield ids, shifted           # context at t + j (mod T)
            yield shifted, ids           # context at t - j (mod T)
        else:
            if j >= num:
                continue
            yield ids[:-j], ids[j:]      # center t, context t + j
            yield ids[j:], ids[:-j]      # center t, context t - j


def count_cooccurrences(
    ids: np.ndarray,
    radius: int,
    num_words: int | None = None,
    circular: bool = False,
) -> CooccurrenceTable:
    """Count all (center, context) window slots of a token-id sequence."""
    ids = np.asarray(ids)
    if radius < 1:
        raise ValueError(f"window radius must be >= 1, got {radius}")
    if ids.size == 0:
        raise ValueError("cannot count co-occurrences of an empty corpus")
    if num_words is None:
        num_words = int(ids.max()) + 1

    rows = []
    cols = []
    for centers, contexts in _pair_arrays(ids, radius, circular):
        rows.append(centers)
        cols.append(contexts)
    if rows:
        row = np.concatenate(rows)
        col = np.concatenate(cols)
        data = np.ones(row.size, dtype=np.int64)
        mat = sp.coo_matrix((data, (row, col)), shape=(num_words, num_words)).tocsr()
    else:
        mat = sp.csr_matrix((num_words, num_words), dtype=np.int64)

    center_counts = np.bincount(ids, minlength=num_words).astype(np.int64)
    slot_counts = np.asarray(mat.sum(axis=1)).ravel().astype(np.int64)
    return CooccurrenceTable(
        pair_counts=mat,
        center_counts=center_counts,
        slot_counts=slot_counts,
        radius=radius,
        total_tokens=int(ids.size),
    )


def count_cooccurrences_sharded(
    ids: np.ndarray,
    radius: int,
    num_words: int | None = None,
    n_shards: int = 2,
) -> CooccurrenceTable:
    """Count on contiguous corpus shards and merge.

    Each shard owns a range of center positions and counts only windows
    centered there, reading context tokens from an overlap of `radius`
    tokens on both sides; attributing every slot to its center position
    deduplicates the shard boundaries exactly.  Merging is integer
    addition, so the result equals single-pass counting.
    """
    ids = np.asarray(ids)
    if radius < 1:
        raise ValueError(f"window radius must be >= 1, got {radius}")
    if ids.size == 0:
        raise ValueError("cannot count co-occurrences of an empty corpus")
    if num_words is None:
        num_words = int(ids.max()) + 1
    total = ids.size
    bounds = np.linspace(0, total, n_shards + 1).astype(int)

    mat = sp.csr_matrix((num_words, num_words), dtype=np.int64)
    for s in range(n_shards):
        lo, hi = int(bounds[s]), int(bounds[s + 1])
        if lo == hi:
            continue
        chunk_lo = max(0, lo - radius)
        chunk_hi = min(total, hi + radius)
        chunk = ids[chunk_lo:chunk_hi]
        c_lo, c_hi = lo - chunk_lo, hi - chunk_lo  # owned centers, chunk coords
        rows = []
        cols = []
        for j in list(range(-radius, 0)) + list(range(1, radius + 1)):
            start = max(c_lo, -j)
            stop = min(c_hi, chunk.size - j)
            if start >= stop:
                continue
            centers = chunk[start:stop]
            contexts = chunk[start + j:stop + j]
            rows.append(centers)
            cols.append(contexts)
        if not rows:
            continue
        row = np.concatenate(rows)
        col = np.concatenate(cols)
        data = np.ones(row.size, dtype=np.int64)
        mat = mat + sp.coo_matrix((data, (row, col)), shape=(num_words, num_words)).tocsr()

    center_counts = np.bincount(ids, minlength=num_words).astype(np.int64)
    slot_counts = np.asarray(mat.sum(axis=1)).ravel().astype(np.int64)
    return CooccurrenceTable(
        pair_counts=mat.tocsr(),
        center_counts=center_counts,
        slot_counts=slot_counts,
        radius=radius,
        total_tokens=int(ids.size),
    )


def ground_truth_prob(
    table: CooccurrenceTable, center: int, context: int, mode: str = "full_window"
) -> float:
    """Corpus probability of `context` appearing in the window of `center`.

    full_window mode divides by 2c * n_center; actual mode divides by the
    number of valid slots, so the row sums to 1.
    """
    denom = _denominator(table, center, mode)
    return table.count(center, context) / denom


def ground_truth_row(
    table: CooccurrenceTable, center: int, mode: str = "full_window"
) -> np.ndarray:
    """Vector of ground-truth probabilities over all context words."""
    denom = _denominator(table, center, mode)
    return table.context_row(center) / denom


def _denominator(table: CooccurrenceTable, center: int, mode: str) -> float:
    n_center = int(table.center_counts[center])
    if n_center == 0:
        raise UndefinedProbabilityError(
            f"word id {center} never occurs in the corpus")
    if mode == "full_window":
        return 2.0 * table.radius * n_center
    if mode == "actual":
        slots = int(table.slot_counts[center])
        if slots == 0:
            raise UndefinedProbabilityError(
                f"word id {center} has no valid context slots")
        return float(slots)
    raise ValueError(f"unknown probability mode: {mode!r}")


def unigram_prob(table: CooccurrenceTable, word: int) -> float:
    """Corpus occurrence probability n_w / T."""
    return int(table.center_counts[word]) / table.total_tokens


def save_cooccur_tsv(
    table: CooccurrenceTable, vocab: Vocabulary, path: str | Path
) -> None:
    """Write `center<TAB>context<TAB>count` rows under a radius/T header."""
    coo = table.pair_counts.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# radius={table.radius} total_tokens={table.total_tokens}\n")
        for k in order:
            fh.write(f"{vocab.words[coo.row[k]]}\t{vocab.words[coo.col[k]]}\t{coo.data[k]}\n")


def load_cooccur_tsv(path: str | Path, vocab: Vocabulary) -> CooccurrenceTable:
    """Rebuild a table from its TSV form, using the vocabulary for ids."""
    rows: list[int] = []
    cols: list[int] = []
    data: list[int] = []
    radius = None
    total_tokens = None
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ValueError(f"missing co-occurrence header line in {path}")
        for part in header.lstrip("# ").split():
            key, value = part.split("=")
            if key == "radius":
                radius = int(value)
            elif key == "total_tokens":
                total_tokens = int(value)
        if radius is None or total_tokens is None:
            raise ValueError(f"incomplete co-occurrence header in {path}")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            center, context, count = line.split("\t")
            rows.append(vocab.index[center])
            cols.append(vocab.index[context])
            data.append(int(count))
    num_words = len(vocab)
    mat = sp.coo_matrix(
        (np.array(data, dtype=np.int64), (rows, cols)),
        shape=(num_words, num_words),
    ).tocsr()
    slot_counts = np.asarray(mat.sum(axis=1)).ravel().astype(np.int64)
    return CooccurrenceTable(
        pair_counts=mat,
        center_counts=vocab.counts.copy(),
        slot_counts=slot_counts,
        radius=radius,
        total_tokens=total_tokens,
    )
