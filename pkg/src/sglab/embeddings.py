"""Embedding storage and text-format persistence.

Every word gets two vectors: the input vector used when it is the center
word and the output vector used when it is a context word.  Mainstream
embedding tools throw the output vectors away after training; here they
are always persisted, because checking the trained conditional
probabilities against corpus statistics is impossible without them.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class EmbeddingSet:
    """Paired input/output vectors, one row per word id."""

    input_vectors: np.ndarray   # (W, dim) float64
    output_vectors: np.ndarray  # (W, dim) float64
    dim: int
    seed: int | None = None

    @property
    def num_words(self) -> int:
        return self.input_vectors.shape[0]

    def copy(self) -> "EmbeddingSet":
        return EmbeddingSet(
            input_vectors=self.input_vectors.copy(),
            output_vectors=self.output_vectors.copy(),
            dim=self.dim,
            seed=self.seed,
        )


def init_embeddings(num_words: int, dim: int, seed: int) -> EmbeddingSet:
    """Draw all entries i.i.d. normal with mean 0 and std 1/sqrt(dim).

    The scale keeps initial inner products O(1) regardless of dimension.
    Fully determined by the seed.
    """
    if num_words < 1 or dim < 1:
        raise ValueError("num_words and dim must both be >= 1")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(dim)
    return EmbeddingSet(
        input_vectors=rng.normal(0.0, scale, size=(num_words, dim)),
        output_vectors=rng.normal(0.0, scale, size=(num_words, dim)),
        dim=dim,
        seed=seed,
    )


def _write_vec(path: Path, words: list[str], matrix: np.ndarray) -> None:
    num_words, dim = matrix.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{num_words} {dim}\n")
        for word, row in zip(words, matrix):
            values = " ".join(f"{v:.17g}" for v in row)
            fh.write(f"{word} {values}\n")


def save_embeddings(emb: EmbeddingSet, words: list[str], basepath: str | Path) -> tuple[Path, Path]:
    """Write `<base>.in.vec` and `<base>.out.vec`, both with a `W dim` header.

    Returns the two paths.  Full float precision is used so a save/load
    round trip is exact.
    """
    base = Path(basepath)
    in_path = base.with_name(base.name + ".in.vec")
    out_path = base.with_name(base.name + ".out.vec")
    _write_vec(in_path, words, emb.input_vectors)
    _write_vec(out_path, words, emb.output_vectors)
    return in_path, out_path


def _read_vec(path: Path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        num_words, dim = int(header[0]), int(header[1])
        words: list[str] = []
        matrix = np.empty((num_words, dim), dtype=np.float64)
        for i in range(num_words):
            parts = fh.readline().rstrip("\n").split(" ")
            words.append(parts[0])
            matrix[i] = [float(v) for v in parts[1:]]
    return words, matrix


def load_embeddings(basepath: str | Path) -> tuple[list[str], EmbeddingSet]:
    """Read the `.in.vec`/`.out.vec` pair written by save_embeddings."""
    base = Path(basepath)
    in_path = base.with_name(base.name + ".in.vec")
    out_path = base.with_name(base.name + ".out.vec")
    if not in_path.exists():
        raise FileNotFoundError(str(in_path))
    if not out_path.exists():
        raise FileNotFoundError(
            f"{out_path} not found: output (context) vectors are required to "
            "evaluate the model's conditional probabilities, but most "
            "embedding tools discard them; retrain with this package or "
            "provide the file")
    words, vin = _read_vec(in_path)
    words_out, vout = _read_vec(out_path)
    if words != words_out:
        raise ValueError("input/output vector files list different words")
    if vin.shape != vout.shape:
        raise ValueError("input/output vector files have different shapes")
    return words, EmbeddingSet(
        input_vectors=vin, output_vectors=vout, dim=vin.shape[1])
