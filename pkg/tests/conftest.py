"""Shared fixtures built around the toy song corpus in data/."""

from pathlib import Path

import numpy as np
import pytest

from sglab.cooccur import count_cooccurrences
from sglab.corpus import build_vocab, encode, tokenize

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
SONG_PATH = DATA_DIR / "little_star.txt"


@pytest.fixture(scope="session")
def song_text() -> str:
    return SONG_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def song_tokens(song_text):
    return tokenize(song_text)


@pytest.fixture(scope="session")
def song_vocab(song_tokens):
    return build_vocab(song_tokens)


@pytest.fixture(scope="session")
def song_ids(song_tokens, song_vocab):
    return encode(song_tokens, song_vocab)


@pytest.fixture(scope="session")
def song_table(song_ids, song_vocab):
    return count_cooccurrences(song_ids, 2, num_words=len(song_vocab))


def random_corpus(rng: np.random.Generator, max_tokens: int, max_words: int) -> np.ndarray:
    """A random id sequence guaranteed to be non-empty."""
    n = int(rng.integers(1, max_tokens + 1))
    w = int(rng.integers(1, max_words + 1))
    return rng.integers(0, w, size=n).astype(np.int64)
