"""Corpus handling: tokenization, frequency-ordered vocabulary, id encoding.

The tokenizer lowercases and treats every non-alphabetic character as a
separator, so digits and punctuation never end up inside a token.  The
vocabulary orders words by descending count, breaking ties by first
appearance in the corpus, which makes the word-id assignment deterministic
across runs and platforms.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_TOKEN_RE = re.compile(r"[a-z]+")


def tokenize(text: str) -> list[str]:
    """Split text into lowercase alphabetic tokens.

    Punctuation, digits and any other non-alphabetic characters act as
    separators.  An empty input yields an empty list.
    """
    return _TOKEN_RE.findall(text.lower())


def tokenize_file(path: str | Path, max_bytes: int | None = None) -> list[str]:
    """Tokenize a UTF-8 text file, optionally only its first `max_bytes` bytes.

    Raises UnicodeDecodeError for malformed input.  When slicing, a partial
    multi-byte character at the cut point is dropped rather than rejected.
    """
    data = Path(path).read_bytes()
    if max_bytes is not None:
        data = data[:max_bytes]
        text = data.decode("utf-8", errors="ignore")
    else:
        text = data.decode("utf-8")
    return tokenize(text)


@dataclass
class Vocabulary:
    """Word <-> id mapping ordered by descending corpus frequency.

    words[i] is the surface string of word id i, counts[i] its occurrence
    count, and total_tokens the number of corpus tokens retained after
    min-count filtering (= sum of counts).
    """

    words: list[str]
    counts: np.ndarray  # int64, non-increasing
    total_tokens: int
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        self.index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def id_of(self, word: str) -> int:
        return self.index[word]

    def save_tsv(self, path: str | Path) -> None:
        """Write one `word<TAB>count` line per word, in id order."""
        with open(path, "w", encoding="utf-8") as fh:
            for word, count in zip(self.words, self.counts):
                fh.write(f"{word}\t{int(count)}\n")

    @classmethod
    def load_tsv(cls, path: str | Path) -> "Vocabulary":
        words: list[str] = []
        counts: list[int] = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                word, count = line.split("\t")
                words.append(word)
                counts.append(int(count))
        return cls(words=words, counts=np.array(counts, dtype=np.int64),
                   total_tokens=int(sum(counts)))


def build_vocab(tokens: list[str], min_count: int = 1) -> Vocabulary:
    """Build a frequency-ordered vocabulary from a token list.

    Keeps exactly the distinct tokens occurring at least `min_count` times,
    ordered by descending count then first appearance.  total_tokens counts
    only the retained tokens.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts = Counter(tokens)
    first_seen: dict[str, int] = {}
    for pos, tok in enumerate(tokens):
        if tok not in first_seen:
            first_seen[tok] = pos
    kept = [w for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda w: (-counts[w], first_seen[w]))
    kept_counts = np.array([counts[w] for w in kept], dtype=np.int64)
    return Vocabulary(words=kept, counts=kept_counts,
                      total_tokens=int(kept_counts.sum()))


def encode(tokens: list[str], vocab: Vocabulary) -> np.ndarray:
    """Map tokens to word ids, silently dropping out-of-vocabulary tokens."""
    index = vocab.index
    return np.array([index[t] for t in tokens if t in index], dtype=np.int32)


def decode(ids: np.ndarray, vocab: Vocabulary) -> list[str]:
    """Map word ids back to surface strings."""
    return [vocab.words[i] for i in ids]
