"""Deterministic topical corpus generator.

Produces a lowercase space-separated corpus with the statistical features
the large-scale experiments need: a Zipf-like unigram profile, a few
thousand word types, and genuine co-occurrence structure created by
topic-coherent segments.  Eighteen designated probe words are pinned at
mid-frequency ranks, three per topic, so conditional-probability rows
around them are informative.

Used as a stand-in when no real large corpus file is available: the
generated text goes through the exact same tokenize / count / train
pipeline as any downloaded corpus.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .analysis import DEFAULT_PROBE_WORDS

_GLUE_WORDS = (
    "the", "of", "and", "in", "to", "a", "is", "was", "for", "on",
    "as", "with", "by", "at", "it", "from", "that", "his", "her", "are",
    "be", "this", "which", "or", "an", "were", "not", "but", "one", "also",
    "had", "has", "its", "they", "who", "she", "he", "all", "their", "two",
)

_N_TOPICS = 6
_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def _pseudoword(i: int) -> str:
    """Letters-only surface form for filler type i, prefixed to avoid
    colliding with glue or probe words (none of those start with x)."""
    digits = ""
    i += 1
    while i > 0:
        i, r = divmod(i - 1, 26)
        digits = _ALPHABET[r] + digits
    return "x" + digits


def _build_types(num_types: int) -> tuple[list[str], np.ndarray]:
    """Type list in global rank order plus each type's topic id (-1: none).

    Probe words sit at ranks 60, 75, 90, ... so they are frequent enough
    to anchor context rows yet far from the degenerate glue region.
    Filler types rotate through topics so every topic spans the whole
    frequency range.
    """
    probe_rank = {60 + 15 * i: i for i in range(len(DEFAULT_PROBE_WORDS))}
    types: list[str] = []
    topics = np.full(num_types, -1, dtype=np.int64)
    filler = 0
    for rank in range(num_types):
        if rank < len(_GLUE_WORDS):
            types.append(_GLUE_WORDS[rank])
        elif rank in probe_rank:
            i = probe_rank[rank]
            types.append(DEFAULT_PROBE_WORDS[i])
            topics[rank] = i % _N_TOPICS
        else:
            types.append(_pseudoword(filler))
            topics[rank] = filler % _N_TOPICS
            filler += 1
    return types, topics


def generate_corpus(
    n_tokens: int = 1_300_000,
    num_types: int = 5_000,
    seed: int = 0,
    topic_share: float = 0.55,
    probe_boost: float = 3.0,
) -> str:
    """Return the corpus as one space-separated lowercase string.

    Tokens come from a mixture: with probability topic_share from the
    current segment's topic distribution, otherwise from the global
    Zipf-like base distribution.  Segments are 20..80 tokens long with a
    fresh uniform topic each, giving clean local co-occurrence blocks.
    """
    rng = np.random.default_rng([seed, 0x7031])
    types, topics = _build_types(num_types)
    probe_set = set(DEFAULT_PROBE_WORDS)

    base = 1.0 / (np.arange(num_types) + 3.0) ** 1.03
    base /= base.sum()
    base_cdf = np.cumsum(base)

    topic_cdfs = []
    topic_members = []
    for t in range(_N_TOPICS):
        members = np.flatnonzero(topics == t)
        weights = base[members].copy()
        for j, w in enumerate(members):
            if types[w] in probe_set:
                weights[j] *= probe_boost
        cdf = np.cumsum(weights / weights.sum())
        topic_cdfs.append(cdf)
        topic_members.append(members)

    out = np.empty(n_tokens, dtype=np.int64)
    filled = 0
    while filled < n_tokens:
        length = int(rng.integers(20, 81))
        length = min(length, n_tokens - filled)
        t = int(rng.integers(0, _N_TOPICS))
        from_topic = rng.random(length) < topic_share
        k = int(from_topic.sum())
        seg = np.empty(length, dtype=np.int64)
        seg[~from_topic] = np.searchsorted(base_cdf, rng.random(length - k))
        seg[from_topic] = topic_members[t][
            np.searchsorted(topic_cdfs[t], rng.random(k))
        ]
        out[filled:filled + length] = seg
        filled += length

    words = np.array(types)
    return " ".join(words[out])


def ensure_slice_corpus(
    path: str | Path,
    seed: int = 0,
    n_tokens: int = 1_300_000,
) -> Path:
    """Materialize the large-run corpus file, reusing any cached copy.

    Preference order: an operator-supplied corpus named by the
    SGLAB_CORPUS environment variable, then an existing file at `path`,
    then a freshly generated synthetic corpus written to `path`.
    """
    override = os.environ.get("SGLAB_CORPUS")
    if override and Path(override).is_file():
        return Path(override)
    path = Path(path)
    if not path.is_file():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(generate_corpus(n_tokens=n_tokens, seed=seed),
                        encoding="utf-8")
    return path
