"""Tokenizer and vocabulary behavior."""

import pytest
from hypothesis import given, strategies as st

from sglab.corpus import (
    Vocabulary,
    build_vocab,
    decode,
    encode,
    tokenize,
    tokenize_file,
)


def test_tokenize_lowercases_and_splits_on_nonletters():
    assert tokenize("Hello, world! don't stop") == ["hello", "world", "don", "t", "stop"]


def test_tokenize_drops_digits_and_punctuation():
    assert tokenize("123 !!! \n\t") == []
    assert tokenize("a1b2c") == ["a", "b", "c"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_song_token_counts(song_tokens):
    assert len(song_tokens) == 36
    assert song_tokens[0] == "every"
    assert song_tokens.count("every") == 3
    assert song_tokens.count("star") == 3
    assert song_tokens.count("a") == 4


def test_song_vocabulary_size(song_vocab):
    assert len(song_vocab) == 26
    assert song_vocab.total_tokens == 36
    # most frequent word first
    assert song_vocab.words[0] == "a"
    assert song_vocab.counts[0] == 4


def test_build_vocab_orders_by_count_then_first_seen():
    vocab = build_vocab("b c c a b a d a".split())
    assert vocab.words == ["a", "b", "c", "d"]
    assert vocab.counts.tolist() == [3, 2, 2, 1]
    assert vocab.total_tokens == 8


def test_build_vocab_tie_break_is_first_appearance():
    vocab = build_vocab("z y z y x x".split())
    assert vocab.words == ["z", "y", "x"]


def test_min_count_filters_rare_words():
    vocab = build_vocab("a a a b b c".split(), min_count=2)
    assert vocab.words == ["a", "b"]
    assert vocab.total_tokens == 5


def test_encode_drops_out_of_vocabulary_tokens():
    vocab = build_vocab("a b a c a".split(), min_count=3)
    ids = encode("a b a c a".split(), vocab)
    assert ids.tolist() == [0, 0, 0]
    assert decode(ids, vocab) == ["a", "a", "a"]


def test_id_of_unknown_word_raises(song_vocab):
    with pytest.raises(KeyError):
        song_vocab.id_of("zebra")


def test_vocab_tsv_roundtrip(tmp_path, song_vocab):
    path = tmp_path / "vocab.tsv"
    song_vocab.save_tsv(path)
    loaded = Vocabulary.load_tsv(path)
    assert loaded.words == song_vocab.words
    assert loaded.counts.tolist() == song_vocab.counts.tolist()
    assert loaded.total_tokens == song_vocab.total_tokens


def test_tokenize_file_honors_max_bytes(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("aaa bbb ccc ddd", encoding="utf-8")
    assert tokenize_file(path) == ["aaa", "bbb", "ccc", "ddd"]
    assert tokenize_file(path, max_bytes=7) == ["aaa", "bbb"]
    assert tokenize_file(path, max_bytes=0) == []


def test_max_bytes_cut_inside_a_multibyte_character(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_bytes("héllo world".encode("utf-8"))  # é is two bytes
    # slicing after the first byte of é drops the fragment, keeps "h"
    assert tokenize_file(path, max_bytes=2) == ["h"]


@given(st.text(alphabet=st.characters(max_codepoint=0x2FF), max_size=200))
def test_tokenize_yields_lowercase_ascii_runs(text):
    for token in tokenize(text):
        assert token
        assert all("a" <= ch <= "z" for ch in token)


@given(st.lists(st.sampled_from(["a", "b", "c", "dd"]), max_size=60))
def test_encode_roundtrip_when_nothing_filtered(tokens):
    if not tokens:
        return
    vocab = build_vocab(tokens)
    assert decode(encode(tokens, vocab), vocab) == tokens
