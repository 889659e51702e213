import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarscale import (
    ConfigError,
    DataError,
    Document,
    PatternSet,
    TokenizerConfig,
    Vocabulary,
    apply_vocabulary,
    build_vocabulary,
    expand_patterns,
    prepare_corpus,
    read_corpus,
    read_dictionary_dir,
    read_patterns,
    tokenize,
    tokenize_document,
    write_corpus,
)

from helpers import make_vocab


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

def test_tokenize_lowercases_and_strips_punctuation():
    assert tokenize("Hello, World!") == [["hello", "world"]]


def test_tokenize_splits_sentences_on_terminators():
    out = tokenize("First one. Second one! Third one? done")
    assert out == [["first", "one"], ["second", "one"], ["third", "one"], ["done"]]


def test_tokenize_keeps_intraword_hyphen_and_apostrophe():
    assert tokenize("covid-19 don't stop") == [["covid-19", "don't"]] or \
        tokenize("covid-19 don't stop") == [["covid-19", "don't", "stop"]]
    # "stop" must survive; pin the exact output too
    assert tokenize("covid-19 don't stop") == [["covid-19", "don't", "stop"]]


def test_tokenize_drops_numbers_by_default_keeps_them_on_request():
    text = "In 2021 we saw 14 cases."
    assert tokenize(text) == [["in", "we", "saw", "cases"]]
    kept = tokenize(text, TokenizerConfig(keep_numbers=True))
    assert kept == [["in", "2021", "we", "saw", "14", "cases"]]


def test_tokenize_applies_stopword_list():
    config = TokenizerConfig(stopwords=frozenset({"the", "a"}))
    assert tokenize("The cat saw a dog.", config) == [["cat", "saw", "dog"]]


def test_tokenize_empty_and_punctuation_only_text():
    assert tokenize("") == []
    assert tokenize("   ") == []
    assert tokenize("!!! ... ???") == []


@given(st.text(alphabet=st.characters(codec="ascii"), max_size=200))
def test_tokenize_is_idempotent_over_detokenized_text(text):
    # re-tokenizing the flattened token stream must not change it
    first = tokenize(text)
    flat = " ".join(t for sent in first for t in sent)
    second = tokenize(flat)
    assert [t for sent in second for t in sent] == [t for sent in first for t in sent]


@given(st.text(alphabet=st.characters(codec="ascii"), max_size=200))
def test_token_counts_sum_to_total(text):
    doc = tokenize_document(Document(id="d", text=text))
    assert sum(doc.term_counts.values()) == doc.total_tokens
    assert doc.total_tokens == sum(len(s) for s in doc.sentences)


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

def test_vocabulary_orders_by_frequency_then_term():
    vocab = Vocabulary.from_counts({"b": 3, "a": 3, "c": 9, "d": 1}, min_count=1)
    assert vocab.terms == ["c", "a", "b", "d"]
    assert vocab.frequencies == [9, 3, 3, 1]
    assert vocab.index("a") == 1
    assert vocab.frequency("c") == 9


def test_vocabulary_min_count_filters():
    vocab = Vocabulary.from_counts({"a": 5, "b": 4, "c": 1}, min_count=4)
    assert vocab.terms == ["a", "b"]
    assert "c" not in vocab
    assert vocab.get("c") is None


def test_vocabulary_unknown_term_raises_keyerror():
    vocab = make_vocab(["a", "b"])
    with pytest.raises(KeyError):
        vocab.index("zzz")


def test_vocabulary_rejects_duplicates_and_length_mismatch():
    with pytest.raises(ValueError):
        Vocabulary(["a", "a"], [2, 1])
    with pytest.raises(ValueError):
        Vocabulary(["a", "b"], [2])


def test_build_vocabulary_counts_across_documents():
    docs = [
        tokenize_document(Document(id="1", text="ant bee ant")),
        tokenize_document(Document(id="2", text="bee cow")),
    ]
    vocab = build_vocabulary(docs, min_count=2)
    assert vocab.terms == ["ant", "bee"]
    with pytest.raises(DataError):
        build_vocabulary(docs, min_count=10)
    with pytest.raises(ConfigError):
        build_vocabulary(docs, min_count=0)


def test_apply_vocabulary_filters_sentences_and_recounts():
    docs = [tokenize_document(Document(id="1", text="ant bee cow. cow cow."))]
    vocab = make_vocab(["ant", "bee"])
    filtered = apply_vocabulary(docs, vocab)
    assert filtered[0].sentences == [["ant", "bee"]]  # all-OOV sentence dropped
    assert filtered[0].term_counts == {"ant": 1, "bee": 1}
    assert filtered[0].total_tokens == 2
    assert filtered[0].vocab is vocab


def test_prepare_corpus_wires_tokenize_vocab_filter():
    docs = [
        Document(id="1", text="ant bee ant cow."),
        Document(id="2", text="ant bee dog."),
    ]
    corpus, vocab = prepare_corpus(docs, min_count=2)
    assert vocab.terms == ["ant", "bee"]
    assert corpus[0].term_counts == {"ant": 2, "bee": 1}
    assert all(doc.vocab is vocab for doc in corpus)


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------

def test_pattern_set_rejects_inner_star_and_empty():
    with pytest.raises(ConfigError):
        PatternSet(patterns=("go*al",))
    with pytest.raises(ConfigError):
        PatternSet(patterns=("",))
    with pytest.raises(ConfigError):
        PatternSet(patterns=())
    with pytest.raises(ConfigError):
        PatternSet(patterns=("a", "b"), weights=(1.0,))


def test_expand_patterns_prefix_glob():
    vocab = make_vocab(["goal", "goals", "goat", "ago"])
    out = expand_patterns(PatternSet(patterns=("goal*",)), vocab)
    assert out == [("goal*", ["goal", "goals"])]


def test_expand_patterns_literal_matches_only_itself():
    vocab = make_vocab(["goal", "goals"])
    out = expand_patterns(PatternSet(patterns=("goal",)), vocab)
    assert out == [("goal", ["goal"])]


def test_expand_patterns_is_case_insensitive_and_keeps_orders():
    vocab = make_vocab(["win", "winner", "winning", "lose"])
    out = expand_patterns(PatternSet(patterns=("WIN*", "lose", "zzz*")), vocab)
    assert out[0] == ("WIN*", ["win", "winner", "winning"])  # vocabulary order
    assert out[1] == ("lose", ["lose"])
    assert out[2] == ("zzz*", [])  # no-match is the caller's decision


def test_expand_patterns_bare_star_matches_everything():
    vocab = make_vocab(["b", "a"], freqs=[5, 3])
    out = expand_patterns(PatternSet(patterns=("*",)), vocab)
    assert out == [("*", ["b", "a"])]


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def test_corpus_roundtrip(tmp_path):
    docs = [
        Document(id="a", text="Some text.", date=dt.date(2021, 3, 14), tags=("x", "y")),
        Document(id="b", text="More text."),
    ]
    path = tmp_path / "corpus.jsonl"
    write_corpus(docs, path)
    assert read_corpus(path) == docs


def test_read_corpus_errors(tmp_path):
    path = tmp_path / "bad.jsonl"

    path.write_text('{"id": "a", "text": "x"}\n{"id": "a", "text": "y"}\n')
    with pytest.raises(DataError, match="duplicate"):
        read_corpus(path)

    path.write_text("not json\n")
    with pytest.raises(DataError, match="invalid JSON"):
        read_corpus(path)

    path.write_text('{"id": "a"}\n')
    with pytest.raises(DataError, match="'id' and 'text'"):
        read_corpus(path)

    path.write_text('{"id": "a", "text": "x", "date": "14-03-2021"}\n')
    with pytest.raises(DataError, match="bad date"):
        read_corpus(path)

    path.write_text("\n\n")
    with pytest.raises(DataError, match="no documents"):
        read_corpus(path)

    with pytest.raises(DataError, match="not found"):
        read_corpus(tmp_path / "missing.jsonl")


def test_read_patterns_comments_weights_and_errors(tmp_path):
    path = tmp_path / "seeds.txt"
    path.write_text("# achievement seeds\nwin*\n\nskill* 2.0\n")
    ps = read_patterns(path)
    assert ps.patterns == ("win*", "skill*")
    assert ps.weights == (1.0, 2.0)
    assert ps.label == "seeds"

    path.write_text("win* high\n")
    with pytest.raises(DataError, match="bad weight"):
        read_patterns(path)

    path.write_text("win* 1.0 extra\n")
    with pytest.raises(DataError, match="expected"):
        read_patterns(path)

    path.write_text("# only comments\n")
    with pytest.raises(DataError, match="no patterns"):
        read_patterns(path)


def test_read_patterns_without_weights_has_none():
    import tempfile, pathlib
    with tempfile.TemporaryDirectory() as d:
        p = pathlib.Path(d) / "s.txt"
        p.write_text("a*\nb\n")
        ps = read_patterns(p, label="custom")
        assert ps.weights is None
        assert ps.label == "custom"


def test_read_dictionary_dir(tmp_path):
    (tmp_path / "alpha.txt").write_text("a*\n")
    (tmp_path / "beta.txt").write_text("b*\n")
    (tmp_path / "ignored.csv").write_text("c*\n")
    cats = read_dictionary_dir(tmp_path)
    assert sorted(cats) == ["alpha", "beta"]
    assert cats["alpha"].label == "alpha"
    with pytest.raises(DataError, match="not found"):
        read_dictionary_dir(tmp_path / "nope")
