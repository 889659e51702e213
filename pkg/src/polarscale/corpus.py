"""Corpus ingestion: tokenization, vocabularies, and glob-pattern expansion.

Documents come in as raw text (usually from a JSON-lines file), get split
into lowercased sentence token lists, and are then counted against a
frequency-filtered vocabulary. Seed and dictionary files hold one pattern
per line, where a trailing ``*`` makes the pattern a prefix glob.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, DataError

# A token is a run of letters/digits (underscore excluded), optionally joined
# by single interior hyphens or apostrophes: "covid-19", "it's".
_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*", re.UNICODE)
_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")

DEFAULT_MIN_COUNT = 5


@dataclass(frozen=True)
class TokenizerConfig:
    """Settings for :func:`tokenize`.

    keep_numbers: keep tokens that contain no letters (dropped by default).
    stopwords: optional set of lowercase tokens to remove.
    """

    keep_numbers: bool = False
    stopwords: frozenset[str] | None = None


DEFAULT_TOKENIZER = TokenizerConfig()


@dataclass(frozen=True)
class Document:
    """One raw input document."""

    id: str
    text: str
    date: _dt.date | None = None
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise DataError("document id must be nonempty")


@dataclass
class TokenizedDocument:
    """A document after tokenization (and, later, vocabulary filtering).

    ``term_counts`` and ``total_tokens`` reflect only in-vocabulary terms once
    :func:`apply_vocabulary` has run (which also sets ``vocab``); before that
    they count every token.
    """

    id: str
    sentences: list[list[str]]
    term_counts: dict[str, int]
    total_tokens: int
    date: _dt.date | None = None
    tags: tuple[str, ...] = ()
    vocab: "Vocabulary | None" = None


class Vocabulary:
    """Ordered term list with corpus frequencies.

    Terms are ordered by descending corpus frequency, ties broken
    lexicographically, so the term <-> index mapping is deterministic.
    """

    def __init__(self, terms: Sequence[str], frequencies: Sequence[int], min_count: int = 1):
        if len(terms) != len(frequencies):
            raise ValueError("terms and frequencies must have equal length")
        self.terms: list[str] = list(terms)
        self.frequencies: list[int] = [int(f) for f in frequencies]
        self.min_count = int(min_count)
        self._index: dict[str, int] = {t: i for i, t in enumerate(self.terms)}
        if len(self._index) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int], min_count: int) -> "Vocabulary":
        kept = [(t, c) for t, c in counts.items() if c >= min_count]
        kept.sort(key=lambda tc: (-tc[1], tc[0]))
        return cls([t for t, _ in kept], [c for _, c in kept], min_count)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.terms == other.terms
            and self.frequencies == other.frequencies
        )

    def index(self, term: str) -> int:
        return self._index[term]

    def get(self, term: str, default: int | None = None) -> int | None:
        return self._index.get(term, default)

    def frequency(self, term: str) -> int:
        return self.frequencies[self._index[term]]


@dataclass(frozen=True)
class PatternSet:
    """Seed or dictionary patterns: literal terms or prefix globs.

    A ``*`` is permitted only as the final character of a pattern. Patterns
    may carry an explicit polarity weight; ``weights`` is None when none were
    given.
    """

    patterns: tuple[str, ...]
    weights: tuple[float, ...] | None = None
    label: str = ""

    def __post_init__(self):
        if not self.patterns:
            raise ConfigError("pattern set is empty")
        for p in self.patterns:
            if not p:
                raise ConfigError("empty pattern")
            if "*" in p[:-1]:
                raise ConfigError(f"'*' only allowed as final character: {p!r}")
        if self.weights is not None and len(self.weights) != len(self.patterns):
            raise ConfigError("weights must match patterns one-to-one")

    def __len__(self) -> int:
        return len(self.patterns)


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[list[str]]:
    """Split raw text into sentences of lowercased tokens.

    Sentence boundaries are ``.``, ``!`` or ``?`` followed by whitespace.
    Tokens are split on whitespace and punctuation, keeping intra-word
    hyphens and apostrophes ("covid-19", "don't"). Pure-punctuation tokens
    never survive; tokens without any letter are dropped unless
    ``keep_numbers`` is set.
    """
    if not text or not text.strip():
        return []
    text = text.replace("’", "'").lower()
    sentences = []
    for raw_sentence in _SENTENCE_RE.split(text):
        tokens = _TOKEN_RE.findall(raw_sentence)
        if not config.keep_numbers:
            tokens = [t for t in tokens if any(ch.isalpha() for ch in t)]
        if config.stopwords:
            tokens = [t for t in tokens if t not in config.stopwords]
        if tokens:
            sentences.append(tokens)
    return sentences


def tokenize_document(doc: Document, config: TokenizerConfig = DEFAULT_TOKENIZER) -> TokenizedDocument:
    sentences = tokenize(doc.text, config)
    counts = Counter(t for sent in sentences for t in sent)
    return TokenizedDocument(
        id=doc.id,
        sentences=sentences,
        term_counts=dict(counts),
        total_tokens=sum(counts.values()),
        date=doc.date,
        tags=doc.tags,
    )


def tokenize_documents(docs: Iterable[Document], config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[TokenizedDocument]:
    return [tokenize_document(d, config) for d in docs]


def build_vocabulary(corpus: Sequence[TokenizedDocument], min_count: int = DEFAULT_MIN_COUNT) -> Vocabulary:
    """Count terms across the corpus and keep those with frequency >= min_count."""
    if min_count < 1:
        raise ConfigError(f"min_count must be >= 1, got {min_count}")
    if not corpus:
        raise DataError("empty corpus")
    counts: Counter[str] = Counter()
    for doc in corpus:
        counts.update(doc.term_counts)
    vocab = Vocabulary.from_counts(counts, min_count)
    if len(vocab) == 0:
        raise DataError(f"no term reaches min_count={min_count}; vocabulary would be empty")
    return vocab


def apply_vocabulary(corpus: Sequence[TokenizedDocument], vocab: Vocabulary) -> list[TokenizedDocument]:
    """Restrict documents to vocabulary terms.

    Sentences lose out-of-vocabulary tokens (training windows then span the
    remaining sequence); counts and totals are recomputed accordingly.
    """
    filtered = []
    for doc in corpus:
        sentences = [[t for t in sent if t in vocab] for sent in doc.sentences]
        sentences = [s for s in sentences if s]
        counts = Counter(t for sent in sentences for t in sent)
        filtered.append(
            replace(doc, sentences=sentences, term_counts=dict(counts),
                    total_tokens=sum(counts.values()), vocab=vocab)
        )
    return filtered


def prepare_corpus(
    docs: Iterable[Document],
    config: TokenizerConfig = DEFAULT_TOKENIZER,
    min_count: int = DEFAULT_MIN_COUNT,
) -> tuple[list[TokenizedDocument], Vocabulary]:
    """Tokenize, build the vocabulary, and filter documents to it."""
    tokenized = tokenize_documents(docs, config)
    vocab = build_vocabulary(tokenized, min_count)
    return apply_vocabulary(tokenized, vocab), vocab


def expand_patterns(patterns: PatternSet, vocab: Vocabulary) -> list[tuple[str, list[str]]]:
    """Match every pattern against the vocabulary.

    A literal pattern matches only itself; ``abc*`` matches every term with
    prefix "abc" (including "abc"). Matching is case-insensitive; results
    keep pattern order, matches keep vocabulary order. Patterns with zero
    matches yield an empty list (the caller decides whether that is fatal).
    """
    if len(vocab) == 0:
        raise DataError("cannot expand patterns against an empty vocabulary")
    result = []
    for pattern in patterns.patterns:
        p = pattern.lower()
        if p.endswith("*"):
            prefix = p[:-1]
            matches = [t for t in vocab.terms if t.startswith(prefix)]
        else:
            matches = [p] if p in vocab else []
        result.append((pattern, matches))
    return result


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def read_corpus(path: str | Path) -> list[Document]:
    """Read a JSON-lines corpus: one object per line with fields ``id``,
    ``text``, optional ``date`` (YYYY-MM-DD) and optional ``tags``."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    docs: list[Document] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict) or "id" not in record or "text" not in record:
                raise DataError(f"{path}:{lineno}: record must have 'id' and 'text' fields")
            doc_id = str(record["id"])
            if doc_id in seen:
                raise DataError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            date = None
            if record.get("date"):
                try:
                    date = _dt.date.fromisoformat(record["date"])
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad date {record['date']!r}") from exc
            tags = tuple(str(t) for t in record.get("tags", ()))
            docs.append(Document(id=doc_id, text=str(record["text"]), date=date, tags=tags))
    if not docs:
        raise DataError(f"corpus file contains no documents: {path}")
    return docs


def write_corpus(docs: Iterable[Document], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in docs:
            record: dict = {"id": doc.id, "text": doc.text}
            if doc.date is not None:
                record["date"] = doc.date.isoformat()
            if doc.tags:
                record["tags"] = list(doc.tags)
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_patterns(path: str | Path, label: str | None = None) -> PatternSet:
    """Read a pattern file: one pattern per line, ``#`` comments, blank lines
    ignored. A second whitespace-separated numeric field, when present, is an
    explicit polarity weight for that pattern."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"pattern file not found: {path}")
    patterns: list[str] = []
    weights: list[float] = []
    any_weight = False
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) == 1:
                patterns.append(fields[0])
                weights.append(1.0)
            elif len(fields) == 2:
                try:
                    w = float(fields[1])
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad weight {fields[1]!r}") from exc
                patterns.append(fields[0])
                weights.append(w)
                any_weight = True
            else:
                raise DataError(f"{path}:{lineno}: expected 'pattern' or 'pattern weight'")
    if not patterns:
        raise DataError(f"no patterns in file: {path}")
    try:
        return PatternSet(
            patterns=tuple(patterns),
            weights=tuple(weights) if any_weight else None,
            label=label if label is not None else path.stem,
        )
    except ConfigError as exc:
        raise DataError(f"{path}: {exc}") from exc


def read_dictionary_dir(path: str | Path) -> dict[str, PatternSet]:
    """Read a multi-category dictionary: a directory of pattern files,
    category name = filename stem."""
    path = Path(path)
    if not path.is_dir():
        raise DataError(f"dictionary directory not found: {path}")
    categories = {}
    for child in sorted(path.glob("*.txt")):
        categories[child.stem] = read_patterns(child, label=child.stem)
    if not categories:
        raise DataError(f"no .txt pattern files in directory: {path}")
    return categories
