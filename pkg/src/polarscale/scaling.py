"""From seed words to word polarity scores to document polarity scores.

Three estimators produce a score per vocabulary term:

* spatial      - weighted average cosine similarity to the seed vectors,
* probabilistic - weighted average predicted probability of each seed word
                  occurring near the term (needs output-layer weights),
* dictionary   - 1 for terms matched by the dictionary patterns, else 0.

A document's score is the frequency-weighted average of its terms' scores.
"""

from __future__ import annotations

import datetime as _dt
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import PatternSet, TokenizedDocument, Vocabulary, expand_patterns
from .embedding import EmbeddingModel
from .errors import ConfigError, DataError, UnmatchedPatternWarning
from .util import format_float, stable_sigmoid

MODE_UNIPOLAR = "unipolar"
MODE_BIPOLAR = "bipolar"

KIND_SPATIAL = "spatial"
KIND_PROBABILISTIC = "probabilistic"
KIND_DICTIONARY = "dictionary"


@dataclass
class SeedSet:
    """Expanded seed words with their polarity weights.

    ``expanded`` pairs each matched vocabulary term with its weight; weights
    from :func:`make_seed_set` are normalized so the absolute weights sum
    to 1. ``unmatched`` lists patterns that matched nothing.
    """

    entries: list[tuple[str, float]]
    expanded: list[tuple[str, float]]
    mode: str = MODE_UNIPOLAR
    label: str = ""
    unmatched: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.expanded)

    @property
    def terms(self) -> list[str]:
        return [t for t, _ in self.expanded]

    @property
    def weights(self) -> np.ndarray:
        return np.asarray([w for _, w in self.expanded], dtype=np.float64)


@dataclass
class WordPolarity:
    """One score per vocabulary term for a single concept."""

    concept: str
    scores: np.ndarray
    model_kind: str
    vocab: Vocabulary


@dataclass
class ScoreRow:
    id: str
    date: _dt.date | None
    tags: tuple[str, ...]
    n_tokens: int
    score: float


@dataclass
class ScoreTable:
    """Per-document polarity scores, sorted by document id.

    Documents with no in-vocabulary tokens are not scored; their ids are
    recorded in ``skipped``.
    """

    rows: list[ScoreRow]
    skipped: list[str] = field(default_factory=list)
    dropped: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def scores_by_id(self) -> dict[str, float]:
        return {r.id: r.score for r in self.rows}


def make_seed_set(
    patterns: PatternSet,
    vocab: Vocabulary,
    mode: str = MODE_UNIPOLAR,
) -> SeedSet:
    """Expand seed patterns against the vocabulary and assign weights.

    Each pattern carries a polarity (explicit, or 1 in the default unipolar
    case) that is split evenly among the terms it matches; the resulting
    weights are rescaled so their absolute values sum to 1. Patterns without
    matches raise a warning; a seed set with no matches at all is an error.
    """
    if mode not in (MODE_UNIPOLAR, MODE_BIPOLAR):
        raise ConfigError(f"mode must be 'unipolar' or 'bipolar', got {mode!r}")
    pattern_weights = patterns.weights if patterns.weights is not None else (1.0,) * len(patterns)
    if mode == MODE_UNIPOLAR and any(w <= 0 for w in pattern_weights):
        raise ConfigError("unipolar seed sets require strictly positive polarities")

    expansion = expand_patterns(patterns, vocab)
    expanded: list[tuple[str, float]] = []
    unmatched: list[str] = []
    seen: dict[str, int] = {}
    for (pattern, matches), weight in zip(expansion, pattern_weights):
        if not matches:
            unmatched.append(pattern)
            continue
        share = weight / len(matches)
        for term in matches:
            if term in seen:
                # same term reached through two patterns: weights accumulate
                idx = seen[term]
                expanded[idx] = (term, expanded[idx][1] + share)
            else:
                seen[term] = len(expanded)
                expanded.append((term, share))
    if unmatched:
        warnings.warn(
            f"seed patterns with no vocabulary match: {', '.join(unmatched)}",
            UnmatchedPatternWarning,
            stacklevel=2,
        )
    if not expanded:
        raise DataError(
            "no seed pattern matched the vocabulary: " + ", ".join(p for p in patterns.patterns)
        )
    total = sum(abs(w) for _, w in expanded)
    expanded = [(t, w / total) for t, w in expanded]
    signs = {w > 0 for _, w in expanded}
    if mode == MODE_BIPOLAR and signs != {True, False}:
        raise ConfigError("bipolar seed sets require both positive and negative polarities")
    return SeedSet(
        entries=list(zip(patterns.patterns, pattern_weights)),
        expanded=expanded,
        mode=mode,
        label=patterns.label,
        unmatched=unmatched,
    )


def _seed_indices(model: EmbeddingModel, seeds: SeedSet) -> np.ndarray:
    return np.asarray([model.require_index(t) for t in seeds.terms], dtype=np.int64)


def spatial_word_scores(model: EmbeddingModel, seeds: SeedSet, concept: str = "") -> WordPolarity:
    """Weighted average cosine similarity between each term vector and the
    seed vectors. Terms whose vector has zero norm score 0 by convention;
    a zero-norm seed vector is an error."""
    idx = _seed_indices(model, seeds)
    v = model.V.astype(np.float64)
    norms = np.linalg.norm(v, axis=1)
    for term, i in zip(seeds.terms, idx):
        if norms[i] == 0.0:
            raise DataError(f"seed term has a zero-norm vector: {term!r}")
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = v / safe[:, None]
    unit[norms == 0.0] = 0.0
    reference = (unit[idx] * seeds.weights[:, None]).sum(axis=0) / seeds.size
    return WordPolarity(
        concept=concept or seeds.label,
        scores=unit @ reference,
        model_kind=KIND_SPATIAL,
        vocab=model.vocab,
    )


def probabilistic_word_scores(model: EmbeddingModel, seeds: SeedSet, concept: str = "") -> WordPolarity:
    """Weighted average of sigmoid(V_i . W_m) over seed words m, i.e. the
    predicted probability of each seed occurring near term i."""
    if not model.has_output_weights:
        raise ConfigError("probabilistic scoring requires output-layer weights")
    idx = _seed_indices(model, seeds)
    r = model.V.astype(np.float64) @ model.W[idx].astype(np.float64).T
    scores = stable_sigmoid(r) @ seeds.weights / seeds.size
    return WordPolarity(
        concept=concept or seeds.label,
        scores=scores,
        model_kind=KIND_PROBABILISTIC,
        vocab=model.vocab,
    )


def dictionary_word_scores(dictionary: PatternSet, vocab: Vocabulary, concept: str = "") -> WordPolarity:
    """Indicator scores: 1 for vocabulary terms matched by any dictionary
    pattern, 0 otherwise."""
    scores = np.zeros(len(vocab), dtype=np.float64)
    for _, matches in expand_patterns(dictionary, vocab):
        for term in matches:
            scores[vocab.index(term)] = 1.0
    return WordPolarity(
        concept=concept or dictionary.label,
        scores=scores,
        model_kind=KIND_DICTIONARY,
        vocab=vocab,
    )


def score_documents(
    corpus: Sequence[TokenizedDocument],
    polarity: WordPolarity,
    min_tokens: int = 1,
) -> ScoreTable:
    """Frequency-weighted average word score per document.

    Documents with fewer than ``min_tokens`` in-vocabulary tokens are skipped
    (a score would be undefined or meaningless), and listed in ``skipped``.
    """
    if min_tokens < 1:
        raise ConfigError(f"min_tokens must be >= 1, got {min_tokens}")
    vocab = polarity.vocab
    scores = polarity.scores
    index = {t: i for i, t in enumerate(vocab.terms)}
    checked: set[int] = {id(vocab), id(None)}
    rows: list[ScoreRow] = []
    skipped: list[str] = []
    for doc in corpus:
        if id(doc.vocab) not in checked:
            if doc.vocab != vocab:
                raise DataError(
                    f"document {doc.id!r} was filtered to a different vocabulary "
                    "than the word polarity scores"
                )
            checked.add(id(doc.vocab))
        total = 0
        weighted = 0.0
        for term, count in doc.term_counts.items():
            idx = index.get(term)
            if idx is None:
                continue
            total += count
            weighted += scores[idx] * count
        if total < min_tokens:
            skipped.append(doc.id)
            continue
        rows.append(ScoreRow(id=doc.id, date=doc.date, tags=doc.tags,
                             n_tokens=total, score=weighted / total))
    rows.sort(key=lambda r: r.id)
    skipped.sort()
    return ScoreTable(rows=rows, skipped=skipped)


def combine_scores(a: ScoreTable, b: ScoreTable) -> ScoreTable:
    """Per-document geometric mean sqrt(score_a * score_b).

    Meaningful only for nonnegative (probabilistic or dictionary) scores;
    negative inputs are rejected. Documents present in only one table are
    dropped and reported in ``dropped``.
    """
    for table in (a, b):
        for row in table.rows:
            if row.score < 0:
                raise DataError("combination requires probabilistic (nonnegative) scores")
    by_id_b = {r.id: r for r in b.rows}
    rows: list[ScoreRow] = []
    dropped: list[str] = []
    for row in a.rows:
        other = by_id_b.get(row.id)
        if other is None:
            dropped.append(row.id)
            continue
        rows.append(ScoreRow(id=row.id, date=row.date, tags=row.tags,
                             n_tokens=row.n_tokens,
                             score=float(np.sqrt(row.score * other.score))))
    ids_a = {r.id for r in a.rows}
    dropped.extend(r.id for r in b.rows if r.id not in ids_a)
    rows.sort(key=lambda r: r.id)
    dropped.sort()
    skipped = sorted(set(a.skipped) | set(b.skipped))
    return ScoreTable(rows=rows, skipped=skipped, dropped=dropped)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def write_word_polarity(polarity: WordPolarity, path: str | Path) -> None:
    """Tab-separated term/frequency/score, sorted by score descending."""
    order = np.argsort(-polarity.scores, kind="stable")
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("term\tfrequency\tscore\n")
        for i in order:
            fh.write(
                f"{polarity.vocab.terms[i]}\t{polarity.vocab.frequencies[i]}\t"
                f"{format_float(float(polarity.scores[i]))}\n"
            )


def write_score_table(table: ScoreTable, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("id\tdate\ttags\tn_tokens\tscore\n")
        for row in table.rows:
            date = row.date.isoformat() if row.date else ""
            tags = ",".join(row.tags)
            fh.write(f"{row.id}\t{date}\t{tags}\t{row.n_tokens}\t{format_float(row.score)}\n")


def read_score_table(path: str | Path) -> ScoreTable:
    path = Path(path)
    if not path.exists():
        raise DataError(f"score table not found: {path}")
    rows: list[ScoreRow] = []
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header.split("\t") != ["id", "date", "tags", "n_tokens", "score"]:
            raise DataError(f"unexpected score table header in {path}: {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise DataError(f"{path}:{lineno}: expected 5 tab-separated fields")
            doc_id, date_s, tags_s, n_s, score_s = fields
            try:
                date = _dt.date.fromisoformat(date_s) if date_s else None
                n_tokens = int(n_s)
                score = float(score_s)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            tags = tuple(t for t in tags_s.split(",") if t)
            rows.append(ScoreRow(id=doc_id, date=date, tags=tags, n_tokens=n_tokens, score=score))
    return ScoreTable(rows=rows)
