"""Evaluation kit: seed sampling, correlation, document grouping, kernel
smoothing, and the full benchmark loop.

The benchmark treats the full dictionary's document scores as the reference
and measures, for each sampled seed subset, how well four estimator families
recover them: SVD-spatial, word2vec-spatial, word2vec-probabilistic, and a
"mini dictionary" that counts only the sampled seeds. Correlations are
computed per document without aggregation; probabilistic rows also carry the
model's seed perplexity so fit and quality can be compared.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import PatternSet, TokenizedDocument, Vocabulary
from .embedding import EmbeddingModel, W2VConfig, train_word2vec
from .errors import ConfigError, DataError
from .modelfit import seed_perplexity
from .scaling import (
    MODE_UNIPOLAR,
    ScoreTable,
    SeedSet,
    dictionary_word_scores,
    make_seed_set,
    probabilistic_word_scores,
    score_documents,
    spatial_word_scores,
)
from .svd import SVDConfig, train_svd_model
from .util import derive_seed, format_float

FAMILY_SVD_SPATIAL = "svd-spatial"
FAMILY_W2V_SPATIAL = "w2v-spatial"
FAMILY_W2V_PROBABILISTIC = "w2v-probabilistic"
FAMILY_MINI_DICTIONARY = "mini-dictionary"

DEFAULT_BANDWIDTH_DAYS = 14.0
DEFAULT_N_BOOT = 500

BENCHMARK_COLUMNS = ["sample_id", "family", "algorithm", "k", "correlation", "perplexity"]
SERIES_COLUMNS = ["date", "group", "value", "lower", "upper"]


@dataclass(frozen=True)
class SeedSample:
    """One random draw of seed patterns from a full dictionary."""

    sample_id: int
    patterns: PatternSet
    rng_seed: int


@dataclass(frozen=True)
class TimeSeriesPoint:
    date: _dt.date
    value: float
    group: str = ""


@dataclass(frozen=True)
class SmoothedPoint:
    date: _dt.date
    group: str
    value: float
    lower: float
    upper: float


@dataclass(frozen=True)
class BenchmarkRow:
    sample_id: int
    family: str
    algorithm: str
    k: int | None
    correlation: float
    perplexity: float | None = None


@dataclass
class BenchmarkError(DataError):
    """A benchmark condition failed; identifies the condition and keeps the
    rows completed before the failure."""

    sample_id: int
    family: str
    detail: str
    completed: list[BenchmarkRow]

    def __str__(self) -> str:
        return f"benchmark failed at sample {self.sample_id}, {self.family}: {self.detail}"


# ---------------------------------------------------------------------------
# Seed sampling and correlation
# ---------------------------------------------------------------------------

def sample_seed_sets(
    dictionary: PatternSet, n_sets: int, set_size: int, rng_seed: int
) -> list[SeedSample]:
    """Draw ``n_sets`` random subsets of ``set_size`` dictionary patterns.

    Patterns are drawn without replacement within a sample and may repeat
    across samples. Each sample records its own derived seed, so any single
    sample can be regenerated without the others.
    """
    if n_sets < 1:
        raise ConfigError(f"n_sets must be >= 1, got {n_sets}")
    if set_size < 1:
        raise ConfigError(f"set_size must be >= 1, got {set_size}")
    if set_size > len(dictionary):
        raise ConfigError(
            f"set_size {set_size} exceeds dictionary size {len(dictionary)}"
        )
    samples: list[SeedSample] = []
    for sample_id in range(1, n_sets + 1):
        sub_seed = derive_seed(rng_seed, f"seed-sample-{sample_id}")
        rng = np.random.default_rng(sub_seed)
        chosen = rng.choice(len(dictionary), size=set_size, replace=False)
        patterns = tuple(dictionary.patterns[i] for i in chosen)
        weights = (
            tuple(dictionary.weights[i] for i in chosen)
            if dictionary.weights is not None
            else None
        )
        label = f"{dictionary.label or 'dictionary'}-sample-{sample_id}"
        samples.append(
            SeedSample(
                sample_id=sample_id,
                patterns=PatternSet(patterns=patterns, weights=weights, label=label),
                rng_seed=sub_seed,
            )
        )
    return samples


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Product-moment correlation; constant inputs have no defined value."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1:
        raise ConfigError("pearson expects one-dimensional vectors")
    if xa.shape != ya.shape:
        raise ConfigError(f"length mismatch: {xa.shape[0]} vs {ya.shape[0]}")
    if xa.shape[0] < 2:
        raise ConfigError("pearson requires at least 2 observations")
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()):
        raise DataError("pearson requires finite values")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise DataError("undefined correlation: constant vector")
    r = float(np.corrcoef(xa, ya)[0, 1])
    # guard against tiny excursions outside [-1, 1] from rounding
    return min(1.0, max(-1.0, r))


# ---------------------------------------------------------------------------
# Document grouping
# ---------------------------------------------------------------------------

def classify_documents(
    corpus: Sequence[TokenizedDocument],
    groups: Mapping[str, Sequence[str]],
    default: str = "other",
) -> dict[str, str]:
    """Tag each document with the first group any of its tokens matches.

    Keywords are case-insensitive literal tokens; group priority is the
    mapping's order. Documents matching no group get ``default``. An empty
    group mapping is allowed (everything gets the default tag), but a group
    with no keywords is a configuration error.
    """
    keyword_sets: list[tuple[str, frozenset[str]]] = []
    for group, keywords in groups.items():
        kws = frozenset(k.lower() for k in keywords)
        if not kws:
            raise ConfigError(f"group {group!r} has no keywords")
        keyword_sets.append((group, kws))
    tags: dict[str, str] = {}
    for doc in corpus:
        terms = doc.term_counts.keys()
        tag = default
        for group, kws in keyword_sets:
            if not kws.isdisjoint(terms):
                tag = group
                break
        tags[doc.id] = tag
    return tags


# ---------------------------------------------------------------------------
# Kernel smoothing with bootstrap bands
# ---------------------------------------------------------------------------

def _kernel_weights(eval_ordinals: np.ndarray, ordinals: np.ndarray, bandwidth: float) -> np.ndarray:
    # shift by the row max in log space so very distant points cannot
    # underflow every weight in a row to zero
    logw = -0.5 * ((eval_ordinals[:, None] - ordinals[None, :]) / bandwidth) ** 2
    logw -= logw.max(axis=1, keepdims=True)
    return np.exp(logw)


def _smooth_group(
    dates: list[_dt.date],
    values: np.ndarray,
    group: str,
    bandwidth: float,
    n_boot: int,
    rng_seed: int,
) -> list[SmoothedPoint]:
    ordinals = np.asarray([d.toordinal() for d in dates], dtype=np.float64)
    eval_dates = sorted(set(dates))
    if len(eval_dates) < 2:
        raise DataError(
            f"smoothing needs at least 2 distinct dates, got {len(eval_dates)}"
            + (f" in group {group!r}" if group else "")
        )
    eval_ordinals = np.asarray([d.toordinal() for d in eval_dates], dtype=np.float64)
    weights = _kernel_weights(eval_ordinals, ordinals, bandwidth)
    smoothed = (weights @ values) / weights.sum(axis=1)

    # bootstrap the points as multinomial resample counts: one matmul pair
    # gives every resampled curve at once
    n = values.shape[0]
    rng = np.random.default_rng(derive_seed(rng_seed, f"smooth:{group}"))
    counts = rng.multinomial(n, np.full(n, 1.0 / n), size=n_boot).astype(np.float64)
    boot_num = weights @ (counts * values[None, :]).T
    boot_den = weights @ counts.T
    boot = boot_num / boot_den
    lower = np.percentile(boot, 2.5, axis=1)
    upper = np.percentile(boot, 97.5, axis=1)
    return [
        SmoothedPoint(date=d, group=group, value=float(v), lower=float(lo), upper=float(hi))
        for d, v, lo, hi in zip(eval_dates, smoothed, lower, upper)
    ]


def smooth_series(
    points: Sequence[TimeSeriesPoint],
    bandwidth: float = DEFAULT_BANDWIDTH_DAYS,
    n_boot: int = DEFAULT_N_BOOT,
    rng_seed: int = 0,
) -> list[SmoothedPoint]:
    """Gaussian-kernel local mean per distinct date, with 2.5/97.5 percentile
    bands over ``n_boot`` bootstrap resamples of the points.

    Points are smoothed per group tag (each group independently, so groups
    need their own >= 2 distinct dates); results are ordered by group first
    appearance, then date.
    """
    if bandwidth <= 0:
        raise ConfigError(f"bandwidth must be positive, got {bandwidth}")
    if n_boot < 1:
        raise ConfigError(f"n_boot must be >= 1, got {n_boot}")
    if not points:
        raise DataError("no points to smooth")
    for p in points:
        if not np.isfinite(p.value):
            raise DataError(f"non-finite value at {p.date.isoformat()}")

    by_group: dict[str, list[TimeSeriesPoint]] = {}
    for p in points:
        by_group.setdefault(p.group, []).append(p)
    out: list[SmoothedPoint] = []
    for group, pts in by_group.items():
        dates = [p.date for p in pts]
        values = np.asarray([p.value for p in pts], dtype=np.float64)
        out.extend(_smooth_group(dates, values, group, bandwidth, n_boot, rng_seed))
    return out


# ---------------------------------------------------------------------------
# Benchmark
# ---------------------------------------------------------------------------

def correlate_tables(a: ScoreTable, b: ScoreTable) -> float:
    """Pearson correlation over documents scored by both tables."""
    sa = a.scores_by_id()
    sb = b.scores_by_id()
    common = sorted(set(sa) & set(sb))
    if len(common) < 2:
        raise DataError("fewer than 2 documents scored by both methods")
    return pearson([sa[i] for i in common], [sb[i] for i in common])


def run_benchmark(
    corpus: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    full_dictionary: PatternSet,
    seed_samples: Sequence[SeedSample],
    model_grid: Sequence[W2VConfig],
    rng_seed: int,
) -> list[BenchmarkRow]:
    """Correlate each (seed sample x estimator family x config) against the
    full dictionary's document scores.

    Word2vec models are trained once per grid config and shared across
    samples and families; SVD models once per distinct k. Rows are sorted by
    (sample_id, family, k, grid order) and the whole table is reproducible
    from (corpus, rng_seed).
    """
    if not seed_samples:
        raise ConfigError("no seed samples given")
    if not model_grid:
        raise ConfigError("model grid is empty")

    reference_polarity = dictionary_word_scores(full_dictionary, vocab)
    reference = score_documents(corpus, reference_polarity)

    w2v_models: list[EmbeddingModel] = []
    for config in model_grid:
        seeded = W2VConfig(
            algorithm=config.algorithm, k=config.k, window=config.window,
            learning_rate=config.learning_rate, epochs=config.epochs,
            negatives=config.negatives,
            rng_seed=derive_seed(rng_seed, "benchmark:" + config.canonical()),
            subsample_threshold=config.subsample_threshold,
        )
        w2v_models.append(train_word2vec(corpus, vocab, seeded))

    svd_ks = sorted({config.k for config in model_grid})
    svd_models = [
        train_svd_model(
            corpus, vocab,
            SVDConfig(k=k, rng_seed=derive_seed(rng_seed, f"benchmark:svd:k={k}")),
        )
        for k in svd_ks
    ]

    rows: list[BenchmarkRow] = []
    for sample in seed_samples:
        family = FAMILY_MINI_DICTIONARY
        try:
            seeds = make_seed_set(sample.patterns, vocab, mode=MODE_UNIPOLAR)

            mini = score_documents(corpus, dictionary_word_scores(sample.patterns, vocab))
            rows.append(BenchmarkRow(
                sample_id=sample.sample_id, family=family, algorithm="dictionary",
                k=None, correlation=correlate_tables(mini, reference),
            ))

            family = FAMILY_SVD_SPATIAL
            for k, model in zip(svd_ks, svd_models):
                table = score_documents(corpus, spatial_word_scores(model, seeds))
                rows.append(BenchmarkRow(
                    sample_id=sample.sample_id, family=family, algorithm="svd",
                    k=k, correlation=correlate_tables(table, reference),
                ))

            family = FAMILY_W2V_PROBABILISTIC
            for config, model in zip(model_grid, w2v_models):
                table = score_documents(corpus, probabilistic_word_scores(model, seeds))
                report = seed_perplexity(model, corpus, seeds)
                rows.append(BenchmarkRow(
                    sample_id=sample.sample_id, family=family,
                    algorithm=config.algorithm, k=config.k,
                    correlation=correlate_tables(table, reference),
                    perplexity=report.perplexity,
                ))

            family = FAMILY_W2V_SPATIAL
            for config, model in zip(model_grid, w2v_models):
                table = score_documents(corpus, spatial_word_scores(model, seeds))
                rows.append(BenchmarkRow(
                    sample_id=sample.sample_id, family=family,
                    algorithm=config.algorithm, k=config.k,
                    correlation=correlate_tables(table, reference),
                ))
        except Exception as exc:  # noqa: BLE001 - annotated and re-raised
            raise BenchmarkError(
                sample_id=sample.sample_id, family=family, detail=str(exc),
                completed=rows,
            ) from exc
    return rows


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def write_benchmark_rows(rows: Sequence[BenchmarkRow], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(BENCHMARK_COLUMNS) + "\n")
        for row in rows:
            k = "" if row.k is None else str(row.k)
            perplexity = "" if row.perplexity is None else format_float(row.perplexity)
            fh.write(
                f"{row.sample_id}\t{row.family}\t{row.algorithm}\t{k}\t"
                f"{format_float(row.correlation)}\t{perplexity}\n"
            )


def read_benchmark_rows(path: str | Path) -> list[BenchmarkRow]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"benchmark table not found: {path}")
    rows: list[BenchmarkRow] = []
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header.split("\t") != BENCHMARK_COLUMNS:
            raise DataError(f"unexpected benchmark header in {path}: {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != len(BENCHMARK_COLUMNS):
                raise DataError(f"{path}:{lineno}: expected {len(BENCHMARK_COLUMNS)} fields")
            sid, family, algorithm, k_s, corr_s, perp_s = fields
            try:
                rows.append(BenchmarkRow(
                    sample_id=int(sid), family=family, algorithm=algorithm,
                    k=int(k_s) if k_s else None,
                    correlation=float(corr_s),
                    perplexity=float(perp_s) if perp_s else None,
                ))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return rows


def write_series(points: Sequence[SmoothedPoint], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(SERIES_COLUMNS) + "\n")
        for p in points:
            fh.write(
                f"{p.date.isoformat()}\t{p.group}\t{format_float(p.value)}\t"
                f"{format_float(p.lower)}\t{format_float(p.upper)}\n"
            )


def read_series(path: str | Path) -> list[SmoothedPoint]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"series file not found: {path}")
    points: list[SmoothedPoint] = []
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header.split("\t") != SERIES_COLUMNS:
            raise DataError(f"unexpected series header in {path}: {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != len(SERIES_COLUMNS):
                raise DataError(f"{path}:{lineno}: expected {len(SERIES_COLUMNS)} fields")
            try:
                points.append(SmoothedPoint(
                    date=_dt.date.fromisoformat(fields[0]), group=fields[1],
                    value=float(fields[2]), lower=float(fields[3]), upper=float(fields[4]),
                ))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return points
