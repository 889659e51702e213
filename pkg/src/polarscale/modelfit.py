"""Seed perplexity and perplexity-driven hyperparameter search.

Perplexity measures how well a trained model's predicted seed-word
probabilities match the seeds' observed per-document frequencies:

    exp( - sum_d sum_m (f_dm / N_d) * log(q_dm)  /  sum_d sum_m f_dm )

where f_dm counts seed m in document d, N_d is the document's in-vocabulary
token count, and q_dm is the model's predicted probability of seed m in
document d, normalized so each document's q_d sums to 1. Lower is better;
the grid search trains one model per candidate config and ranks them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import TokenizedDocument, Vocabulary
from .embedding import EmbeddingModel, W2VConfig, train_word2vec
from .errors import ConfigError, DataError
from .scaling import SeedSet
from .util import derive_seed, format_float, stable_sigmoid

LOG_FLOOR = 1e-12

REPORT_COLUMNS = ["algorithm", "k", "window", "lr", "epochs", "negatives", "perplexity"]


@dataclass
class DocumentDetail:
    doc_id: str
    n_tokens: int
    seed_counts: np.ndarray
    seed_probabilities: np.ndarray


@dataclass
class PerplexityReport:
    config: W2VConfig
    seed_set_id: str
    perplexity: float
    per_document_details: list[DocumentDetail] | None = None


@dataclass
class GridSearchError(DataError):
    """Raised when one or more grid configs fail; completed reports are kept
    so partial results can still be written out."""

    failures: list[tuple[W2VConfig, Exception]]
    completed: list[PerplexityReport] = field(default_factory=list)

    def __str__(self) -> str:
        lines = [f"{cfg.canonical()}: {exc}" for cfg, exc in self.failures]
        return "grid search failed for %d config(s): %s" % (len(self.failures), "; ".join(lines))


def document_seed_probabilities(
    model: EmbeddingModel, doc: TokenizedDocument, seed_indices: np.ndarray
) -> np.ndarray | None:
    """Mean predicted probability of each seed over the document's tokens,
    normalized to sum to 1 across seeds. None for empty documents."""
    if doc.total_tokens == 0:
        return None
    terms = list(doc.term_counts.keys())
    idx = np.asarray([model.vocab.index(t) for t in terms], dtype=np.int64)
    counts = np.asarray([doc.term_counts[t] for t in terms], dtype=np.float64)
    r = model.V[idx].astype(np.float64) @ model.W[seed_indices].astype(np.float64).T
    q_raw = counts @ stable_sigmoid(r) / counts.sum()
    return q_raw / q_raw.sum()


def seed_perplexity(
    model: EmbeddingModel,
    corpus: Sequence[TokenizedDocument],
    seeds: SeedSet,
    keep_details: bool = False,
) -> PerplexityReport:
    """Perplexity of the model's seed predictions over the corpus.

    Documents without in-vocabulary tokens are excluded. Raises if the seed
    words never occur in the corpus (the measure is then undefined).
    """
    if not model.has_output_weights:
        raise ConfigError("perplexity requires a model with output-layer weights")
    if not isinstance(model.config, W2VConfig):
        raise ConfigError("perplexity is defined for word2vec configurations")
    seed_terms = seeds.terms
    seed_idx = np.asarray([model.require_index(t) for t in seed_terms], dtype=np.int64)

    cross_entropy = 0.0
    total_seed_count = 0.0
    details: list[DocumentDetail] = []
    for doc in corpus:
        n = doc.total_tokens
        if n == 0:
            continue
        q = document_seed_probabilities(model, doc, seed_idx)
        f = np.asarray([doc.term_counts.get(t, 0) for t in seed_terms], dtype=np.float64)
        cross_entropy += (f / n) @ np.log(np.maximum(q, LOG_FLOOR))
        total_seed_count += f.sum()
        if keep_details:
            details.append(DocumentDetail(doc_id=doc.id, n_tokens=n, seed_counts=f,
                                          seed_probabilities=q))
    if total_seed_count == 0:
        raise DataError("perplexity undefined: seeds absent from corpus")
    perplexity = float(np.exp(-cross_entropy / total_seed_count))
    return PerplexityReport(
        config=model.config,
        seed_set_id=seeds.label,
        perplexity=perplexity,
        per_document_details=details if keep_details else None,
    )


def grid_search(
    corpus: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    seeds: SeedSet,
    grid: Sequence[W2VConfig],
    rng_seed: int,
    threads: int = 1,
) -> list[PerplexityReport]:
    """Train one model per config and rank configs by ascending perplexity.

    Each config's training seed is derived from ``rng_seed`` and the config's
    canonical form, so identical configs give identical models and the whole
    search is reproducible. Ties keep grid order. If some configs fail, the
    rest still complete and a :class:`GridSearchError` carrying the finished
    reports is raised.
    """
    if not grid:
        raise ConfigError("grid must contain at least one config")

    def run(config: W2VConfig) -> PerplexityReport:
        seeded = W2VConfig(
            algorithm=config.algorithm, k=config.k, window=config.window,
            learning_rate=config.learning_rate, epochs=config.epochs,
            negatives=config.negatives,
            rng_seed=derive_seed(rng_seed, config.canonical()),
            subsample_threshold=config.subsample_threshold,
        )
        model = train_word2vec(corpus, vocab, seeded)
        return seed_perplexity(model, corpus, seeds)

    outcomes: list[PerplexityReport | Exception] = [None] * len(grid)  # type: ignore[list-item]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run, cfg) for cfg in grid]
            for i, fut in enumerate(futures):
                try:
                    outcomes[i] = fut.result()
                except Exception as exc:  # noqa: BLE001 - reported per config
                    outcomes[i] = exc
    else:
        for i, cfg in enumerate(grid):
            try:
                outcomes[i] = run(cfg)
            except Exception as exc:  # noqa: BLE001
                outcomes[i] = exc

    failures = [(grid[i], o) for i, o in enumerate(outcomes) if isinstance(o, Exception)]
    reports = [o for o in outcomes if isinstance(o, PerplexityReport)]
    reports.sort(key=lambda r: r.perplexity)
    if failures:
        raise GridSearchError(failures=failures, completed=reports)
    return reports


# ---------------------------------------------------------------------------
# Grid file and report export
# ---------------------------------------------------------------------------

_GRID_DEFAULTS = {"lr": 0.05, "epochs": 10, "negatives": 5}


def parse_grid_line(line: str) -> W2VConfig:
    fields: dict[str, str] = {}
    for token in line.split():
        if "=" not in token:
            raise DataError(f"bad grid entry {token!r}: expected key=value")
        key, value = token.split("=", 1)
        fields[key.lower()] = value
    unknown = set(fields) - {"algorithm", "k", "window", "lr", "epochs", "negatives", "subsample"}
    if unknown:
        raise DataError(f"unknown grid keys: {', '.join(sorted(unknown))}")
    if "algorithm" not in fields or "k" not in fields:
        raise DataError(f"grid line needs at least algorithm= and k=: {line!r}")
    algorithm = fields["algorithm"].lower()
    # window defaults follow the usual practice: narrower for cbow
    window = int(fields.get("window", 10 if algorithm == "sg" else 5))
    try:
        return W2VConfig(
            algorithm=algorithm,
            k=int(fields["k"]),
            window=window,
            learning_rate=float(fields.get("lr", _GRID_DEFAULTS["lr"])),
            epochs=int(fields.get("epochs", _GRID_DEFAULTS["epochs"])),
            negatives=int(fields.get("negatives", _GRID_DEFAULTS["negatives"])),
            subsample_threshold=float(fields["subsample"]) if "subsample" in fields else None,
        )
    except (ValueError, ConfigError) as exc:
        raise DataError(f"bad grid line {line!r}: {exc}") from exc


def read_grid_file(path: str | Path) -> list[W2VConfig]:
    """One config per line: ``algorithm=SG k=150 window=10 lr=0.05 epochs=10
    negatives=5``. Comments (#) and blank lines are ignored."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"grid file not found: {path}")
    configs = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        configs.append(parse_grid_line(line))
    if not configs:
        raise DataError(f"no configs in grid file: {path}")
    return configs


def write_perplexity_reports(reports: Sequence[PerplexityReport], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(REPORT_COLUMNS) + "\n")
        for report in reports:
            cfg = report.config
            fh.write(
                f"{cfg.algorithm}\t{cfg.k}\t{cfg.window}\t{format_float(cfg.learning_rate)}\t"
                f"{cfg.epochs}\t{cfg.negatives}\t{format_float(report.perplexity)}\n"
            )
