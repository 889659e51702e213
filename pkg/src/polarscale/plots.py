"""Optional figure rendering for the CLI report paths.

Each function draws one figure from already-computed results and writes it to
a file; the tab-separated exports remain the primary output and none of the
library paths depend on this module. The Agg backend is forced so rendering
works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .embedding import EmbeddingModel  # noqa: E402
from .evalkit import BenchmarkRow, SmoothedPoint  # noqa: E402
from .modelfit import PerplexityReport  # noqa: E402
from .scaling import ScoreTable, WordPolarity  # noqa: E402

_GROUP_COLORS = ("tab:red", "tab:blue", "tab:green", "tab:orange", "tab:purple",
                 "tab:brown", "tab:pink", "tab:olive", "tab:cyan", "tab:gray")


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_loss(model: EmbeddingModel, path: str | Path) -> Path:
    """Training loss per epoch."""
    epochs = np.arange(1, len(model.loss_per_epoch) + 1)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(epochs, model.loss_per_epoch, marker="o")
    ax.set_xlabel("epoch")
    ax.set_ylabel("negative-sampling loss")
    ax.set_title(f"training loss ({model.config.algorithm}, k={model.k})")
    ax.set_xticks(epochs)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_word_polarity(polarity: WordPolarity, path: str | Path) -> Path:
    """Word score against corpus frequency, highest-scoring terms labelled."""
    freqs = np.asarray(polarity.vocab.frequencies, dtype=np.float64)
    scores = polarity.scores
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.scatter(freqs, scores, s=8, alpha=0.4)
    top = np.argsort(-scores, kind="stable")[:12]
    for i in top:
        ax.annotate(polarity.vocab.terms[i], (freqs[i], scores[i]), fontsize=7,
                    xytext=(2, 2), textcoords="offset points")
    ax.set_xscale("log")
    ax.set_xlabel("corpus frequency")
    ax.set_ylabel(f"{polarity.model_kind} word score")
    ax.set_title(f"word polarity: {polarity.concept or 'unnamed concept'}")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_score_distribution(table: ScoreTable, path: str | Path, title: str = "") -> Path:
    """Histogram of document scores."""
    values = [r.score for r in table.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=min(50, max(10, len(values) // 20)), color="tab:blue", alpha=0.8)
    ax.set_xlabel("document score")
    ax.set_ylabel("documents")
    ax.set_title(title or "document score distribution")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_series(points: Sequence[SmoothedPoint], path: str | Path, title: str = "") -> Path:
    """Smoothed curves with confidence bands, one color per group."""
    groups: dict[str, list[SmoothedPoint]] = {}
    for p in points:
        groups.setdefault(p.group, []).append(p)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for color, (group, pts) in zip(_GROUP_COLORS, groups.items()):
        pts = sorted(pts, key=lambda p: p.date)
        dates = [p.date for p in pts]
        ax.plot(dates, [p.value for p in pts], color=color, label=group or "all")
        ax.fill_between(dates, [p.lower for p in pts], [p.upper for p in pts],
                        color=color, alpha=0.2, linewidth=0)
    ax.xaxis.set_major_locator(mdates.AutoDateLocator())
    ax.xaxis.set_major_formatter(mdates.ConciseDateFormatter(ax.xaxis.get_major_locator()))
    ax.set_ylabel("smoothed score")
    ax.set_title(title or "smoothed polarity over time")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_benchmark(rows: Sequence[BenchmarkRow], path: str | Path) -> Path:
    """Correlation spread per estimator family across seed samples."""
    families: dict[str, list[float]] = {}
    for row in rows:
        families.setdefault(row.family, []).append(row.correlation)
    names = sorted(families)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.boxplot([families[n] for n in names], tick_labels=names, showfliers=False)
    rng = np.random.default_rng(0)
    for i, name in enumerate(names, start=1):
        ys = families[name]
        xs = i + (rng.random(len(ys)) - 0.5) * 0.25
        ax.scatter(xs, ys, s=12, alpha=0.6, color="tab:blue")
    ax.set_ylabel("Pearson correlation with full dictionary")
    ax.set_title("benchmark: correlation by estimator family")
    ax.tick_params(axis="x", labelrotation=15)
    ax.grid(True, axis="y", alpha=0.3)
    return _save(fig, path)


def plot_perplexity_correlation(rows: Sequence[BenchmarkRow], path: str | Path) -> Path:
    """Seed perplexity against correlation for the probabilistic rows."""
    pairs = [(r.perplexity, r.correlation) for r in rows if r.perplexity is not None]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if pairs:
        xs, ys = zip(*pairs)
        ax.scatter(xs, ys, s=16, alpha=0.7)
    ax.set_xlabel("seed perplexity (lower is better)")
    ax.set_ylabel("correlation with full dictionary")
    ax.set_title("perplexity vs. scaling quality")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_grid_report(reports: Sequence[PerplexityReport], path: str | Path) -> Path:
    """Perplexity per grid config, best first."""
    labels = [
        f"{r.config.algorithm} k={r.config.k} w={r.config.window}" for r in reports
    ]
    values = [r.perplexity for r in reports]
    fig, ax = plt.subplots(figsize=(7, max(3.0, 0.35 * len(reports) + 1.5)))
    ypos = np.arange(len(reports))
    ax.barh(ypos, values, color="tab:blue", alpha=0.8)
    ax.set_yticks(ypos, labels=labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("seed perplexity (lower is better)")
    ax.set_title("hyperparameter grid ranked by perplexity")
    ax.grid(True, axis="x", alpha=0.3)
    return _save(fig, path)
