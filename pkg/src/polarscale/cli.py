"""Command-line interface.

Subcommands: ``train``, ``score``, ``optimize``, ``evaluate``, ``inspect``.
All outputs are tab-separated files; a short human summary goes to standard
output. Every run is deterministic given ``--seed`` (default 42): the seed is
fanned out to each random component through labeled sub-seeds, so reruns
produce byte-identical outputs in single-threaded mode.

Exit codes: 0 success, 2 configuration error, 3 data/input error,
4 training divergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import plots
from .corpus import (
    DEFAULT_MIN_COUNT,
    TokenizerConfig,
    apply_vocabulary,
    build_vocabulary,
    prepare_corpus,
    read_corpus,
    read_patterns,
    tokenize_documents,
)
from .embedding import (
    ALGORITHM_CBOW,
    ALGORITHM_SG,
    ALGORITHM_SVD,
    W2VConfig,
    context_probabilities,
    train_word2vec,
)
from .errors import ConfigError, DataError, PolarscaleError, TrainingDivergedError
from .evalkit import (
    TimeSeriesPoint,
    BenchmarkError,
    classify_documents,
    run_benchmark,
    sample_seed_sets,
    smooth_series,
    write_benchmark_rows,
    write_series,
)
from .model_io import export_text, load_model, save_model
from .modelfit import GridSearchError, grid_search, read_grid_file, write_perplexity_reports
from .scaling import (
    KIND_DICTIONARY,
    KIND_PROBABILISTIC,
    KIND_SPATIAL,
    MODE_BIPOLAR,
    MODE_UNIPOLAR,
    combine_scores,
    dictionary_word_scores,
    make_seed_set,
    probabilistic_word_scores,
    read_score_table,
    score_documents,
    spatial_word_scores,
    write_score_table,
    write_word_polarity,
)
from .svd import SVDConfig, train_svd_model
from .util import format_float

DEFAULT_SEED = 42

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DIVERGED = 4


def _default_threads() -> int:
    env = os.environ.get("POLARSCALE_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"base rng seed (default {DEFAULT_SEED})")
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker threads (default $POLARSCALE_THREADS or 1)")
    parser.add_argument("--figures", metavar="DIR", default=None,
                        help="also render figures into DIR")


def _add_tokenizer(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT,
                        help=f"vocabulary frequency threshold (default {DEFAULT_MIN_COUNT})")
    parser.add_argument("--keep-numbers", action="store_true",
                        help="keep digit-only tokens")
    parser.add_argument("--stopwords", metavar="FILE", default=None,
                        help="file with one stopword per line to drop")


def _tokenizer_config(args: argparse.Namespace) -> TokenizerConfig:
    stopwords = None
    if args.stopwords:
        path = Path(args.stopwords)
        if not path.exists():
            raise DataError(f"stopword file not found: {path}")
        stopwords = frozenset(
            line.strip().lower()
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        )
    return TokenizerConfig(keep_numbers=args.keep_numbers, stopwords=stopwords)


def _load_prepared(args: argparse.Namespace):
    docs = read_corpus(args.corpus)
    return prepare_corpus(docs, _tokenizer_config(args), min_count=args.min_count)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarscale",
        description="Latent semantic scaling: train word embeddings, score "
                    "documents along seed-word concepts, tune and evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a word2vec or SVD model on a corpus")
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--out", required=True, help="model container output path")
    p.add_argument("--algo", default=ALGORITHM_SG,
                   choices=[ALGORITHM_SG, ALGORITHM_CBOW, ALGORITHM_SVD])
    p.add_argument("--k", type=int, default=100, help="embedding size (default 100)")
    p.add_argument("--window", type=int, default=10, help="context window (default 10)")
    p.add_argument("--lr", type=float, default=0.05, help="initial learning rate (default 0.05)")
    p.add_argument("--epochs", type=int, default=10, help="training epochs (default 10)")
    p.add_argument("--negatives", type=int, default=5, help="negative samples (default 5)")
    p.add_argument("--subsample", type=float, default=None,
                   help="frequent-word subsampling threshold (off by default)")
    p.add_argument("--svd-weighting", default="count", choices=["count", "log-count"],
                   help="cell weighting for --algo svd")
    p.add_argument("--hogwild", action="store_true",
                   help="parallel lock-free training across --threads "
                        "(runs are no longer bit-for-bit reproducible)")
    p.add_argument("--export-text", metavar="FILE", default=None,
                   help="also export vectors as text")
    _add_tokenizer(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score documents along a seed-word concept")
    p.add_argument("--corpus", help="JSONL corpus file")
    p.add_argument("--model", help="trained model container")
    p.add_argument("--seeds", help="seed pattern file")
    p.add_argument("--mode", default=KIND_PROBABILISTIC,
                   choices=[KIND_SPATIAL, KIND_PROBABILISTIC, KIND_DICTIONARY])
    p.add_argument("--bipolar", action="store_true",
                   help="seed file carries positive and negative polarities")
    p.add_argument("--min-tokens", type=int, default=1,
                   help="skip documents with fewer in-vocabulary tokens (default 1)")
    p.add_argument("--out", required=True, help="score table output path")
    p.add_argument("--word-scores", metavar="FILE", default=None,
                   help="also write the word polarity table")
    p.add_argument("--combine", nargs=2, metavar=("A", "B"), default=None,
                   help="combine two existing score tables (geometric mean) instead of scoring")
    _add_tokenizer(p)
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("optimize", help="rank a hyperparameter grid by seed perplexity")
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--grid", required=True, help="grid file, one config per line")
    p.add_argument("--seeds", required=True, help="seed pattern file")
    p.add_argument("--out", required=True, help="report output path")
    _add_tokenizer(p)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate",
                       help="benchmark estimators against a full dictionary and/or "
                            "smooth scores over time")
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--dictionary", help="full dictionary pattern file (benchmark)")
    p.add_argument("--samples", type=int, default=10,
                   help="number of random seed samples (default 10)")
    p.add_argument("--sample-size", type=int, default=10,
                   help="patterns per seed sample (default 10)")
    p.add_argument("--grid", help="grid file for the benchmark models")
    p.add_argument("--results-out", help="benchmark table output path")
    p.add_argument("--model", help="trained model for the series pipeline")
    p.add_argument("--seeds", help="seed pattern file for the series pipeline")
    p.add_argument("--seeds2", help="second seed file: scores are combined "
                                    "(geometric mean) before smoothing")
    p.add_argument("--groups", action="append", default=[],
                   metavar="NAME=KW1,KW2",
                   help="document group by keyword match, first match wins (repeatable)")
    p.add_argument("--bandwidth", type=float, default=14.0,
                   help="smoothing kernel sd in days (default 14)")
    p.add_argument("--n-boot", type=int, default=500,
                   help="bootstrap resamples for the bands (default 500)")
    p.add_argument("--series-out", help="smoothed series output path")
    _add_tokenizer(p)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="list high-probability context words for a term")
    p.add_argument("--model", required=True, help="trained model container")
    p.add_argument("--term", required=True, help="vocabulary term to inspect")
    p.add_argument("--top", type=int, default=10, help="number of context words (default 10)")
    p.set_defaults(func=cmd_inspect)

    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_train(args: argparse.Namespace) -> int:
    corpus, vocab = _load_prepared(args)
    if args.algo == ALGORITHM_SVD:
        config = SVDConfig(k=args.k, weighting=args.svd_weighting, rng_seed=args.seed)
        model = train_svd_model(corpus, vocab, config)
        print(f"trained svd model: vocab={len(vocab)} k={model.k}")
    else:
        config = W2VConfig(
            algorithm=args.algo, k=args.k, window=args.window,
            learning_rate=args.lr, epochs=args.epochs, negatives=args.negatives,
            rng_seed=args.seed, subsample_threshold=args.subsample,
        )
        threads = args.threads if args.hogwild else 1
        if args.hogwild and threads > 1:
            print(
                "warning: --hogwild trains lock-free across "
                f"{threads} threads; results are not bit-for-bit reproducible",
                file=sys.stderr,
            )
        model = train_word2vec(corpus, vocab, config, threads=threads)
        losses = " ".join(format_float(x) for x in model.loss_per_epoch)
        print(f"trained {args.algo} model: vocab={len(vocab)} k={model.k}")
        print(f"loss per epoch: {losses}")
    save_model(model, args.out)
    print(f"model written to {args.out}")
    if args.export_text:
        export_text(model, args.export_text)
        print(f"text vectors written to {args.export_text}")
    if args.figures and args.algo != ALGORITHM_SVD:
        print("figure:", plots.plot_loss(model, Path(args.figures) / "train_loss.png"))
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    if args.combine:
        table = combine_scores(read_score_table(args.combine[0]),
                               read_score_table(args.combine[1]))
        write_score_table(table, args.out)
        print(f"combined {len(table)} documents "
              f"({len(table.dropped)} present in only one table) -> {args.out}")
        if args.figures:
            print("figure:", plots.plot_score_distribution(
                table, Path(args.figures) / "scores.png", title="combined score distribution"))
        return 0

    if not args.corpus or not args.seeds:
        raise ConfigError("score needs --corpus and --seeds (or --combine A B)")
    mode = MODE_BIPOLAR if args.bipolar else MODE_UNIPOLAR
    patterns = read_patterns(args.seeds)

    if args.model:
        model = load_model(args.model)
        vocab = model.vocab
        docs = read_corpus(args.corpus)
        corpus = apply_vocabulary(tokenize_documents(docs, _tokenizer_config(args)), vocab)
    elif args.mode == KIND_DICTIONARY:
        model = None
        corpus, vocab = _load_prepared(args)
    else:
        raise ConfigError(f"--mode {args.mode} requires --model")

    seeds = make_seed_set(patterns, vocab, mode=mode)
    if args.mode == KIND_PROBABILISTIC:
        polarity = probabilistic_word_scores(model, seeds)
    elif args.mode == KIND_SPATIAL:
        polarity = spatial_word_scores(model, seeds)
    else:
        polarity = dictionary_word_scores(patterns, vocab)

    table = score_documents(corpus, polarity, min_tokens=args.min_tokens)
    write_score_table(table, args.out)
    print(f"scored {len(table)} documents ({len(table.skipped)} below "
          f"--min-tokens {args.min_tokens}) -> {args.out}")
    if args.word_scores:
        write_word_polarity(polarity, args.word_scores)
        print(f"word polarity written to {args.word_scores}")
    if args.figures:
        figdir = Path(args.figures)
        print("figure:", plots.plot_word_polarity(polarity, figdir / "word_polarity.png"))
        print("figure:", plots.plot_score_distribution(
            table, figdir / "scores.png",
            title=f"{polarity.concept or 'document'} score distribution ({args.mode})"))
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    corpus, vocab = _load_prepared(args)
    grid = read_grid_file(args.grid)
    seeds = make_seed_set(read_patterns(args.seeds), vocab)
    try:
        reports = grid_search(corpus, vocab, seeds, grid, rng_seed=args.seed,
                              threads=args.threads)
    except GridSearchError as exc:
        # keep what finished so the run is not a total loss
        write_perplexity_reports(exc.completed, args.out)
        print(f"partial report ({len(exc.completed)} configs) written to {args.out}",
              file=sys.stderr)
        raise
    write_perplexity_reports(reports, args.out)
    best = reports[0]
    print(f"report written to {args.out}")
    print(f"best config: algorithm={best.config.algorithm} k={best.config.k} "
          f"window={best.config.window} lr={format_float(best.config.learning_rate)} "
          f"epochs={best.config.epochs} negatives={best.config.negatives} "
          f"perplexity={format_float(best.perplexity)}")
    if args.figures:
        print("figure:", plots.plot_grid_report(reports, Path(args.figures) / "grid_perplexity.png"))
    return 0


def _parse_groups(specs: list[str]) -> dict[str, list[str]]:
    groups: dict[str, list[str]] = {}
    for spec in specs:
        if "=" not in spec:
            raise ConfigError(f"bad --groups value {spec!r}: expected NAME=KW1,KW2")
        name, _, kws = spec.partition("=")
        name = name.strip()
        if not name:
            raise ConfigError(f"bad --groups value {spec!r}: empty group name")
        if name in groups:
            raise ConfigError(f"duplicate group {name!r}")
        groups[name] = [k.strip() for k in kws.split(",") if k.strip()]
    return groups


def cmd_evaluate(args: argparse.Namespace) -> int:
    run_bench = bool(args.dictionary)
    run_series = bool(args.model or args.seeds or args.series_out)
    if not run_bench and not run_series:
        raise ConfigError(
            "nothing to do: give --dictionary/--grid/--results-out for the "
            "benchmark and/or --model/--seeds/--series-out for the series pipeline"
        )
    tokenized = tokenize_documents(read_corpus(args.corpus), _tokenizer_config(args))

    if run_bench:
        if not args.grid or not args.results_out:
            raise ConfigError("benchmark needs --dictionary, --grid and --results-out")
        vocab = build_vocabulary(tokenized, args.min_count)
        corpus = apply_vocabulary(tokenized, vocab)
        dictionary = read_patterns(args.dictionary)
        grid = read_grid_file(args.grid)
        samples = sample_seed_sets(dictionary, args.samples, args.sample_size,
                                   rng_seed=args.seed)
        try:
            rows = run_benchmark(corpus, vocab, dictionary, samples, grid,
                                 rng_seed=args.seed)
        except BenchmarkError as exc:
            write_benchmark_rows(exc.completed, args.results_out)
            print(f"partial benchmark ({len(exc.completed)} rows) written to "
                  f"{args.results_out}", file=sys.stderr)
            raise
        write_benchmark_rows(rows, args.results_out)
        print(f"benchmark: {len(rows)} rows over {args.samples} seed samples -> "
              f"{args.results_out}")
        if args.figures:
            figdir = Path(args.figures)
            print("figure:", plots.plot_benchmark(rows, figdir / "benchmark.png"))
            print("figure:", plots.plot_perplexity_correlation(
                rows, figdir / "perplexity_correlation.png"))

    if run_series:
        if not (args.model and args.seeds and args.series_out):
            raise ConfigError("series pipeline needs --model, --seeds and --series-out")
        model = load_model(args.model)
        vocab = model.vocab
        corpus = apply_vocabulary(tokenized, vocab)
        table = score_documents(
            corpus, probabilistic_word_scores(model, make_seed_set(read_patterns(args.seeds), vocab)))
        if args.seeds2:
            second = score_documents(
                corpus,
                probabilistic_word_scores(model, make_seed_set(read_patterns(args.seeds2), vocab)))
            table = combine_scores(table, second)
        groups = _parse_groups(args.groups)
        tags = classify_documents(corpus, groups) if groups else {}
        points = []
        undated = 0
        for row in table.rows:
            if row.date is None:
                undated += 1
                continue
            points.append(TimeSeriesPoint(date=row.date, value=row.score,
                                          group=tags.get(row.id, "") if groups else ""))
        if undated:
            print(f"note: {undated} documents without dates were left out of the series",
                  file=sys.stderr)
        smoothed = smooth_series(points, bandwidth=args.bandwidth,
                                 n_boot=args.n_boot, rng_seed=args.seed)
        write_series(smoothed, args.series_out)
        print(f"series: {len(smoothed)} smoothed points "
              f"(gaussian kernel, bandwidth {format_float(args.bandwidth)} days, "
              f"{args.n_boot} bootstrap resamples) -> {args.series_out}")
        if args.figures:
            print("figure:", plots.plot_series(smoothed, Path(args.figures) / "series.png"))
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    pairs = context_probabilities(model, args.term, top_n=args.top)
    print("term\tprobability")
    for term, prob in pairs:
        print(f"{term}\t{format_float(prob)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrainingDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PolarscaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
