"""Acceptance gate: nine checks covering gradients, scoring oracles,
perplexity closed forms, invariants, the SVD baseline, planted-corpus
behavior, determinism, and the end-to-end tutorial.

Each test prints one `[criterion N] name: PASS/FAIL` line on the real stdout
so the verdicts are visible in plain `pytest -v` output.
"""

from __future__ import annotations

import math
import statistics
import subprocess
import sys
import time

import numpy as np
import pytest

from polarscale import (
    PatternSet,
    W2VConfig,
    combine_scores,
    dictionary_word_scores,
    make_planted_corpus,
    make_seed_set,
    negative_sampling_gradients,
    negative_sampling_loss,
    prepare_corpus,
    probabilistic_word_scores,
    read_score_table,
    read_series,
    run_benchmark,
    sample_seed_sets,
    score_documents,
    seed_perplexity,
    spatial_word_scores,
    stable_sigmoid,
)
from polarscale.cli import main as cli_main
from polarscale.datasets import copy_tutorial_files

from helpers import make_doc, make_model, make_vocab


@pytest.fixture
def report(capsys):
    """Print one `[criterion N] name: PASS/FAIL` line outside pytest's
    capture so every verdict shows in plain `pytest -v` output."""
    def emit(num: int, name: str, ok: bool, detail: str = "") -> None:
        verdict = "PASS" if ok else "FAIL"
        line = f"[criterion {num}] {name}: {verdict}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print(line, flush=True)
        assert ok, line
    return emit


# ---------------------------------------------------------------------------
# Criterion 1: analytic gradients vs central finite differences
# ---------------------------------------------------------------------------

def test_c1_gradient_oracle(report):
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    n_vocab, k = 12, 8
    step = 1e-5
    n_triples = 120
    worst = 0.0
    for _ in range(n_triples):
        v = rng.normal(scale=0.4, size=(n_vocab, k))
        w = rng.normal(scale=0.4, size=(n_vocab, k))
        context = int(rng.integers(n_vocab))
        target = int(rng.integers(n_vocab))
        negatives = [int(x) for x in rng.integers(n_vocab, size=int(rng.integers(1, 6)))]
        dv, dw = negative_sampling_gradients(v, w, context, target, negatives)
        for mat, grad in ((v, dv), (w, dw)):
            fd = np.zeros_like(grad)
            it = np.nditer(mat, flags=["multi_index"])
            for _ in it:
                ij = it.multi_index
                orig = mat[ij]
                mat[ij] = orig + step
                hi = negative_sampling_loss(v, w, context, target, negatives)
                mat[ij] = orig - step
                lo = negative_sampling_loss(v, w, context, target, negatives)
                mat[ij] = orig
                fd[ij] = (hi - lo) / (2.0 * step)
            rel = float(np.max(np.abs(grad - fd)) / max(np.max(np.abs(fd)), 1e-12))
            worst = max(worst, rel)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-4 and elapsed < 10.0
    report(1, "gradient-oracle", ok,
            f"{n_triples} triples, worst rel err {worst:.2e}, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 2: dictionary scoring equals a brute-force count/N oracle
# ---------------------------------------------------------------------------

def test_c2_dictionary_equivalence(report):
    start = time.perf_counter()
    rng = np.random.default_rng(202)
    terms = [f"term{i:02d}" for i in range(40)] + ["hit", "hits", "hitter", "miss"]
    vocab = make_vocab(terms, freqs=list(range(len(terms), 0, -1)))
    dictionary = PatternSet(patterns=("hit*", "term00"), label="oracle")
    polarity = dictionary_word_scores(dictionary, vocab)
    matched = {"hit", "hits", "hitter", "term00"}

    docs = []
    for d in range(1000):
        n = int(rng.integers(1, 40))
        tokens = [terms[int(i)] for i in rng.integers(0, len(terms), size=n)]
        docs.append(make_doc(f"d{d:04d}", [tokens], vocab=vocab))

    table = score_documents(docs, polarity)
    by_id = {doc.id: doc for doc in docs}
    exact = 0
    for row in table.rows:
        doc = by_id[row.id]
        flat = [t for sent in doc.sentences for t in sent]
        oracle = sum(1 for t in flat if t in matched) / len(flat)
        if row.score == oracle:  # bitwise equality, both are count/N divisions
            exact += 1
    elapsed = time.perf_counter() - start
    ok = exact == len(table.rows) == 1000 and elapsed < 5.0
    report(2, "dictionary-count-oracle", ok,
            f"{exact}/1000 exactly equal, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 3: perplexity closed forms
# ---------------------------------------------------------------------------

def test_c3_perplexity_closed_forms(report):
    rng = np.random.default_rng(303)
    terms = ["s1", "s2", "s3", "x", "y"]

    # uniform q over M=3 seeds with single-token documents -> perplexity = M
    v = rng.normal(scale=0.5, size=(5, 4)).astype(np.float32)
    w = np.tile(rng.normal(scale=0.5, size=4).astype(np.float32), (5, 1))
    model = make_model(terms, v, w)
    seeds3 = make_seed_set(PatternSet(patterns=("s1", "s2", "s3")), model.vocab)
    docs = [make_doc(i, [[t]], vocab=model.vocab) for i, t in zip("abc", ["s1", "s2", "s3"])]
    err_m = abs(seed_perplexity(model, docs, seeds3).perplexity - 3.0)

    # a single seed is always predicted with probability 1 -> perplexity = 1
    w_free = rng.normal(scale=0.5, size=(5, 4)).astype(np.float32)
    model1 = make_model(terms, v, w_free)
    seeds1 = make_seed_set(PatternSet(patterns=("s1",)), model1.vocab)
    docs1 = [make_doc("a", [["s1", "x", "y"]], vocab=model1.vocab)]
    err_one = abs(seed_perplexity(model1, docs1, seeds1).perplexity - 1.0)

    # two-document hand case vs an independent recomputation
    seeds2 = make_seed_set(PatternSet(patterns=("s1", "s2")), model1.vocab)
    hand_docs = [
        make_doc("a", [["s1", "x", "s2", "s1"]], vocab=model1.vocab),
        make_doc("b", [["y", "s2", "y"]], vocab=model1.vocab),
    ]
    got = seed_perplexity(model1, hand_docs, seeds2).perplexity

    v64, w64 = v.astype(np.float64), w_free.astype(np.float64)
    idx = {t: i for i, t in enumerate(terms)}

    def q_of(counts: dict[str, int]) -> np.ndarray:
        total = sum(counts.values())
        q = np.array([
            sum(c * stable_sigmoid(float(v64[idx[t]] @ w64[idx[s]]))
                for t, c in counts.items()) / total
            for s in ("s1", "s2")
        ])
        return q / q.sum()

    ce, f_total = 0.0, 0.0
    for counts, n in (({"s1": 2, "x": 1, "s2": 1}, 4), ({"y": 2, "s2": 1}, 3)):
        q = q_of(counts)
        f = np.array([counts.get("s1", 0), counts.get("s2", 0)], dtype=float)
        ce += float((f / n) @ np.log(q))
        f_total += f.sum()
    err_hand = abs(got - math.exp(-ce / f_total))

    ok = err_m < 1e-9 and err_one < 1e-9 and err_hand < 1e-9
    report(3, "perplexity-closed-forms", ok,
            f"|err| = {err_m:.1e} (M), {err_one:.1e} (M=1), {err_hand:.1e} (hand case)")


# ---------------------------------------------------------------------------
# Criterion 4: scaling invariants on random toy models
# ---------------------------------------------------------------------------

def test_c4_scaling_invariants(report):
    failures = []
    for trial in range(50):
        rng = np.random.default_rng(1000 + trial)
        n_vocab = int(rng.integers(5, 21))
        k = int(rng.integers(2, 9))
        terms = [f"w{i:02d}" for i in range(n_vocab)]
        v = rng.normal(scale=1.0, size=(n_vocab, k)).astype(np.float32)
        w = rng.normal(scale=1.0, size=(n_vocab, k)).astype(np.float32)
        model = make_model(terms, v, w)

        m = int(rng.integers(1, min(5, n_vocab + 1)))
        seed_terms = [terms[int(i)] for i in rng.choice(n_vocab, size=m, replace=False)]
        seeds = make_seed_set(PatternSet(patterns=tuple(seed_terms)), model.vocab)

        prob = probabilistic_word_scores(model, seeds)
        upper = float(np.abs(seeds.weights).sum()) / seeds.size
        if not (np.all(prob.scores > 0.0) and np.all(prob.scores < upper)):
            failures.append((trial, "probabilistic bound"))

        single = make_seed_set(PatternSet(patterns=(seed_terms[0],)), model.vocab)
        spatial = spatial_word_scores(model, single)
        seed_idx = model.vocab.index(seed_terms[0])
        if int(np.argmax(spatial.scores)) != seed_idx:
            failures.append((trial, "spatial argmax"))
        if abs(spatial.scores[seed_idx] - 1.0) > 1e-9:
            failures.append((trial, "spatial self-similarity"))

        docs = []
        for d in range(10):
            n = int(rng.integers(1, 15))
            tokens = [terms[int(i)] for i in rng.integers(0, n_vocab, size=n)]
            docs.append(make_doc(f"d{d}", [tokens], vocab=model.vocab))
        for polarity in (prob, spatial):
            table = score_documents(docs, polarity)
            lo, hi = float(np.min(polarity.scores)), float(np.max(polarity.scores))
            for row in table.rows:
                if not (lo - 1e-12 <= row.score <= hi + 1e-12):
                    failures.append((trial, "document score outside word range"))
                    break

        table = score_documents(docs, prob)
        doubled = combine_scores(table, table)
        for a, b in zip(table.rows, doubled.rows):
            if abs(a.score - b.score) > 1e-12:
                failures.append((trial, "combine(x,x) != x"))
                break

    ok = not failures
    report(4, "scaling-invariants", ok,
            "50 toy models" if ok else f"failed: {failures[:3]}")


# ---------------------------------------------------------------------------
# Criterion 5: truncated SVD vs dense oracle
# ---------------------------------------------------------------------------

def test_c5_svd_oracle(report):
    import scipy.sparse as sp
    from polarscale.svd import _randomized_svd

    worst_rel = 0.0
    for trial in range(5):
        rng = np.random.default_rng(500 + trial)
        dense = np.where(rng.random((50, 30)) < 0.15,
                         rng.integers(1, 6, size=(50, 30)), 0).astype(np.float64)
        dense[0, 0] = max(dense[0, 0], 1.0)  # never fully empty
        k = 10
        _, s, _ = _randomized_svd(sp.csr_matrix(dense), k, rng_seed=trial)
        s_ref = np.linalg.svd(dense, compute_uv=False)[:k]
        nonzero = s_ref > 1e-12
        rel = float(np.max(np.abs(s[nonzero] - s_ref[nonzero]) / s_ref[nonzero]))
        worst_rel = max(worst_rel, rel)

    rng = np.random.default_rng(555)
    rank1 = np.outer(rng.integers(1, 5, size=50).astype(float),
                     rng.integers(1, 5, size=30).astype(float))
    u, s, vt = _randomized_svd(sp.csr_matrix(rank1), 1, rng_seed=0)
    recon_err = float(np.max(np.abs((u * s) @ vt - rank1)))

    ok = worst_rel < 1e-6 and recon_err < 1e-9
    report(5, "svd-oracle", ok,
            f"worst singular-value rel err {worst_rel:.1e}, rank-1 recon err {recon_err:.1e}")


# ---------------------------------------------------------------------------
# Criteria 6 and 7: planted-corpus behavior (shared benchmark run)
# ---------------------------------------------------------------------------

BENCH_GRID = [
    W2VConfig(algorithm="sg", k=64, window=8, learning_rate=0.05, epochs=5, negatives=5),
    W2VConfig(algorithm="sg", k=16, window=8, learning_rate=0.05, epochs=5, negatives=5),
    W2VConfig(algorithm="cbow", k=64, window=4, learning_rate=0.05, epochs=5, negatives=5),
    W2VConfig(algorithm="sg", k=64, window=1, learning_rate=0.05, epochs=1, negatives=5),
    W2VConfig(algorithm="sg", k=16, window=1, learning_rate=0.05, epochs=1, negatives=5),
    W2VConfig(algorithm="cbow", k=64, window=4, learning_rate=0.05, epochs=1, negatives=5),
]


@pytest.fixture(scope="module")
def planted_benchmark():
    start = time.perf_counter()
    planted = make_planted_corpus(n_docs=2000, rng_seed=123)
    corpus, vocab = prepare_corpus(planted.documents, min_count=5)
    samples = sample_seed_sets(planted.dictionary, n_sets=10, set_size=5, rng_seed=77)
    rows = run_benchmark(corpus, vocab, planted.dictionary, samples,
                         BENCH_GRID, rng_seed=99)
    return rows, time.perf_counter() - start


def _rows_per_sample(rows, family):
    by_sample: dict[int, list] = {}
    for r in rows:
        if r.family == family:
            by_sample.setdefault(r.sample_id, []).append(r)
    return by_sample


def test_c6_synthetic_separation(planted_benchmark, report):
    rows, elapsed = planted_benchmark
    prob = _rows_per_sample(rows, "w2v-probabilistic")
    spat = _rows_per_sample(rows, "w2v-spatial")
    svd = _rows_per_sample(rows, "svd-spatial")
    # within each sample, w2v rows follow grid order; index 0 is the
    # well-trained skip-gram config
    prob_sg = statistics.median(prob[s][0].correlation for s in prob)
    spat_sg = statistics.median(spat[s][0].correlation for s in spat)
    svd_64 = statistics.median(r.correlation for s in svd for r in svd[s] if r.k == 64)
    ok = prob_sg > 0.5 and prob_sg > spat_sg and prob_sg > svd_64 and elapsed < 300.0
    report(6, "synthetic-separation", ok,
            f"median r: probabilistic-sg {prob_sg:.3f} > spatial-sg {spat_sg:.3f}, "
            f"svd {svd_64:.3f}; {elapsed:.0f}s")


def test_c7_perplexity_quality_association(planted_benchmark, report):
    rows, _ = planted_benchmark
    prob = _rows_per_sample(rows, "w2v-probabilistic")
    hits = 0
    for sample_id, sample_rows in prob.items():
        assert len(sample_rows) == len(BENCH_GRID)
        chosen = min(sample_rows, key=lambda r: r.perplexity)
        top_half_floor = sorted((r.correlation for r in sample_rows), reverse=True)[2]
        if chosen.correlation >= top_half_floor:
            hits += 1
    ok = hits >= 8
    report(7, "perplexity-quality-association", ok, f"{hits}/10 samples")


# ---------------------------------------------------------------------------
# Criterion 8: byte-identical reruns of train / optimize / evaluate
# ---------------------------------------------------------------------------

def test_c8_cli_determinism(tmp_path, report):
    copy_tutorial_files(tmp_path)
    corpus = str(tmp_path / "tutorial_corpus.jsonl")
    seeds = str(tmp_path / "seeds_achievement.txt")
    grid = tmp_path / "grid.txt"
    grid.write_text("algorithm=sg k=8 epochs=1 negatives=3\n"
                    "algorithm=cbow k=8 epochs=1 negatives=3\n")

    identical = {}

    # train twice through the actual console entry point
    for rep in ("a", "b"):
        proc = subprocess.run(
            [sys.executable, "-m", "polarscale.cli", "train",
             "--corpus", corpus, "--out", str(tmp_path / f"train_{rep}.bin"),
             "--k", "8", "--epochs", "1", "--min-count", "5", "--seed", "42",
             "--threads", "1"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    identical["train"] = (tmp_path / "train_a.bin").read_bytes() == \
        (tmp_path / "train_b.bin").read_bytes()

    for rep in ("a", "b"):
        assert cli_main(["optimize", "--corpus", corpus, "--grid", str(grid),
                         "--seeds", seeds, "--out", str(tmp_path / f"opt_{rep}.tsv"),
                         "--min-count", "5", "--seed", "42", "--threads", "1"]) == 0
    identical["optimize"] = (tmp_path / "opt_a.tsv").read_bytes() == \
        (tmp_path / "opt_b.tsv").read_bytes()

    for rep in ("a", "b"):
        assert cli_main(["evaluate", "--corpus", corpus,
                         "--model", str(tmp_path / "train_a.bin"),
                         "--seeds", seeds,
                         "--series-out", str(tmp_path / f"series_{rep}.tsv"),
                         "--min-count", "5", "--n-boot", "200", "--seed", "42"]) == 0
        assert cli_main(["evaluate", "--corpus", corpus,
                         "--dictionary", str(tmp_path / "dictionary" / "achievement.txt"),
                         "--grid", str(grid), "--samples", "2", "--sample-size", "3",
                         "--results-out", str(tmp_path / f"bench_{rep}.tsv"),
                         "--min-count", "5", "--seed", "42"]) == 0
    identical["evaluate-series"] = (tmp_path / "series_a.tsv").read_bytes() == \
        (tmp_path / "series_b.tsv").read_bytes()
    identical["evaluate-benchmark"] = (tmp_path / "bench_a.tsv").read_bytes() == \
        (tmp_path / "bench_b.tsv").read_bytes()

    ok = all(identical.values())
    detail = ", ".join(f"{k}={'ok' if v else 'DIFFERS'}" for k, v in identical.items())
    report(8, "byte-identical-reruns", ok, detail)


# ---------------------------------------------------------------------------
# Criterion 9: end-to-end tutorial with schema-validated exports
# ---------------------------------------------------------------------------

def test_c9_tutorial_end_to_end(tmp_path, report):
    start = time.perf_counter()
    copy_tutorial_files(tmp_path)
    corpus = str(tmp_path / "tutorial_corpus.jsonl")
    problems: list[str] = []

    n_docs = sum(1 for line in open(corpus, encoding="utf-8") if line.strip())
    if n_docs < 500:
        problems.append(f"bundled corpus has only {n_docs} documents")

    model_path = tmp_path / "model.bin"
    assert cli_main(["train", "--corpus", corpus, "--out", str(model_path),
                     "--k", "48", "--window", "5", "--epochs", "5",
                     "--min-count", "5", "--seed", "42"]) == 0

    tables = {}
    for concept in ("achievement", "health"):
        out = tmp_path / f"{concept}.tsv"
        words = tmp_path / f"{concept}_words.tsv"
        assert cli_main(["score", "--corpus", corpus, "--model", str(model_path),
                         "--seeds", str(tmp_path / f"seeds_{concept}.txt"),
                         "--out", str(out), "--word-scores", str(words)]) == 0
        tables[concept] = read_score_table(out)

        # word polarity schema: header + term/int/float rows, sorted descending
        lines = words.read_text(encoding="utf-8").splitlines()
        if lines[0] != "term\tfrequency\tscore":
            problems.append(f"{concept} word export header: {lines[0]!r}")
        scores = []
        for line in lines[1:]:
            term, freq, score = line.split("\t")
            int(freq)
            scores.append(float(score))
        if scores != sorted(scores, reverse=True):
            problems.append(f"{concept} word export not sorted")

    # score table schema
    for concept, table in tables.items():
        if len(table.rows) < 500:
            problems.append(f"{concept} scored only {len(table.rows)} documents")
        for row in table.rows:
            if not (0.0 < row.score < 1.0):
                problems.append(f"{concept} score out of (0,1): {row.id}")
                break
            if row.date is None or row.n_tokens < 1:
                problems.append(f"{concept} row missing date or tokens: {row.id}")
                break

    combined_path = tmp_path / "combined.tsv"
    assert cli_main(["score", "--combine", str(tmp_path / "achievement.tsv"),
                     str(tmp_path / "health.tsv"), "--out", str(combined_path)]) == 0
    combined = read_score_table(combined_path)
    ach = tables["achievement"].scores_by_id()
    hea = tables["health"].scores_by_id()
    for row in combined.rows[:50]:
        want = math.sqrt(ach[row.id] * hea[row.id])
        if abs(row.score - want) > 1e-9:
            problems.append(f"combined score mismatch for {row.id}")
            break

    series_path = tmp_path / "series.tsv"
    figures = tmp_path / "figures"
    assert cli_main(["evaluate", "--corpus", corpus, "--model", str(model_path),
                     "--seeds", str(tmp_path / "seeds_achievement.txt"),
                     "--groups", "riverside=riverside",
                     "--groups", "hillcrest=hillcrest",
                     "--series-out", str(series_path), "--min-count", "5",
                     "--seed", "42", "--figures", str(figures)]) == 0
    points = read_series(series_path)
    if len(points) < 100:
        problems.append(f"series has only {len(points)} points")
    if not {p.group for p in points} >= {"riverside", "hillcrest"}:
        problems.append("series is missing a town group")
    for p in points:
        if not (p.lower <= p.value <= p.upper or
                math.isclose(p.lower, p.value) or math.isclose(p.value, p.upper)):
            problems.append(f"band violation at {p.date} {p.group}")
            break
    if not (figures / "series.png").exists():
        problems.append("series figure missing")

    elapsed = time.perf_counter() - start
    if elapsed >= 120.0:
        problems.append(f"pipeline took {elapsed:.0f}s")
    ok = not problems
    report(9, "tutorial-end-to-end", ok,
            f"{n_docs} docs, {elapsed:.0f}s" if ok else "; ".join(problems[:4]))
