"""Sentence-term matrix construction and truncated SVD word vectors.

This is the spatial-only baseline: word vectors are the term-side factor of a
rank-K SVD of the (sparse) sentence-term matrix, scaled by the singular
values. The solver is randomized subspace iteration with a fixed seed, so
results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import TokenizedDocument, Vocabulary
from .embedding import EmbeddingModel, SVDConfig
from .errors import ConfigError, DataError

POWER_ITERATIONS = 8
OVERSAMPLING = 10


@dataclass
class SentenceTermMatrix:
    """Sparse nonnegative matrix: one row per sentence with at least one
    vocabulary term, one column per vocabulary term."""

    matrix: sp.csr_matrix
    vocab: Vocabulary
    weighting: str

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def build_sentence_term_matrix(
    corpus: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    weighting: str = "count",
) -> SentenceTermMatrix:
    """Count vocabulary terms per sentence across the whole corpus.

    ``weighting`` is either raw counts or 1 + ln(count). Sentences without
    any vocabulary term are omitted.
    """
    if weighting not in ("count", "log-count"):
        raise ConfigError(f"weighting must be 'count' or 'log-count', got {weighting!r}")
    if len(vocab) == 0:
        raise DataError("cannot build a sentence-term matrix with an empty vocabulary")
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    row = 0
    for doc in corpus:
        for sent in doc.sentences:
            counts: dict[int, int] = {}
            for token in sent:
                idx = vocab.get(token)
                if idx is not None:
                    counts[idx] = counts.get(idx, 0) + 1
            if not counts:
                continue
            for idx in sorted(counts):
                c = counts[idx]
                rows.append(row)
                cols.append(idx)
                data.append(float(c) if weighting == "count" else 1.0 + np.log(c))
            row += 1
    if row == 0:
        raise DataError("no sentence contains a vocabulary term")
    matrix = sp.csr_matrix((data, (rows, cols)), shape=(row, len(vocab)))
    return SentenceTermMatrix(matrix=matrix, vocab=vocab, weighting=weighting)


def _randomized_svd(matrix, k: int, rng_seed: int,
                    n_power_iterations: int = POWER_ITERATIONS,
                    oversample: int = OVERSAMPLING) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rank-k SVD by randomized subspace iteration (Halko-style).

    Returns (U, s, Vt) with orthonormal U columns / Vt rows and singular
    values in non-increasing order, sign-canonicalized so that each row of Vt
    has a positive entry of largest magnitude.
    """
    n_rows, n_cols = matrix.shape
    rng = np.random.default_rng(rng_seed)
    n_random = min(k + oversample, min(n_rows, n_cols))
    sketch = rng.standard_normal((n_cols, n_random))
    basis = matrix @ sketch
    basis, _ = np.linalg.qr(np.asarray(basis))
    for _ in range(n_power_iterations):
        projected, _ = np.linalg.qr(np.asarray(matrix.T @ basis))
        basis, _ = np.linalg.qr(np.asarray(matrix @ projected))
    small = np.asarray(basis.T @ matrix)
    u_small, s, vt = np.linalg.svd(small, full_matrices=False)
    u = basis @ u_small
    u, s, vt = u[:, :k], s[:k], vt[:k]
    # canonical sign: largest-magnitude term loading positive per component
    flip = np.sign(vt[np.arange(vt.shape[0]), np.argmax(np.abs(vt), axis=1)])
    flip[flip == 0] = 1.0
    return u * flip, s, vt * flip[:, None]


def truncated_svd(stm: SentenceTermMatrix, k: int, rng_seed: int) -> np.ndarray:
    """Word vectors from the top-k SVD components: rows of Vt.T scaled by the
    singular values, shape (|vocab|, k)."""
    n_rows, n_cols = stm.shape
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if k > min(n_rows, n_cols):
        raise ConfigError(
            f"k={k} exceeds the rank bound min(sentences={n_rows}, terms={n_cols})"
        )
    _, s, vt = _randomized_svd(stm.matrix, k, rng_seed)
    return (vt.T * s).astype(np.float32)


def train_svd_model(
    corpus: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    config: SVDConfig,
) -> EmbeddingModel:
    """Build the sentence-term matrix and wrap its truncated SVD as a model.

    The result has no output-layer weights, so only spatial scoring applies.
    """
    stm = build_sentence_term_matrix(corpus, vocab, config.weighting)
    vectors = truncated_svd(stm, config.k, config.rng_seed)
    return EmbeddingModel(vocab=vocab, V=vectors, W=None, config=config)
