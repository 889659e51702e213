"""Small builders shared across test modules."""

from __future__ import annotations

import datetime as dt

import numpy as np

from polarscale import (
    EmbeddingModel,
    TokenizedDocument,
    Vocabulary,
    W2VConfig,
    negative_sampling_loss,
)


def make_vocab(terms: list[str], freqs: list[int] | None = None) -> Vocabulary:
    """Vocabulary with the given term order (frequencies default descending)."""
    if freqs is None:
        freqs = list(range(len(terms) + 1, 1, -1))
    return Vocabulary(terms, freqs)


def make_model(
    terms: list[str],
    v: np.ndarray,
    w: np.ndarray | None,
    freqs: list[int] | None = None,
    config: W2VConfig | None = None,
) -> EmbeddingModel:
    """Hand-built model with explicit V / W matrices."""
    v = np.asarray(v, dtype=np.float32)
    if w is not None:
        w = np.asarray(w, dtype=np.float32)
    if config is None:
        config = W2VConfig(algorithm="sg", k=v.shape[1], window=2,
                           learning_rate=0.05, epochs=1, negatives=1)
    return EmbeddingModel(vocab=make_vocab(terms, freqs), V=v, W=w, config=config)


def fd_gradients(
    v: np.ndarray,
    w: np.ndarray,
    context: int,
    target: int,
    negatives: list[int],
    step: float = 1e-5,
) -> tuple[np.ndarray, np.ndarray]:
    """Central finite differences of the negative-sampling loss over every
    entry of V and W (dense, float64)."""
    dv = np.zeros_like(v, dtype=np.float64)
    dw = np.zeros_like(w, dtype=np.float64)
    for mat, grad in ((v, dv), (w, dw)):
        it = np.nditer(mat, flags=["multi_index"])
        for _ in it:
            ij = it.multi_index
            orig = mat[ij]
            mat[ij] = orig + step
            hi = negative_sampling_loss(v, w, context, target, negatives)
            mat[ij] = orig - step
            lo = negative_sampling_loss(v, w, context, target, negatives)
            mat[ij] = orig
            grad[ij] = (hi - lo) / (2.0 * step)
    return dv, dw


def make_doc(
    doc_id: str,
    sentences: list[list[str]],
    date: dt.date | None = None,
    tags: tuple[str, ...] = (),
    vocab: Vocabulary | None = None,
) -> TokenizedDocument:
    """TokenizedDocument with counts/totals derived from the sentences."""
    counts: dict[str, int] = {}
    for sent in sentences:
        for t in sent:
            counts[t] = counts.get(t, 0) + 1
    return TokenizedDocument(
        id=doc_id,
        sentences=sentences,
        term_counts=counts,
        total_tokens=sum(counts.values()),
        date=date,
        tags=tags,
        vocab=vocab,
    )
