"""Shared fixtures: one mid-size planted corpus and one trained model.

Session scope keeps the numba-compiled training path warm and amortizes the
corpus build across test modules.
"""

from __future__ import annotations

import pytest

from polarscale import (
    W2VConfig,
    load_tutorial_corpus,
    make_planted_corpus,
    prepare_corpus,
    train_word2vec,
)


@pytest.fixture(scope="session")
def planted_small():
    return make_planted_corpus(n_docs=260, rng_seed=7)


@pytest.fixture(scope="session")
def prepared_small(planted_small):
    corpus, vocab = prepare_corpus(planted_small.documents, min_count=5)
    return corpus, vocab


@pytest.fixture(scope="session")
def sg_model(prepared_small):
    corpus, vocab = prepared_small
    config = W2VConfig(algorithm="sg", k=24, window=5, learning_rate=0.05,
                       epochs=3, negatives=5, rng_seed=11)
    return train_word2vec(corpus, vocab, config)


@pytest.fixture(scope="session")
def tutorial_docs():
    return load_tutorial_corpus()
