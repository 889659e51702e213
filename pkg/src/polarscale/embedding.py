"""Shallow masked-word prediction models and their training.

The trainer learns two matrices over the vocabulary: input-layer values ``V``
and output-layer weights ``W``. For a context word ``i`` and a target word
``j``, the predicted probability of ``j`` occurring near ``i`` is
``sigmoid(V_i . W_j)``. Training maximizes that probability for observed
pairs and minimizes it for randomly drawn negative targets, with plain SGD
(skip-gram) or averaged-window SGD (CBOW).

The hot loop is compiled with numba; a single-threaded run is bit-for-bit
reproducible from the configured seed. An optional lock-free multi-threaded
mode trades that determinism for speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit, prange, get_num_threads, set_num_threads

from .corpus import TokenizedDocument, Vocabulary
from .errors import ConfigError, DataError, OutOfVocabularyError, TrainingDivergedError
from .util import derive_seed, stable_sigmoid

ALGORITHM_SG = "sg"
ALGORITHM_CBOW = "cbow"
ALGORITHM_SVD = "svd"

NEGATIVE_DISTRIBUTION_POWER = 0.75
LEARNING_RATE_FLOOR_FACTOR = 1e-4


@dataclass(frozen=True)
class W2VConfig:
    """Hyperparameters for word2vec-style training."""

    algorithm: str = ALGORITHM_SG
    k: int = 100
    window: int = 10
    learning_rate: float = 0.05
    epochs: int = 10
    negatives: int = 5
    rng_seed: int = 0
    subsample_threshold: float | None = None

    def __post_init__(self):
        if self.algorithm not in (ALGORITHM_SG, ALGORITHM_CBOW):
            raise ConfigError(f"algorithm must be 'sg' or 'cbow', got {self.algorithm!r}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.negatives < 1:
            raise ConfigError(f"negatives must be >= 1, got {self.negatives}")
        if self.subsample_threshold is not None and self.subsample_threshold <= 0:
            raise ConfigError("subsample_threshold must be > 0 when set")

    def canonical(self) -> str:
        """Stable one-line form, also used to derive per-config training seeds."""
        parts = [
            f"algorithm={self.algorithm}",
            f"k={self.k}",
            f"window={self.window}",
            f"lr={self.learning_rate!r}",
            f"epochs={self.epochs}",
            f"negatives={self.negatives}",
        ]
        if self.subsample_threshold is not None:
            parts.append(f"subsample={self.subsample_threshold!r}")
        return " ".join(parts)


@dataclass(frozen=True)
class SVDConfig:
    """Marker config for models whose vectors come from a truncated SVD."""

    k: int = 100
    weighting: str = "count"
    rng_seed: int = 0

    algorithm: str = field(default=ALGORITHM_SVD, init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.weighting not in ("count", "log-count"):
            raise ConfigError(f"weighting must be 'count' or 'log-count', got {self.weighting!r}")


@dataclass
class EmbeddingModel:
    """Trained model: vocabulary plus the V and W matrices.

    ``W`` is None for SVD-based models, which support only spatial scoring.
    """

    vocab: Vocabulary
    V: np.ndarray
    W: np.ndarray | None
    config: W2VConfig | SVDConfig
    loss_per_epoch: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.V.shape[1]

    @property
    def has_output_weights(self) -> bool:
        return self.W is not None

    def require_index(self, term: str) -> int:
        idx = self.vocab.get(term)
        if idx is None:
            raise OutOfVocabularyError(term)
        return idx


def _token_stream(corpus: Sequence[TokenizedDocument], vocab: Vocabulary) -> tuple[np.ndarray, np.ndarray]:
    """Flatten corpus sentences into one index array plus sentence offsets."""
    tokens: list[int] = []
    offsets = [0]
    for doc in corpus:
        for sent in doc.sentences:
            ids = [vocab.get(t, -1) for t in sent]
            ids = [i for i in ids if i >= 0]
            if len(ids) >= 2:
                tokens.extend(ids)
                offsets.append(len(tokens))
    return np.asarray(tokens, dtype=np.int32), np.asarray(offsets, dtype=np.int64)


def _negative_cdf(vocab: Vocabulary) -> np.ndarray:
    freq = np.asarray(vocab.frequencies, dtype=np.float64)
    return np.cumsum(freq ** NEGATIVE_DISTRIBUTION_POWER)


def _keep_probabilities(vocab: Vocabulary, threshold: float | None) -> tuple[np.ndarray, bool]:
    freq = np.asarray(vocab.frequencies, dtype=np.float64)
    if threshold is None:
        return np.ones_like(freq), False
    frac = freq / freq.sum()
    keep = (np.sqrt(frac / threshold) + 1.0) * (threshold / frac)
    return np.minimum(keep, 1.0), True


def init_matrices(vocab_size: int, k: int, rng_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Reference initialization: V uniform in [-0.5/k, 0.5/k), W all zeros."""
    rng = np.random.default_rng(rng_seed)
    v = (rng.random((vocab_size, k), dtype=np.float32) - np.float32(0.5)) / np.float32(k)
    w = np.zeros((vocab_size, k), dtype=np.float32)
    return v, w


def train_word2vec(
    corpus: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    config: W2VConfig,
    threads: int = 1,
) -> EmbeddingModel:
    """Train V and W on the corpus.

    With ``threads=1`` (default) the result is bit-identical for identical
    inputs and seed. ``threads > 1`` switches to lock-free parallel updates
    over sentence shards; results are then only statistically reproducible.
    """
    if len(vocab) == 0:
        raise DataError("cannot train on an empty vocabulary")
    if len(vocab) < 2:
        raise DataError("training requires at least 2 distinct vocabulary terms")
    tokens, offsets = _token_stream(corpus, vocab)
    if tokens.shape[0] < 2 or offsets.shape[0] < 2:
        raise DataError("corpus too short to train: no sentence has 2 in-vocabulary tokens")

    v, w = init_matrices(len(vocab), config.k, config.rng_seed)
    neg_cdf = _negative_cdf(vocab)
    keep_prob, use_subsample = _keep_probabilities(vocab, config.subsample_threshold)
    loss_out = np.zeros(config.epochs, dtype=np.float64)
    max_sentence = int(np.max(np.diff(offsets)))
    stream_seed = derive_seed(config.rng_seed, "train-stream")
    is_sg = config.algorithm == ALGORITHM_SG
    floor = config.learning_rate * LEARNING_RATE_FLOOR_FACTOR

    if threads <= 1:
        bad_epoch = _train_stream(
            tokens, offsets, v, w, neg_cdf, keep_prob, use_subsample, is_sg,
            config.window, config.negatives, config.learning_rate, floor,
            config.epochs, np.uint64(stream_seed), max_sentence, loss_out,
        )
    else:
        previous = get_num_threads()
        set_num_threads(min(threads, previous))
        try:
            bad_epoch = _train_stream_parallel(
                tokens, offsets, v, w, neg_cdf, keep_prob, use_subsample, is_sg,
                config.window, config.negatives, config.learning_rate, floor,
                config.epochs, np.uint64(stream_seed), max_sentence, loss_out,
                threads,
            )
        finally:
            set_num_threads(previous)

    if bad_epoch >= 0:
        raise TrainingDivergedError(f"training diverged: non-finite values at epoch {bad_epoch}")
    return EmbeddingModel(vocab=vocab, V=v, W=w, config=config, loss_per_epoch=[float(x) for x in loss_out])


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------

def predict_probability(model: EmbeddingModel, context: str, target: str) -> float:
    """sigmoid(V_context . W_target): probability of the target occurring
    near the context word."""
    if not model.has_output_weights:
        raise ConfigError("probabilistic prediction requires output-layer weights")
    i = model.require_index(context)
    j = model.require_index(target)
    r = float(np.dot(model.V[i].astype(np.float64), model.W[j].astype(np.float64)))
    return stable_sigmoid(r)


def context_probabilities(model: EmbeddingModel, target: str, top_n: int) -> list[tuple[str, float]]:
    """Score every vocabulary term as a context for ``target`` and return the
    ``top_n`` highest-probability contexts, ties broken by vocabulary order."""
    if top_n < 1:
        raise ConfigError(f"top_n must be >= 1, got {top_n}")
    if not model.has_output_weights:
        raise ConfigError("probabilistic prediction requires output-layer weights")
    j = model.require_index(target)
    probs = stable_sigmoid(model.V.astype(np.float64) @ model.W[j].astype(np.float64))
    order = np.argsort(-probs, kind="stable")[:top_n]
    return [(model.vocab.terms[i], float(probs[i])) for i in order]


# ---------------------------------------------------------------------------
# Training objective (used directly by gradient-checking tests)
# ---------------------------------------------------------------------------

def negative_sampling_loss(v: np.ndarray, w: np.ndarray, context: int, target: int,
                           negatives: Sequence[int]) -> float:
    """Loss of one (context, target) pair with the given negative draws:
    -log sigmoid(V_c . W_t) - sum_n log sigmoid(-V_c . W_n)."""
    vc = np.asarray(v[context], dtype=np.float64)
    loss = float(np.logaddexp(0.0, -np.dot(vc, w[target])))
    for n in negatives:
        loss += float(np.logaddexp(0.0, np.dot(vc, w[n])))
    return loss


def negative_sampling_gradients(v: np.ndarray, w: np.ndarray, context: int, target: int,
                                negatives: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`negative_sampling_loss` with respect to V
    and W, returned as full (dense) matrices matching the parameter shapes."""
    vc = np.asarray(v[context], dtype=np.float64)
    dv = np.zeros_like(v, dtype=np.float64)
    dw = np.zeros_like(w, dtype=np.float64)
    f_pos = stable_sigmoid(float(np.dot(vc, w[target])))
    dv[context] += (f_pos - 1.0) * np.asarray(w[target], dtype=np.float64)
    dw[target] += (f_pos - 1.0) * vc
    for n in negatives:
        f_neg = stable_sigmoid(float(np.dot(vc, w[n])))
        dv[context] += f_neg * np.asarray(w[n], dtype=np.float64)
        dw[n] += f_neg * vc
    return dv, dw


# ---------------------------------------------------------------------------
# Compiled kernels
# ---------------------------------------------------------------------------

@njit(inline="always")
def _next_uniform(state):
    # splitmix64; returns (new_state, float64 in [0, 1))
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(inline="always")
def _sigmoid_scalar(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    ex = math.exp(x)
    return ex / (1.0 + ex)


@njit(inline="always")
def _softplus(x):
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


@njit(nogil=True, cache=True)
def _draw_negative(state, neg_cdf, total_mass, target):
    # Redraw until the sample differs from the target; bounded for safety.
    for _ in range(10000):
        state, u = _next_uniform(state)
        n = np.searchsorted(neg_cdf, u * total_mass, side="right")
        if n >= neg_cdf.shape[0]:
            n = neg_cdf.shape[0] - 1
        if n != target:
            return state, n
    return state, -1


@njit(nogil=True, cache=True)
def _process_sentence(sent, sent_len, v, w, neg_cdf, total_mass, is_sg,
                      window, negatives, alpha, state, h, neu1e):
    """One SGD pass over a single sentence. Returns (rng state, summed loss)."""
    k = v.shape[1]
    loss = 0.0
    for pos in range(sent_len):
        target = sent[pos]
        lo = pos - window
        if lo < 0:
            lo = 0
        hi = pos + window + 1
        if hi > sent_len:
            hi = sent_len
        if is_sg:
            for cpos in range(lo, hi):
                if cpos == pos:
                    continue
                ctx = sent[cpos]
                # positive update
                r = 0.0
                for kk in range(k):
                    r += v[ctx, kk] * w[target, kk]
                g = (1.0 - _sigmoid_scalar(r)) * alpha
                loss += _softplus(-r)
                for kk in range(k):
                    neu1e[kk] = g * w[target, kk]
                    w[target, kk] += g * v[ctx, kk]
                # negative updates
                for _ in range(negatives):
                    state, neg = _draw_negative(state, neg_cdf, total_mass, target)
                    if neg < 0:
                        continue
                    r = 0.0
                    for kk in range(k):
                        r += v[ctx, kk] * w[neg, kk]
                    g = -_sigmoid_scalar(r) * alpha
                    loss += _softplus(r)
                    for kk in range(k):
                        neu1e[kk] += g * w[neg, kk]
                        w[neg, kk] += g * v[ctx, kk]
                for kk in range(k):
                    v[ctx, kk] += neu1e[kk]
        else:
            # CBOW: hidden layer = mean of context vectors around the target
            cw = 0
            for kk in range(k):
                h[kk] = 0.0
            for cpos in range(lo, hi):
                if cpos == pos:
                    continue
                ctx = sent[cpos]
                for kk in range(k):
                    h[kk] += v[ctx, kk]
                cw += 1
            if cw == 0:
                continue
            for kk in range(k):
                h[kk] /= cw
            r = 0.0
            for kk in range(k):
                r += h[kk] * w[target, kk]
            g = (1.0 - _sigmoid_scalar(r)) * alpha
            loss += _softplus(-r)
            for kk in range(k):
                neu1e[kk] = g * w[target, kk]
                w[target, kk] += g * h[kk]
            for _ in range(negatives):
                state, neg = _draw_negative(state, neg_cdf, total_mass, target)
                if neg < 0:
                    continue
                r = 0.0
                for kk in range(k):
                    r += h[kk] * w[neg, kk]
                g = -_sigmoid_scalar(r) * alpha
                loss += _softplus(r)
                for kk in range(k):
                    neu1e[kk] += g * w[neg, kk]
                    w[neg, kk] += g * h[kk]
            for cpos in range(lo, hi):
                if cpos == pos:
                    continue
                ctx = sent[cpos]
                for kk in range(k):
                    v[ctx, kk] += neu1e[kk]
    return state, loss


@njit(nogil=True, cache=True)
def _subsample_sentence(tokens, start, end, keep_prob, use_subsample, state, scratch):
    m = 0
    for i in range(start, end):
        t = tokens[i]
        if use_subsample:
            state, u = _next_uniform(state)
            if u > keep_prob[t]:
                continue
        scratch[m] = t
        m += 1
    return state, m


@njit(nogil=True, cache=True)
def _matrices_finite(v, w):
    for i in range(v.shape[0]):
        for kk in range(v.shape[1]):
            if not np.isfinite(v[i, kk]) or not np.isfinite(w[i, kk]):
                return False
    return True


@njit(nogil=True, cache=True)
def _train_stream(tokens, offsets, v, w, neg_cdf, keep_prob, use_subsample, is_sg,
                  window, negatives, alpha0, alpha_floor, epochs, seed,
                  max_sentence, loss_out):
    """Deterministic single-threaded training. Returns -1, or the epoch index
    at which non-finite values appeared."""
    n_sentences = offsets.shape[0] - 1
    total_positions = float(tokens.shape[0]) * epochs
    total_mass = neg_cdf[neg_cdf.shape[0] - 1]
    k = v.shape[1]
    scratch = np.empty(max_sentence, dtype=np.int32)
    h = np.zeros(k, dtype=np.float64)
    neu1e = np.zeros(k, dtype=np.float64)
    state = seed
    processed = 0.0
    for epoch in range(epochs):
        epoch_loss = 0.0
        for s in range(n_sentences):
            alpha = alpha0 * (1.0 - processed / total_positions)
            if alpha < alpha_floor:
                alpha = alpha_floor
            start = offsets[s]
            end = offsets[s + 1]
            state, m = _subsample_sentence(tokens, start, end, keep_prob, use_subsample, state, scratch)
            processed += end - start
            if m >= 2:
                state, loss = _process_sentence(scratch, m, v, w, neg_cdf, total_mass,
                                                is_sg, window, negatives, alpha, state, h, neu1e)
                epoch_loss += loss
        loss_out[epoch] = epoch_loss
        if not np.isfinite(epoch_loss) or not _matrices_finite(v, w):
            return epoch
    return -1


@njit(nogil=True, parallel=True, cache=True)
def _train_stream_parallel(tokens, offsets, v, w, neg_cdf, keep_prob, use_subsample, is_sg,
                           window, negatives, alpha0, alpha_floor, epochs, seed,
                           max_sentence, loss_out, shards):
    """Lock-free parallel training: sentence shards race on the shared
    matrices. Each shard runs its own epochs with a shard-local learning-rate
    schedule. Returns -1, or the last epoch index if values went non-finite."""
    n_sentences = offsets.shape[0] - 1
    total_mass = neg_cdf[neg_cdf.shape[0] - 1]
    k = v.shape[1]
    shard_losses = np.zeros((shards, epochs), dtype=np.float64)
    for shard in prange(shards):
        s_lo = shard * n_sentences // shards
        s_hi = (shard + 1) * n_sentences // shards
        if s_hi > s_lo:
            shard_tokens = float(offsets[s_hi] - offsets[s_lo]) * epochs
            scratch = np.empty(max_sentence, dtype=np.int32)
            h = np.zeros(k, dtype=np.float64)
            neu1e = np.zeros(k, dtype=np.float64)
            state = seed + np.uint64(0x9E3779B97F4A7C15) * np.uint64(shard + 1)
            processed = 0.0
            for epoch in range(epochs):
                epoch_loss = 0.0
                for s in range(s_lo, s_hi):
                    alpha = alpha0 * (1.0 - processed / shard_tokens)
                    if alpha < alpha_floor:
                        alpha = alpha_floor
                    start = offsets[s]
                    end = offsets[s + 1]
                    state, m = _subsample_sentence(tokens, start, end, keep_prob,
                                                   use_subsample, state, scratch)
                    processed += end - start
                    if m >= 2:
                        state, loss = _process_sentence(scratch, m, v, w, neg_cdf, total_mass,
                                                        is_sg, window, negatives, alpha,
                                                        state, h, neu1e)
                        epoch_loss += loss
                shard_losses[shard, epoch] = epoch_loss
    for epoch in range(epochs):
        loss_out[epoch] = shard_losses[:, epoch].sum()
    if not _matrices_finite(v, w):
        return epochs - 1
    return -1
