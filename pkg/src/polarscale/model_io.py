"""Binary model container and lossy text export.

Layout (all integers little-endian):

    magic                8 bytes  b"LSSW2V1\\0"
    vocab_size           uint32
    k                    uint32
    algorithm tag        uint32   0 = sg, 1 = cbow, 2 = svd
    window               uint32   0 for svd
    rng_seed             int64
    per term:            uint32 byte length, UTF-8 bytes, uint64 frequency
    V                    vocab_size * k float32, row-major
    W                    vocab_size * k float32, row-major (absent for svd)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .corpus import Vocabulary
from .embedding import (
    ALGORITHM_CBOW,
    ALGORITHM_SG,
    ALGORITHM_SVD,
    EmbeddingModel,
    SVDConfig,
    W2VConfig,
)
from .errors import DataError

MAGIC = b"LSSW2V1\x00"
_HEADER = struct.Struct("<IIIIq")
_TAGS = {ALGORITHM_SG: 0, ALGORITHM_CBOW: 1, ALGORITHM_SVD: 2}
_TAG_NAMES = {v: k for k, v in _TAGS.items()}


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    config = model.config
    window = getattr(config, "window", 0)
    tag = _TAGS[config.algorithm]
    parts = [MAGIC, _HEADER.pack(len(model.vocab), model.k, tag, window, config.rng_seed)]
    for term, freq in zip(model.vocab.terms, model.vocab.frequencies):
        raw = term.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<Q", freq))
    parts.append(np.ascontiguousarray(model.V, dtype="<f4").tobytes())
    if model.W is not None:
        parts.append(np.ascontiguousarray(model.W, dtype="<f4").tobytes())
    Path(path).write_bytes(b"".join(parts))


def load_model(path: str | Path) -> EmbeddingModel:
    path = Path(path)
    if not path.exists():
        raise DataError(f"model file not found: {path}")
    blob = path.read_bytes()
    if len(blob) < len(MAGIC) + _HEADER.size or blob[: len(MAGIC)] != MAGIC:
        raise DataError(f"not a model container (bad magic): {path}")
    vocab_size, k, tag, window, rng_seed = _HEADER.unpack_from(blob, len(MAGIC))
    if tag not in _TAG_NAMES:
        raise DataError(f"unknown algorithm tag {tag} in {path}")
    algorithm = _TAG_NAMES[tag]
    offset = len(MAGIC) + _HEADER.size
    terms: list[str] = []
    freqs: list[int] = []
    try:
        for _ in range(vocab_size):
            (length,) = struct.unpack_from("<I", blob, offset)
            offset += 4
            terms.append(blob[offset : offset + length].decode("utf-8"))
            offset += length
            (freq,) = struct.unpack_from("<Q", blob, offset)
            freqs.append(freq)
            offset += 8
    except struct.error as exc:
        raise DataError(f"truncated model container: {path}") from exc
    n_matrices = 1 if algorithm == ALGORITHM_SVD else 2
    if len(blob) - offset != n_matrices * vocab_size * k * 4:
        raise DataError(f"truncated or oversized model container: {path}")
    vocab = Vocabulary(terms, freqs, min_count=1)
    v = np.frombuffer(blob, dtype="<f4", count=vocab_size * k, offset=offset).reshape(vocab_size, k).copy()
    offset += vocab_size * k * 4
    if algorithm == ALGORITHM_SVD:
        w = None
        config: W2VConfig | SVDConfig = SVDConfig(k=k, rng_seed=rng_seed)
    else:
        w = np.frombuffer(blob, dtype="<f4", count=vocab_size * k, offset=offset).reshape(vocab_size, k).copy()
        config = W2VConfig(algorithm=algorithm, k=k, window=window, rng_seed=rng_seed)
    return EmbeddingModel(vocab=vocab, V=v, W=w, config=config)


def export_text(model: EmbeddingModel, path: str | Path) -> None:
    """Lossy inspection export: one line per term with its K input-layer values."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for i, term in enumerate(model.vocab.terms):
            values = " ".join(format(float(x), ".6g") for x in model.V[i])
            fh.write(f"{term} {values}\n")
