"""Small numeric and seeding helpers used throughout the package."""

from __future__ import annotations

import hashlib

import numpy as np


def stable_sigmoid(x):
    """Logistic function 1 / (1 + exp(-x)) in an overflow-safe branch form.

    Accepts scalars or arrays; always computes in float64. For x >= 0 uses
    1 / (1 + exp(-x)), otherwise exp(x) / (1 + exp(x)), so exp never receives
    a large positive argument.
    """
    arr = np.asarray(x, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def log_sigmoid(x):
    """log(sigmoid(x)) = -softplus(-x), computed without overflow or log(0)."""
    arr = np.asarray(x, dtype=np.float64)
    # -softplus(-x) = min(x, 0) - log1p(exp(-|x|))
    out = np.minimum(arr, 0.0) - np.log1p(np.exp(-np.abs(arr)))
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def derive_seed(base_seed: int, label: str) -> int:
    """Derive a reproducible sub-seed from a base seed and a purpose label.

    Hashes "{base_seed}:{label}" with SHA-256 and keeps 63 bits, so every
    consumer of randomness gets an independent, platform-stable stream.
    """
    digest = hashlib.sha256(f"{base_seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & 0x7FFFFFFFFFFFFFFF


def format_float(x: float) -> str:
    """Canonical float formatting for all tab-separated exports."""
    return format(x, ".12g")
