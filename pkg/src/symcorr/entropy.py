"""Shannon, Renyi and Tsallis entropies of finite probability vectors.

Zero entries follow the usual continuous extensions ``0 ln 0 = 0`` and
``0^alpha = 0`` for ``alpha > 0``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InvalidInputError
from .patterns import PatternCounts

PROB_TOL = 1e-12


def prob_vector(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("probability vector must be non-empty and one-dimensional")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise InvalidInputError("probabilities must lie in [0, 1]")
    if abs(arr.sum() - 1.0) > PROB_TOL:
        raise InvalidInputError(f"probabilities sum to {arr.sum()!r}, not 1")
    return arr


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0) or alpha == 1 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive, finite and != 1 (got {alpha}); use shannon() for alpha = 1")
    return float(alpha)


def _power_sum(p: np.ndarray, alpha: float) -> float:
    nz = p[p > 0]
    return float(np.sum(nz ** alpha))


def shannon(p) -> float:
    arr = prob_vector(p)
    nz = arr[arr > 0]
    return float(-np.sum(nz * np.log(nz)))


def renyi(p, alpha: float) -> float:
    """Renyi entropy ``ln(sum p^alpha) / (1 - alpha)``."""
    alpha = _check_alpha(alpha)
    arr = prob_vector(p)
    if alpha == 2:
        # same expression as -ln(sum p^2) so the Renyi-2 / SCI relation holds bit for bit
        return -math.log(float(np.sum(arr * arr)))
    return math.log(_power_sum(arr, alpha)) / (1.0 - alpha)


def tsallis(p, alpha: float) -> float:
    alpha = _check_alpha(alpha)
    arr = prob_vector(p)
    return (1.0 - _power_sum(arr, alpha)) / (alpha - 1.0)


def renyi_from_tsallis(t: float, alpha: float) -> float:
    """Map a Tsallis value to the Renyi entropy of the same vector."""
    alpha = _check_alpha(alpha)
    return math.log(1.0 - (alpha - 1.0) * t) / (1.0 - alpha)


def pattern_entropies(counts: PatternCounts, alphas=(2.0,)) -> dict:
    """Entropies of the empirical pattern distribution, zero-count patterns included."""
    freqs = counts.frequencies()
    out = {"shannon": shannon(freqs), "max": math.log(freqs.size)}
    for a in alphas:
        out[f"renyi_{a:g}"] = renyi(freqs, a)
        out[f"tsallis_{a:g}"] = tsallis(freqs, a)
    return out
