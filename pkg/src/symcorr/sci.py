"""Symbolic correlation integral (SCI) and Renyi-2 permutation entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .errors import DomainError, InsufficientDataError, InvalidInputError
from .patterns import MAX_ORDER, MIN_ORDER, PatternCounts, _check_order, counts_from_codes, window_codes

PROB_TOL = 1e-12


@dataclass(frozen=True)
class SciEstimate:
    d: int
    n: int
    s_value: float
    h1_series: np.ndarray
    pattern_counts: PatternCounts

    @property
    def renyi2(self) -> float:
        return renyi2_from_sci(self.s_value)


def sci_u_statistic(series, d: int = 3) -> SciEstimate:
    """U-statistic estimate of the SCI over the ``N = m - d + 1`` windows.

    Uses the count identity ``sum_pi c_pi (c_pi - 1) / (N (N - 1))``, which
    equals the pairwise mean of pattern-equality indicators. ``h1_series[i]``
    is the leave-one-out share of other windows matching window ``i``.
    """
    d = _check_order(d)
    codes = window_codes(series, d)
    n = codes.size
    if n < 2:
        raise InsufficientDataError(f"need at least two windows, got {n}")
    pc = counts_from_codes(codes, d)
    matches = sum(c * (c - 1) for c in pc.counts.values())
    s_value = matches / (n * (n - 1))
    if d <= 8:
        dense = np.bincount(codes, minlength=math.factorial(d))
        per_window = dense[codes]
    else:
        lookup = pc.counts
        per_window = np.fromiter((lookup[int(c)] for c in codes), dtype=np.int64, count=n)
    h1 = (per_window - 1) / (n - 1)
    return SciEstimate(d=d, n=n, s_value=s_value, h1_series=h1, pattern_counts=pc)


def renyi2_from_sci(s: float) -> float:
    if not s > 0:
        raise DomainError("Renyi-2 entropy is undefined for SCI <= 0 (every window pattern distinct)")
    return -math.log(s)


def sci_theoretical_iid(d: int) -> float:
    if int(d) != d or not MIN_ORDER <= d <= MAX_ORDER:
        raise DomainError(f"order d must be in [{MIN_ORDER}, {MAX_ORDER}]")
    return 1.0 / math.factorial(int(d))


def _prob_vector(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("probability vector must be a non-empty 1-D sequence")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidInputError("probabilities must be finite and non-negative")
    if abs(arr.sum() - 1.0) > PROB_TOL:
        raise InvalidInputError(f"probabilities sum to {arr.sum()!r}, not 1")
    return arr


def _exact_prob_vector(p) -> list[Fraction] | None:
    """``p`` as Fractions when every entry is a Fraction or int, else None."""
    items = list(p) if not isinstance(p, np.ndarray) else None
    if not items or not all(isinstance(v, (Fraction, int)) for v in items):
        return None
    if any(v < 0 for v in items) or sum(items) != 1:
        raise InvalidInputError("exact probabilities must be non-negative and sum to 1")
    return [Fraction(v) for v in items]


def sci_population(p):
    """Population SCI ``sum p_pi^2`` of a pattern distribution.

    Fraction inputs are summed exactly and return a Fraction.
    """
    exact = _exact_prob_vector(p)
    if exact is not None:
        return sum(v * v for v in exact)
    arr = _prob_vector(p)
    return float(np.sum(arr * arr))


def h1_second_moment(p):
    exact = _exact_prob_vector(p)
    if exact is not None:
        return sum(v ** 3 for v in exact)
    arr = _prob_vector(p)
    return float(np.sum(arr ** 3))


def h1_variance(p):
    """Marginal variance of the projection ``h1``: ``sum p^3 - (sum p^2)^2``."""
    return h1_second_moment(p) - sci_population(p) ** 2


def uniformity_pvalue(counts: PatternCounts) -> float:
    """Chi-square p-value for uniform patterns; large values signal a near-degenerate variance.

    The chi-square reference ignores serial dependence, so treat it as a warning
    heuristic only.
    """
    dense = counts.dense()
    if counts.window_count < 5 * dense.size:
        return float("nan")
    return float(stats.chisquare(dense).pvalue)
