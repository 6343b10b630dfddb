"""Ordinal patterns of sliding windows, Lehmer encoding and counting.

Ties are broken by position: for ``x_j == x_k`` with ``j < k`` the earlier
value receives the smaller rank.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InsufficientDataError, InvalidInputError

MIN_ORDER = 2
MAX_ORDER = 10
# dense count arrays up to 8! = 40320 cells
DENSE_MAX_ORDER = 8

_FACTORIALS = [math.factorial(k) for k in range(MAX_ORDER + 1)]


def _check_order(d: int) -> int:
    if int(d) != d or not MIN_ORDER <= d <= MAX_ORDER:
        raise InvalidInputError(f"order d must be an integer in [{MIN_ORDER}, {MAX_ORDER}], got {d!r}")
    return int(d)


def _as_finite(x, what="series") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{what} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{what} contains non-finite values")
    return arr


@dataclass(frozen=True)
class OrdinalPattern:
    ranks: tuple[int, ...]

    def __post_init__(self):
        d = len(self.ranks)
        _check_order(d)
        if sorted(self.ranks) != list(range(1, d + 1)):
            raise InvalidInputError(f"ranks {self.ranks} are not a permutation of 1..{d}")

    @property
    def d(self) -> int:
        return len(self.ranks)

    @property
    def code(self) -> int:
        return encode_pattern(self)


def ordinal_pattern(x) -> OrdinalPattern:
    """Rank vector of ``x`` (ranks start at 1)."""
    arr = _as_finite(x, "window")
    _check_order(arr.size)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(arr.size, dtype=int)
    ranks[order] = np.arange(1, arr.size + 1)
    return OrdinalPattern(tuple(int(r) for r in ranks))


def encode_pattern(p: OrdinalPattern) -> int:
    """Lehmer code of the rank vector; the identity pattern maps to 0."""
    r = p.ranks
    d = len(r)
    code = 0
    for i in range(d):
        smaller_after = sum(1 for j in range(i + 1, d) if r[j] < r[i])
        code += smaller_after * _FACTORIALS[d - 1 - i]
    return code


def decode_pattern(code: int, d: int) -> OrdinalPattern:
    d = _check_order(d)
    if not 0 <= code < _FACTORIALS[d]:
        raise InvalidInputError(f"code {code} out of range for d={d}")
    available = list(range(1, d + 1))
    ranks = []
    for i in range(d):
        digit, code = divmod(code, _FACTORIALS[d - 1 - i])
        ranks.append(available.pop(digit))
    return OrdinalPattern(tuple(ranks))


def window_ranks(series, d: int) -> np.ndarray:
    """Rank vectors of all overlapping windows, shape ``(m - d + 1, d)``."""
    d = _check_order(d)
    x = _as_finite(series)
    if x.size < d:
        raise InsufficientDataError(f"series of length {x.size} has no window of order {d}")
    windows = sliding_window_view(x, d)
    order = np.argsort(windows, axis=1, kind="stable")
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(1, d + 1)[None, :], axis=1)
    return ranks


def window_codes(series, d: int) -> np.ndarray:
    """Lehmer code of every window's ordinal pattern, in window order."""
    ranks = window_ranks(series, d)
    d = ranks.shape[1]
    codes = np.zeros(ranks.shape[0], dtype=np.int64)
    for i in range(d - 1):
        smaller_after = (ranks[:, i + 1:] < ranks[:, i:i + 1]).sum(axis=1)
        codes += smaller_after * _FACTORIALS[d - 1 - i]
    return codes


@dataclass(frozen=True)
class PatternCounts:
    d: int
    window_count: int
    counts: dict[int, int] = field(repr=False)

    def dense(self) -> np.ndarray:
        """Counts as a length ``d!`` vector, zero-count patterns included."""
        out = np.zeros(_FACTORIALS[self.d], dtype=np.int64)
        for code, c in self.counts.items():
            out[code] = c
        return out

    def frequencies(self) -> np.ndarray:
        return self.dense() / self.window_count

    def by_pattern(self) -> dict[tuple[int, ...], int]:
        return {decode_pattern(c, self.d).ranks: n for c, n in sorted(self.counts.items())}


def counts_from_codes(codes: np.ndarray, d: int) -> PatternCounts:
    if d <= DENSE_MAX_ORDER:
        dense = np.bincount(codes, minlength=_FACTORIALS[d])
        nz = np.flatnonzero(dense)
        counts = {int(c): int(dense[c]) for c in nz}
    else:
        uniq, cnt = np.unique(codes, return_counts=True)
        counts = {int(c): int(n) for c, n in zip(uniq, cnt)}
    return PatternCounts(d=d, window_count=int(codes.size), counts=counts)


def pattern_counts(series, d: int) -> PatternCounts:
    return counts_from_codes(window_codes(series, d), _check_order(d))


def minimal_spread(x) -> float:
    """Smallest pairwise distance between the entries of ``x``."""
    arr = _as_finite(x, "vector")
    if arr.size < 2:
        raise InvalidInputError("minimal spread needs at least two values")
    # adjacent gaps of the sorted vector contain the global minimum
    return float(np.min(np.diff(np.sort(arr))))


def add_jitter(series, magnitude: float, seed: int = 0) -> np.ndarray:
    """Add uniform noise on ``[-magnitude, magnitude]`` to break ties in quantized data."""
    x = _as_finite(series)
    if magnitude <= 0:
        raise InvalidInputError("jitter magnitude must be positive")
    rng = np.random.Generator(np.random.Philox(seed))
    return x + rng.uniform(-magnitude, magnitude, size=x.size)
