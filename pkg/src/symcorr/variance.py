"""Kernel (HAC) long-run variance of the h1 projection series."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InsufficientDataError, InvalidInputError

DEGENERACY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Lag-window kernel. ``support`` bounds ``|x|`` outside which the kernel is 0 (None: unbounded)."""

    name: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    support: float | None = 1.0

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))


def bartlett_kernel(x):
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) <= 1.0, 1.0 - np.abs(x), 0.0)
    return float(out) if out.ndim == 0 else out


def parzen_kernel(x):
    a = np.abs(np.asarray(x, dtype=float))
    out = np.where(a <= 0.5, 1 - 6 * a**2 + 6 * a**3, np.where(a <= 1.0, 2 * (1 - a) ** 3, 0.0))
    return float(out) if out.ndim == 0 else out


def daniell_kernel(x):
    out = np.where(np.abs(np.asarray(x, dtype=float)) <= 1.0, 1.0, 0.0)
    return float(out) if out.ndim == 0 else out


BARTLETT = KernelSpec("bartlett", bartlett_kernel)
PARZEN = KernelSpec("parzen", parzen_kernel)
DANIELL = KernelSpec("daniell", daniell_kernel)
KERNELS = {k.name: k for k in (BARTLETT, PARZEN, DANIELL)}


def get_kernel(kernel) -> KernelSpec:
    if isinstance(kernel, KernelSpec):
        return kernel
    try:
        return KERNELS[kernel]
    except KeyError:
        raise InvalidInputError(f"unknown kernel {kernel!r}; choose from {sorted(KERNELS)}") from None


def check_kernel(kernel: KernelSpec, grid=None, atol: float = 1e-12) -> list[str]:
    """Check kernel(0) = 1, symmetry and the [-1, 1] range on a grid; return violations."""
    if grid is None:
        grid = np.linspace(0.0, 3.0, 301)
    grid = np.asarray(grid, dtype=float)
    problems = []
    if abs(float(kernel(0.0)) - 1.0) > atol:
        problems.append(f"kernel(0) = {float(kernel(0.0))}, expected 1")
    pos, neg = np.asarray(kernel(grid)), np.asarray(kernel(-grid))
    if np.max(np.abs(pos - neg)) > atol:
        problems.append("kernel is not symmetric")
    if np.max(np.abs(pos)) > 1 + atol:
        problems.append("kernel leaves [-1, 1]")
    return problems


def default_bandwidth(n: int) -> float:
    """Natural-log bandwidth ``log(n)``."""
    if n < 2:
        raise InvalidInputError("bandwidth rule needs n >= 2")
    return math.log(n)


@dataclass(frozen=True)
class LrvEstimate:
    sigma2_hat: float
    raw_value: float
    bandwidth: float
    kernel: str
    degenerate: bool
    n: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2_hat)


def _max_lag(kernel: KernelSpec, bandwidth: float, n: int) -> int:
    if kernel.support is None:
        return n - 1
    return min(n - 1, int(math.floor(kernel.support * bandwidth)))


def long_run_variance(h1, center: float, kernel=BARTLETT, bandwidth: float | None = None) -> LrvEstimate:
    """``(1/N) sum_{i,j} k((j-i)/b) (h1_i - c)(h1_j - c)`` grouped by lag.

    Only lags inside the kernel's support are visited, so the cost is
    ``O(N b)`` for compactly supported kernels.
    """
    kernel = get_kernel(kernel)
    e = np.asarray(h1, dtype=float) - center
    n = e.size
    if n < 2:
        raise InsufficientDataError("long-run variance needs at least two observations")
    if bandwidth is None:
        bandwidth = default_bandwidth(n)
    if not bandwidth > 0:
        raise InvalidInputError("bandwidth must be positive")
    raw = float(np.dot(e, e)) / n
    for lag in range(1, _max_lag(kernel, bandwidth, n) + 1):
        w = float(kernel(lag / bandwidth))
        if w != 0.0:
            raw += 2.0 * w * float(np.dot(e[:-lag], e[lag:])) / n
    degenerate = raw <= DEGENERACY_THRESHOLD
    return LrvEstimate(
        sigma2_hat=max(raw, 0.0),
        raw_value=raw,
        bandwidth=float(bandwidth),
        kernel=kernel.name,
        degenerate=degenerate,
        n=n,
    )


def sci_limit_sd(lrv: LrvEstimate) -> float:
    """Asymptotic standard deviation ``2 sigma`` of ``sqrt(N) (S_N - S)``."""
    return 2.0 * lrv.sigma


def log_sci_limit_sd(lrv: LrvEstimate, s_value: float) -> float:
    """Delta-method scale ``2 sigma / S`` for ``sqrt(N) (ln S_N - ln S)``."""
    if not s_value > 0:
        raise InvalidInputError("SCI must be positive for the log-scale variance")
    return 2.0 * lrv.sigma / s_value
