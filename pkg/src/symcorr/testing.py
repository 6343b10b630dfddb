"""Two-sample tests for equality of data-generating processes.

``sci_two_sample_test`` compares symbolic correlation integrals. The
competitors are the two-sample Kolmogorov-Smirnov test and a randomized
spectral-density test in the Jentsch-Pauly style.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InsufficientDataError, InvalidInputError
from .sci import sci_u_statistic
from .variance import BARTLETT, DANIELL, KernelSpec, default_bandwidth, get_kernel, long_run_variance

METHODS = ("sci", "ks", "jp")
DENOMINATORS = ("rss", "sum")
KS_TERM_TOL = 1e-10


class DegenerateVarianceWarning(UserWarning):
    pass


@dataclass
class TestResult:
    method: str
    statistic: float
    p_value: float
    diagnostics: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def reject(self, alpha: float = 0.05) -> bool:
        return self.p_value <= alpha

    def to_dict(self) -> dict:
        stat = self.statistic
        return {
            "method": self.method,
            "statistic": stat if math.isfinite(stat) else ("inf" if stat > 0 else "-inf"),
            "p_value": self.p_value,
            "diagnostics": self.diagnostics,
        }


def standard_normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _bandwidth(rule, n):
    if rule is None:
        return default_bandwidth(n)
    if callable(rule):
        return float(rule(n))
    return float(rule)


def sci_two_sample_test(x, y, d: int = 3, kernel: KernelSpec | str = BARTLETT,
                        bandwidth: float | Callable[[int], float] | None = None,
                        denominator: str = "rss") -> TestResult:
    """SCI test ``sqrt(N) (S(X) - S(Y)) / (2 s)`` with a two-sided normal p-value.

    ``s`` is ``sqrt(sigma2(X) + sigma2(Y))`` for ``denominator="rss"``, the
    standard deviation of the difference of two independent estimators. With
    ``denominator="sum"`` it is ``sigma(X) + sigma(Y)``, which is conservative
    (by up to a factor sqrt(2) on the statistic).

    ``N`` is the common window count. When both long-run variances are
    degenerate, equal SCIs give statistic 0 and p = 1, differing SCIs an
    infinite statistic with p = 0 and ``diagnostics["degenerate"]`` set.
    """
    if denominator not in DENOMINATORS:
        raise InvalidInputError(f"denominator must be one of {DENOMINATORS}")
    kernel = get_kernel(kernel)
    est_x, est_y = sci_u_statistic(x, d), sci_u_statistic(y, d)
    if est_x.n != est_y.n:
        raise InvalidInputError(f"window counts differ ({est_x.n} vs {est_y.n}); series must have equal length")
    n = est_x.n
    b = _bandwidth(bandwidth, n)
    lrv_x = long_run_variance(est_x.h1_series, est_x.s_value, kernel, b)
    lrv_y = long_run_variance(est_y.h1_series, est_y.s_value, kernel, b)
    diff = est_x.s_value - est_y.s_value
    diag = {
        "d": d,
        "n_windows": n,
        "sci_x": est_x.s_value,
        "sci_y": est_y.s_value,
        "sigma2_x": lrv_x.sigma2_hat,
        "sigma2_y": lrv_y.sigma2_hat,
        "raw_sigma2_x": lrv_x.raw_value,
        "raw_sigma2_y": lrv_y.raw_value,
        "degenerate_x": lrv_x.degenerate,
        "degenerate_y": lrv_y.degenerate,
        "bandwidth": b,
        "kernel": kernel.name,
        "denominator": denominator,
        "degenerate": False,
    }
    if denominator == "rss":
        denom = 2.0 * math.sqrt(lrv_x.sigma2_hat + lrv_y.sigma2_hat)
    else:
        denom = 2.0 * (lrv_x.sigma + lrv_y.sigma)
    if lrv_x.degenerate and lrv_y.degenerate:
        diag["degenerate"] = True
        if diff == 0:
            return TestResult("sci", 0.0, 1.0, diag)
        warnings.warn("both long-run variances are degenerate and the SCIs differ; "
                      "statistic is infinite", DegenerateVarianceWarning, stacklevel=2)
        return TestResult("sci", math.copysign(math.inf, diff), 0.0, diag)
    stat = math.sqrt(n) * diff / denom
    # 2 (1 - Phi(|z|)) written via erfc to avoid cancellation in the tail
    p = min(1.0, math.erfc(abs(stat) / math.sqrt(2.0)))
    return TestResult("sci", stat, p, diag)


def ks_statistic(x, y) -> float:
    """Exact ``sup |F_n - G_m|``: the EDFs are compared at every pooled sample point."""
    a, b = np.sort(np.asarray(x, dtype=float)), np.sort(np.asarray(y, dtype=float))
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def kolmogorov_sf(lam: float) -> float:
    """``P(sup |B(t)| > lam)`` for a Brownian bridge ``B``."""
    if lam <= 0:
        return 1.0
    if lam < 1.0:
        # theta-function form; the alternating series converges slowly here
        s = 0.0
        k = 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8 * lam * lam))
            s += term
            if term < KS_TERM_TOL:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2 * math.pi) / lam * s))
    s = 0.0
    k = 1
    while True:
        term = 2.0 * math.exp(-2.0 * k * k * lam * lam)
        s += term if k % 2 == 1 else -term
        if term < KS_TERM_TOL:
            break
        k += 1
    return min(1.0, max(0.0, s))


def ks_two_sample(x, y) -> TestResult:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.size == 0 or y.size == 0:
        raise InvalidInputError("KS test needs two non-empty samples")
    n, m = x.size, y.size
    ks = ks_statistic(x, y)
    lam = math.sqrt(n * m / (n + m)) * ks
    return TestResult("ks", ks, kolmogorov_sf(lam), {"n_x": n, "n_y": m, "scaled_statistic": lam})


def periodogram(x) -> np.ndarray:
    """``I(w_k) = |sum_t (x_t - mean) e^{-i t w_k}|^2 / (2 pi n)`` for ``k = 1..n//2``."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4:
        raise InsufficientDataError("periodogram needs at least 4 observations")
    dft = np.fft.rfft(x - x.mean())
    return np.abs(dft[1:n // 2 + 1]) ** 2 / (2 * math.pi * n)


def fourier_frequencies(n: int) -> np.ndarray:
    return 2 * math.pi * np.arange(1, n // 2 + 1) / n


def default_jp_bandwidth(n: int) -> float:
    return 2 * math.pi * n ** -0.25


def smoothing_matrix(n: int, h: float, kernel: KernelSpec = DANIELL) -> np.ndarray:
    """Row-normalised weights ``K_h(w_k - w_l)`` over the Fourier frequencies."""
    w = fourier_frequencies(n)
    weights = np.asarray(kernel((w[:, None] - w[None, :]) / h), dtype=float)
    sums = weights.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise InvalidInputError("smoothing bandwidth too small: some frequency has no weight")
    return weights / sums


def jp_spectral_test(x, y, h: float | None = None, kernel: KernelSpec | str = DANIELL,
                     reps: int = 499, seed=0) -> TestResult:
    """Spectral L2 test with a randomization p-value.

    Each replicate swaps the two periodogram ordinates at every Fourier
    frequency independently with probability 1/2.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.size != y.size:
        raise InvalidInputError("JP test needs equal-length series")
    if reps < 199:
        raise InvalidInputError("JP test needs at least 199 randomization replicates")
    kernel = get_kernel(kernel)
    n = x.size
    if h is None:
        h = default_jp_bandwidth(n)
    W = smoothing_matrix(n, h, kernel)
    ix, iy = periodogram(x), periodogram(y)
    scale = 1.0 / (n * math.sqrt(h))

    def stat_of(diff):
        sm = W @ diff
        return scale * np.sum(sm * sm, axis=0)

    observed = float(stat_of(ix - iy))
    rng = np.random.Generator(np.random.Philox(seed))
    signs = np.where(rng.random((ix.size, reps)) < 0.5, -1.0, 1.0)
    # swapping I_X and I_Y at a frequency flips the sign of their difference
    replicates = stat_of((ix - iy)[:, None] * signs)
    exceed = int(np.sum(replicates >= observed))
    p = (1 + exceed) / (reps + 1)
    if observed == 0.0:
        p = 1.0
    return TestResult("jp", observed, p, {"n": n, "h": h, "kernel": kernel.name,
                                          "reps": reps, "exceedances": exceed})


def run_test(method: str, x, y, d: int = 3, **options) -> TestResult:
    if method == "sci":
        return sci_two_sample_test(x, y, d, **options)
    if method == "ks":
        return ks_two_sample(x, y)
    if method == "jp":
        return jp_spectral_test(x, y, **options)
    raise InvalidInputError(f"unknown method {method!r}; choose from {METHODS}")
