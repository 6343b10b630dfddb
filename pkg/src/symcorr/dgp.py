"""Simulators for the four benchmark processes (MA(1), AR(1), nonlinear AR(1), ARCH(1)).

Innovations come from numpy's Philox4x64 counter-based generator, seeded through
``SeedSequence`` so that replication streams are derived deterministically
from a root seed. Uniforms are mapped to normals by the inverse CDF, which
consumes exactly one 64-bit draw per variate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .errors import InvalidInputError

MODELS = ("ma1", "ar1", "nlar", "arch1")
# conventional DGP1-DGP4 numbering of the benchmark processes
DGP_NAMES = {1: "ma1", 2: "ar1", 3: "nlar", 4: "arch1"}
AR1_INNOVATION_SCALE = 0.8
NLAR_EXPONENT = 0.8
DEFAULT_BURN_IN = 1000
RNG_NAME = "numpy Philox4x64-10 + inverse-normal-CDF"
SEED_DERIVATION = "SeedSequence(root_seed, spawn_key=(replication, stream)); stream 0 = X, 1 = Y"


@dataclass(frozen=True)
class DgpSpec:
    model: str
    theta: float = 0.5
    n: int = 2000
    seed: int = 0
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidInputError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.n < 1:
            raise InvalidInputError("n must be positive")
        if self.burn_in < 0:
            raise InvalidInputError("burn_in must be non-negative")
        t = self.theta
        if not math.isfinite(t):
            raise InvalidInputError("theta must be finite")
        if self.model == "ar1" and not abs(t) < 1:
            raise InvalidInputError(f"ar1 needs |theta| < 1, got {t}")
        if self.model == "arch1" and not 0 <= t < 1:
            raise InvalidInputError(f"arch1 needs 0 <= theta < 1, got {t}")
        if self.model == "nlar" and t < 0:
            raise InvalidInputError(f"nlar needs theta >= 0, got {t}")

    def with_seed(self, seed) -> "DgpSpec":
        return replace(self, seed=seed)


def derive_seed(root_seed: int, replication: int, stream: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(root_seed, spawn_key=(replication, stream))


def _bit_generator(seed) -> np.random.Philox:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Philox(seed)


def uniform_stream(seed, count: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1) built from the top 53 bits of each raw draw."""
    raw = _bit_generator(seed).random_raw(count)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normal_innovations(seed, count: int) -> np.ndarray:
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    return ndtri(uniform_stream(seed, count))


def _ma1(eps, theta):
    x = eps.copy()
    x[1:] += theta * eps[:-1]
    return x


def _ar1(eps, theta):
    return lfilter([AR1_INNOVATION_SCALE], [1.0, -theta], eps)


def _nlar(eps, theta):
    out = np.empty_like(eps)
    prev = 0.0
    for t, e in enumerate(eps.tolist()):
        prev = theta * abs(prev) ** NLAR_EXPONENT + e
        out[t] = prev
    return out


def _arch1(eps, theta):
    out = np.empty_like(eps)
    prev = 0.0
    sqrt = math.sqrt
    for t, e in enumerate(eps.tolist()):
        prev = sqrt(1.0 + theta * prev * prev) * e
        out[t] = prev
    return out


_SIMULATORS = {"ma1": _ma1, "ar1": _ar1, "nlar": _nlar, "arch1": _arch1}


def simulate(spec: DgpSpec, innovations=None) -> np.ndarray:
    """Simulate ``spec.n`` values after discarding ``spec.burn_in`` from a zero start.

    ``innovations`` (length ``n + burn_in``) overrides the seeded normal stream.
    """
    total = spec.n + spec.burn_in
    if innovations is None:
        eps = normal_innovations(spec.seed, total)
    else:
        eps = np.asarray(innovations, dtype=float)
        if eps.shape != (total,):
            raise InvalidInputError(f"expected {total} innovations, got {eps.shape}")
    x = _SIMULATORS[spec.model](eps, float(spec.theta))
    return x[spec.burn_in:]


def stationary_variance(model: str, theta: float) -> float:
    """Closed-form unconditional variance, where one exists in closed form."""
    if model == "ma1":
        return 1.0 + theta**2
    if model == "ar1":
        return AR1_INNOVATION_SCALE**2 / (1.0 - theta**2)
    if model == "arch1":
        return 1.0 / (1.0 - theta)
    raise InvalidInputError(f"no closed-form variance for {model!r}")
