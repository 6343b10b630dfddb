"""Symbolic correlation integral and Renyi-2 permutation entropy for time series."""

__version__ = "0.1.0"

from .dgp import DgpSpec, simulate  # noqa: E402
from .patterns import ordinal_pattern, pattern_counts  # noqa: E402
from .sci import renyi2_from_sci, sci_u_statistic  # noqa: E402
from .testing import jp_spectral_test, ks_two_sample, sci_two_sample_test  # noqa: E402
from .variance import long_run_variance  # noqa: E402

__all__ = [
    "DgpSpec",
    "simulate",
    "ordinal_pattern",
    "pattern_counts",
    "sci_u_statistic",
    "renyi2_from_sci",
    "long_run_variance",
    "sci_two_sample_test",
    "ks_two_sample",
    "jp_spectral_test",
]
