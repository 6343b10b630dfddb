import numpy as np
import pytest

from symcorr.dgp import (
    DgpSpec,
    derive_seed,
    normal_innovations,
    simulate,
    stationary_variance,
    uniform_stream,
)
from symcorr.errors import InvalidInputError


def lag1_corr(x):
    x = x - x.mean()
    return float(np.dot(x[:-1], x[1:]) / np.dot(x, x))


def test_zero_innovations_give_zero_series():
    spec = DgpSpec("ma1", 0.5, 100, burn_in=10)
    assert np.all(simulate(spec, innovations=np.zeros(110)) == 0)


def test_recursions_by_hand():
    eps = np.array([1.0, -2.0, 0.5, 3.0])
    np.testing.assert_allclose(simulate(DgpSpec("ma1", 0.5, 4, burn_in=0), eps), [1.0, -1.5, -0.5, 3.25])
    np.testing.assert_allclose(simulate(DgpSpec("ar1", 0.5, 4, burn_in=0), eps),
                               [0.8, -1.2, -0.2, 2.3])
    x = simulate(DgpSpec("nlar", 0.5, 4, burn_in=0), eps)
    assert x[1] == pytest.approx(0.5 * 1.0 ** 0.8 - 2.0)
    assert x[2] == pytest.approx(0.5 * abs(x[1]) ** 0.8 + 0.5)
    a = simulate(DgpSpec("arch1", 0.5, 4, burn_in=0), eps)
    assert a[0] == 1.0
    assert a[1] == pytest.approx(np.sqrt(1 + 0.5 * 1.0) * -2.0)


def test_same_seed_same_output():
    spec = DgpSpec("arch1", 0.5, 500, seed=42)
    assert np.array_equal(simulate(spec), simulate(spec))
    assert not np.array_equal(simulate(spec), simulate(spec.with_seed(43)))


@pytest.mark.parametrize("model, theta", [("ar1", 1.5), ("ar1", -1.0), ("arch1", 1.0), ("arch1", -0.1),
                                          ("nlar", -0.5), ("garch", 0.5)])
def test_invalid_specs(model, theta):
    with pytest.raises(InvalidInputError):
        DgpSpec(model, theta)


def test_innovation_moments():
    z = normal_innovations(2024, 1_000_000)
    assert abs(z.mean()) < 0.005
    assert abs(z.var() - 1) < 0.01
    first = normal_innovations(7, 10)
    np.testing.assert_array_equal(first, normal_innovations(7, 10))


def test_uniforms_are_open_interval():
    u = uniform_stream(1, 100_000)
    assert u.min() > 0 and u.max() < 1


def test_stream_independence():
    n = 100_000
    a = normal_innovations(derive_seed(5, 0, 0), n)
    b = normal_innovations(derive_seed(5, 0, 1), n)
    c = normal_innovations(derive_seed(5, 1, 0), n)
    for u, v in ((a, b), (a, c), (b, c)):
        assert abs(np.corrcoef(u, v)[0, 1]) < 5 / np.sqrt(n)


@pytest.mark.parametrize("model", ["ma1", "ar1", "nlar", "arch1"])
def test_burn_in_reaches_stationarity(model):
    # lag-1 autocorrelation of the first 1000 retained points, pooled over runs,
    # against the tail of one long run
    head = np.mean([lag1_corr(simulate(DgpSpec(model, 0.5, 1000, seed=s))) for s in range(200)])
    tail = lag1_corr(simulate(DgpSpec(model, 0.5, 400_000, seed=999))[-200_000:])
    assert head == pytest.approx(tail, abs=0.02)


def test_closed_form_variances():
    assert stationary_variance("ar1", 0.5) == pytest.approx(0.64 / 0.75)
    assert stationary_variance("arch1", 0.5) == 2.0
    assert stationary_variance("ma1", 0.5) == 1.25
    with pytest.raises(InvalidInputError):
        stationary_variance("nlar", 0.5)
    x = simulate(DgpSpec("ma1", 0.5, 200_000, seed=3))
    assert x.var() == pytest.approx(1.25, rel=0.02)
