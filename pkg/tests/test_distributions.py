import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from raidavail import _kernel
from raidavail.distributions import FailureDistribution, InvalidParameters, mean, sample


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize(
    "dist, expected",
    [
        (FailureDistribution.exponential(0.03), 33.333333333333336),
        (FailureDistribution.weibull(1.0, 50.0), 50.0),
        # 100 * Gamma(1.5) = 100 * sqrt(pi) / 2
        (FailureDistribution.weibull(2.0, 100.0), 88.62269254527580),
    ],
)
def test_mean(dist, expected):
    assert mean(dist) == pytest.approx(expected, rel=1e-12)
    assert dist.mean() == mean(dist)


def test_exponential_sample_mean():
    x = sample(FailureDistribution.exponential(0.1), rng(1), size=200_000)
    assert x.mean() == pytest.approx(10.0, rel=0.01)


def test_weibull_shape_one_is_exponential():
    w = sample(FailureDistribution.weibull(1.0, 100.0), rng(2), size=100_000)
    e = sample(FailureDistribution.exponential(0.01), rng(3), size=100_000)
    assert w.mean() == pytest.approx(100.0, rel=0.02)
    assert e.mean() == pytest.approx(100.0, rel=0.02)
    assert stats.ks_2samp(w, e).pvalue > 0.01


def test_weibull_from_mean_matches_gamma_mean():
    dist = FailureDistribution.weibull_from_mean(1e6, shape=0.71)
    # independent gamma evaluation
    assert dist.scale * special.gamma(1 + 1 / 0.71) == pytest.approx(1e6, rel=1e-12)
    x = sample(dist, rng(4), size=1_000_000)
    assert x.mean() == pytest.approx(1e6, rel=0.02)


def test_ks_exponential_below_one_percent_critical_value():
    dist = FailureDistribution.exponential(1e-5)
    x = sample(dist, rng(5), size=100_000)
    d = stats.kstest(x, dist.cdf).statistic
    assert d < 1.628 / math.sqrt(x.size)


def test_reproducible():
    dist = FailureDistribution.weibull(0.71, 1000.0)
    assert np.array_equal(sample(dist, rng(9), size=1000), sample(dist, rng(9), size=1000))
    assert sample(dist, rng(9)) == sample(dist, rng(9))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "exponential", "rate": 0.0},
        {"kind": "exponential", "rate": -1.0},
        {"kind": "exponential"},
        {"kind": "weibull", "shape": 0.0, "scale": 1.0},
        {"kind": "weibull", "shape": 1.0, "scale": -2.0},
        {"kind": "weibull", "shape": 1.0},
        {"kind": "lognormal", "rate": 1.0},
    ],
)
def test_invalid_parameters_rejected_at_construction(kwargs):
    with pytest.raises(InvalidParameters):
        FailureDistribution(**kwargs)


def test_from_dict_forms():
    assert FailureDistribution.from_dict({"kind": "exponential", "rate": 1e-5}) == FailureDistribution.exponential(1e-5)
    w = FailureDistribution.from_dict({"kind": "weibull", "shape": 0.71, "mean_hours": 1e6})
    assert w.mean() == pytest.approx(1e6)
    assert FailureDistribution.from_dict(w.to_dict()) == w


@settings(max_examples=50, deadline=None)
@given(
    shape=st.floats(0.2, 5.0),
    scale=st.floats(1e-3, 1e7),
    seed=st.integers(0, 2**32 - 1),
)
def test_samples_positive_and_finite(shape, scale, seed):
    x = sample(FailureDistribution.weibull(shape, scale), rng(seed), size=500)
    assert np.all(np.isfinite(x)) and np.all(x > 0)
    y = sample(FailureDistribution.exponential(1.0 / scale), rng(seed))
    assert math.isfinite(y) and y > 0


def test_kernel_stream_is_uniform_and_keyed():
    s = np.empty(4, dtype=np.uint64)
    _kernel.seed_stream(123, 7, s)
    u = np.array([_kernel.next_uniform(s) for _ in range(50_000)])
    assert np.all((u > 0) & (u < 1))
    assert stats.kstest(u, "uniform").pvalue > 0.01

    s2 = np.empty(4, dtype=np.uint64)
    _kernel.seed_stream(123, 7, s2)
    again = [_kernel.next_uniform(s2) for _ in range(5)]
    _kernel.seed_stream(123, 8, s2)
    other = [_kernel.next_uniform(s2) for _ in range(5)]
    assert again == u[:5].tolist()
    assert other != again
