import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from qcf.exceptions import DomainError
from qcf.mcm import (
    McmOptions,
    coverage_indices,
    gamma_log,
    ks_statistic,
    propagate,
    sample_tqg,
    simulate,
)
from qcf.model import LinearModel, QGaussianParams, derive_params, support


def test_options_validation():
    with pytest.raises(DomainError, match=r"500 < 1000"):
        McmOptions(n_samples=500)
    for bad in (dict(seed=-1), dict(coverage_level=1.0), dict(n_chunks=0), dict(n_samples=1000.5)):
        with pytest.raises(DomainError):
            McmOptions(**bad)


def test_coverage_indices():
    assert coverage_indices(100000, 0.95) == (2499, 97499)
    assert coverage_indices(1000, 0.95) == (24, 974)
    lo, hi = coverage_indices(1001, 0.9)
    assert 0 <= lo < hi <= 1000


@pytest.mark.parametrize("q", [-50.0, 0.0, 0.6])
def test_bounded_draws_stay_in_support(q):
    p = QGaussianParams(1.0, 2.0, q)
    x = sample_tqg(p, 20000, 3)
    lo, hi = support(p)
    assert x.min() >= lo and x.max() <= hi


@pytest.mark.parametrize("q", [-2.0, 0.5, 1.0, 1.5, 2.0, 2.7])
def test_draws_follow_the_distribution(q):
    p = QGaussianParams(0.0, 1.0, q)
    x = np.sort(sample_tqg(p, 50000, 11))
    d = derive_params(p)
    if d.theta is not None:
        ref = stats.beta(d.theta, d.theta, loc=-d.a, scale=2 * d.a)
    elif d.nu is not None:
        ref = stats.t(d.nu, scale=d.b)
    else:
        ref = stats.norm()
    assert stats.kstest(x, ref.cdf).pvalue > 1e-4


def test_tiny_shape_gamma_stays_finite():
    lg = gamma_log(0.01, 10000, np.random.default_rng(0))
    assert np.all(np.isfinite(lg))
    # E[log G_a] = digamma(a)
    from scipy.special import digamma
    assert lg.mean() == pytest.approx(digamma(0.01), rel=0.05)


def test_nu_near_zero_sanity():
    # nu = 0.05: almost all mass in astronomically long tails, yet the median is ~0
    q = (3 + 0.05) / 1.05
    x = sample_tqg(QGaussianParams(0.0, 1.0, q), 100000, 5)
    assert np.isnan(x).sum() == 0
    assert abs(np.median(x)) < 0.1
    assert np.mean(x > 0) == pytest.approx(0.5, abs=0.01)


def test_determinism_and_chunks():
    m = LinearModel.from_arrays([1, 2], [0, 1], [1, 0.5], [0, 2])
    a = simulate(m, McmOptions(n_samples=5000, seed=7))
    b = simulate(m, McmOptions(n_samples=5000, seed=7))
    np.testing.assert_array_equal(a, b)
    c = simulate(m, McmOptions(n_samples=5000, seed=8))
    assert not np.array_equal(a, c)
    d = simulate(m, McmOptions(n_samples=5000, seed=7, n_chunks=4))
    e = simulate(m, McmOptions(n_samples=5000, seed=7, n_chunks=4))
    np.testing.assert_array_equal(d, e)


def test_order_insensitive():
    t1 = (1.0, QGaussianParams(0.0, 1.0, 0.0))
    t2 = (0.5, QGaussianParams(1.0, 2.0, 1.5))
    opts = McmOptions(n_samples=4000, seed=1)
    a = simulate(LinearModel((t1, t2)), opts)
    b = simulate(LinearModel((t2, t1)), opts)
    np.testing.assert_allclose(a, b, rtol=1e-15, atol=1e-15)


def test_repeated_terms_get_independent_streams():
    t = (1.0, QGaussianParams(0.0, 1.0, 1.0))
    y = simulate(LinearModel((t, t)), McmOptions(n_samples=20000, seed=0))
    assert np.std(y) == pytest.approx(math.sqrt(2), rel=0.03)


def test_propagate_normal():
    m = LinearModel.from_arrays([1.0], [0.0], [1.0], [1.0])
    res, sample = propagate(m, McmOptions(n_samples=100000, seed=0), return_sample=True)
    assert res.ci_lower == sample[2499] and res.ci_upper == sample[97499]
    assert res.ci_lower == pytest.approx(-1.96, abs=0.03)
    assert res.ci_upper == pytest.approx(1.96, abs=0.03)
    assert ks_statistic(sample, stats.norm.cdf) < 1.95 / math.sqrt(len(sample))
    assert set(res.to_dict()) >= {"ci_lower", "ci_upper", "sample_mean", "elapsed", "n_samples"}


def test_ks_statistic_exact():
    # one point at 0.5 against U(0, 1): D = 0.5
    assert ks_statistic([0.5], lambda x: x) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        ks_statistic([], lambda x: x)


@settings(max_examples=20, deadline=None)
@given(level=st.floats(0.5, 0.999), n=st.integers(1000, 10**6))
def test_coverage_indices_are_ordered(level, n):
    lo, hi = coverage_indices(n, level)
    assert 0 <= lo <= hi < n
    assert lo + 1 <= n * (1 - level) / 2 + 1
