import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from qcf.exceptions import DomainError
from qcf.model import (
    LinearModel,
    QGaussianParams,
    Regime,
    cdf_direct,
    cf_linear_combination,
    cf_standard,
    cf_tqg,
    characteristic_function,
    derive_params,
    pdf_direct,
    sigma_from_tsallis_beta,
    support,
)

qs = st.one_of(st.floats(-200.0, 2.99), st.just(1.0), st.just(2.0))
params = st.builds(QGaussianParams, st.floats(-5, 5), st.floats(0.01, 10), qs)


def test_derive_params_examples():
    d = derive_params(QGaussianParams(0, 1, 0))
    assert d.regime is Regime.BOUNDED and d.theta == 2 and d.a == pytest.approx(math.sqrt(2))
    d = derive_params(QGaussianParams(0, 1, 2))
    assert d.regime is Regime.HEAVY and d.nu == 1 and d.b == pytest.approx(math.sqrt(2))
    d = derive_params(QGaussianParams(0, 1, 1))
    assert d.regime is Regime.GAUSSIAN and d.theta is None and d.nu is None
    assert derive_params(QGaussianParams(0, 1, 1 + 1e-13)).regime is Regime.GAUSSIAN


@pytest.mark.parametrize("bad", [dict(sigma=0.0), dict(sigma=-1.0), dict(q=3.0), dict(q=3.5),
                                 dict(q=3 - 1e-7), dict(mu=math.inf), dict(q=math.nan)])
def test_invalid_params(bad):
    kw = {**dict(mu=0.0, sigma=1.0, q=1.0), **bad}
    with pytest.raises(DomainError):
        QGaussianParams(**kw)


def test_q_message_names_the_bound():
    with pytest.raises(DomainError, match="q < 3"):
        QGaussianParams(0, 1, 3.5)


def test_sigma_from_beta():
    assert sigma_from_tsallis_beta(2.0) == pytest.approx(0.5)
    assert sigma_from_tsallis_beta(0.5) == pytest.approx(1.0)
    assert sigma_from_tsallis_beta(5.0) == pytest.approx(0.3162278, abs=1e-7)
    with pytest.raises(DomainError):
        sigma_from_tsallis_beta(0.0)


def test_support_examples():
    lo, hi = support(QGaussianParams(0, 3, -100))
    assert hi == pytest.approx(3 * math.sqrt(2 / 101)) and lo == -hi
    assert hi == pytest.approx(0.4221585, abs=1e-7)
    assert support(QGaussianParams(0, 1, 1)) is None
    assert support(QGaussianParams(1, 1, 0.5)) == pytest.approx((-1.0, 3.0))


def test_cf_standard_examples():
    assert cf_standard(1.0, 1.0) == pytest.approx(0.6065306597126334, rel=1e-15)
    assert cf_standard(1.0, 2.0) == pytest.approx(0.2431167344342142, rel=1e-13)
    assert cf_standard(0.7, 0.0).real == pytest.approx(float(special.hyp0f1(2.5, -0.245)), rel=1e-14)
    assert cf_standard(0.0, -50.0) == 1.0


def test_cf_tqg_examples():
    p = QGaussianParams(2, 1, 1)
    assert cf_tqg(1.0, p) == pytest.approx(np.exp(2j) * math.exp(-0.5), rel=1e-15)
    assert cf_tqg(1.0, QGaussianParams(0, 2, 2)) == pytest.approx(math.exp(-2 * math.sqrt(2)), rel=1e-13)
    assert cf_tqg(0.0, p) == 1.0


def test_cf_linear_combination_examples():
    g = LinearModel.from_arrays([1, 1], [0, 0], [1, 1], [1, 1])
    assert cf_linear_combination(1.0, g) == pytest.approx(math.exp(-1.0), rel=1e-15)
    terms = [(1 / 3, QGaussianParams(0, 3, -100)), (1 / 3, QGaussianParams(0, 2, -10)),
             (1 / 3, QGaussianParams(0, 1, 0))]
    m = LinearModel(tuple(terms))
    expected = np.prod([cf_tqg(c * 1.0, p) for c, p in terms])
    assert cf_linear_combination(1.0, m) == pytest.approx(expected, rel=1e-15)
    p = QGaussianParams(1, 2, 1.5)
    single = LinearModel(((1.0, p),))
    t = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(cf_linear_combination(t, single), cf_tqg(t, p), rtol=1e-15)


def test_linear_model_validation():
    with pytest.raises(DomainError):
        LinearModel(())
    with pytest.raises(DomainError):
        LinearModel.from_arrays([0.0], [0], [1], [1])
    with pytest.raises(DomainError):
        LinearModel.from_arrays([math.nan], [0], [1], [1])


@settings(max_examples=300, deadline=None)
@given(p=params, t=st.floats(-1e3, 1e3))
def test_cf_axioms(p, t):
    v = cf_tqg(t, p)
    assert cf_tqg(0.0, p) == 1.0
    assert abs(v) <= 1.0 + 1e-15
    assert cf_tqg(-t, p) == pytest.approx(np.conj(v), abs=1e-15)
    c = cf_tqg(t, QGaussianParams(0.0, p.sigma, p.q))
    assert c.imag == 0.0 and cf_tqg(-t, QGaussianParams(0.0, p.sigma, p.q)) == c


@pytest.mark.parametrize("t", np.linspace(-10, 10, 41))
def test_regime_continuity(t):
    g = math.exp(-0.5 * t * t)
    for q in (1 - 1e-6, 1 + 1e-6):
        assert abs(cf_standard(t, q).real - g) <= 1e-4


@pytest.mark.parametrize("q", [-20.0, -1.0, 0.0, 0.5, 0.9])
def test_bounded_branch_matches_beta_integral(q):
    p = QGaussianParams(0.0, 1.0, q)
    lo, hi = support(p)
    for t in (0.3, 1.0, 2.5, 7.0, 15.0):
        re, _ = integrate.quad(lambda x: math.cos(t * x) * pdf_direct(x, p), lo, hi,
                               epsabs=1e-13, epsrel=1e-12, limit=200)
        assert abs(cf_standard(t, q).real - re) <= 1e-8


@pytest.mark.parametrize("t", [0.01, 0.5, 1.0, 3.0, 10.0, 40.0])
def test_heavy_branch_half_integer_nu(t):
    # nu = 1 at q = 2; nu = 3 at q = 3/2
    b = math.sqrt(2.0)
    assert cf_standard(t, 2.0).real == pytest.approx(math.exp(-b * t), rel=1e-10)
    b = math.sqrt(2.0 / 1.5)
    z = b * math.sqrt(3.0) * t
    assert cf_standard(t, 1.5).real == pytest.approx((1 + z) * math.exp(-z), rel=1e-10)


def test_heavy_branch_underflows_to_zero():
    assert cf_standard(1e6, 1.5) == 0.0


def test_pdf_direct_examples():
    assert pdf_direct(0.0, QGaussianParams(0, 1, 1)) == pytest.approx(0.3989422804014327, rel=1e-15)
    assert pdf_direct(5.0, QGaussianParams(0, 1, 0)) == 0.0
    assert pdf_direct(0.0, QGaussianParams(0, 1, 2)) == pytest.approx(1 / (math.pi * math.sqrt(2)), rel=1e-14)


@pytest.mark.parametrize("q", [-100.0, -2.0, 0.0, 0.7, 1.0, 1.3, 2.0, 2.5, 2.9])
def test_pdf_direct_normalised(q):
    p = QGaussianParams(0.5, 1.5, q)
    s = support(p)
    if s is not None:
        total, _ = integrate.quad(lambda x: pdf_direct(x, p), *s, epsabs=1e-12, limit=200)
    else:
        total = sum(integrate.quad(lambda x: pdf_direct(x, p), a, b, epsabs=1e-13, limit=500)[0]
                    for a, b in [(-np.inf, p.mu), (p.mu, np.inf)])
    assert abs(total - 1.0) <= 1e-8


def test_cdf_direct_matches_pdf():
    p = QGaussianParams(0.0, 1.0, 1.7)
    val, _ = integrate.quad(lambda x: pdf_direct(x, p), -np.inf, 1.3)
    assert cdf_direct(1.3, p) == pytest.approx(val, abs=1e-10)


def test_charfn_metadata():
    m = LinearModel.from_arrays([1, -2], [1, 0], [1, 0.5], [0, 1.5])
    cf = characteristic_function(m)
    assert cf.center == pytest.approx(1.0)
    assert cf.support is None
    lo, hi = cf.tail_bounds(1e-4)
    assert lo < 1.0 < hi
    assert cf(0.0) == 1.0
    bounded = characteristic_function(LinearModel.from_arrays([1, 1], [0, 1], [1, 1], [0, -1]))
    assert bounded.support == pytest.approx((-math.sqrt(2), 2 + math.sqrt(2)))
