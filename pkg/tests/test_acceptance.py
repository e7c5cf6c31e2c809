"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line with the measured value next to
its target; the lines are printed as they happen and again in the terminal
summary. Run directly (``python tests/test_acceptance.py``) or through
pytest.
"""

import math
import sys
import time

import numpy as np
import pytest

from oracles import ACCEPTANCE_LINES, oracle_cases, single
from qcf.inversion import InversionOptions, cdf_adaptive, invert_on_grid, quantile_adaptive
from qcf.mcm import McmOptions, propagate
from qcf.model import LinearModel, QGaussianParams, cf_linear_combination, characteristic_function
from qcf.modelspec import parse_grid_spec
from qcf.presets import preset
from qcf.specfun import bessel_j, bessel_k, hyp0f1
from qcf.workflow import compare, distribution

EXAMPLE4_TABLE = [0.87974, 0.96421, 0.98935, 0.99683, 0.99906, 0.99972, 0.99992, 0.99998, 0.99999]


def record(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    sys.__stdout__.write("\n" + line + "\n")
    sys.__stdout__.flush()
    return ok


def run_preset(name, **overrides):
    spec = preset(name)
    model = spec.model()
    x = parse_grid_spec(spec.x, support=model.support())
    opts = spec.inversion_options(**overrides)
    start = time.perf_counter()
    res = distribution(model, x, spec.probs, opts)
    return res, time.perf_counter() - start


def interval_check(name, target, tol):
    res, elapsed = run_preset(name)
    lo, hi = res.coverage.lower, res.coverage.upper
    dev = max(abs(lo - target[0]), abs(hi - target[1]))
    return lo, hi, dev, elapsed


def test_c1_example1_interval_and_runtime():
    lo, hi, dev, elapsed = interval_check("example1", (-0.3751, 0.3751), 5e-4)
    ok = dev <= 5e-4 and elapsed < 1.0
    record("C1 example1 interval", ok,
           f"[{lo:.7f}, {hi:.7f}] vs [-0.3751, 0.3751], max dev {dev:.2e} (tol 5e-4); "
           f"runtime {elapsed:.3f}s (< 1 s)")
    assert ok


@pytest.mark.xfail(strict=True, reason="the target interval is off by 1.7e-3; an independent "
                   "double-quadrature oracle gives CDF(2.3392052) = 0.9750000 and CDF(2.3409) = 0.975088")
def test_c2_example2_interval():
    lo, hi, dev, _ = interval_check("example2", (-0.3409, 2.3409), 5e-4)
    ok = dev <= 5e-4
    record("C2 example2 interval", ok,
           f"[{lo:.7f}, {hi:.7f}] vs [-0.3409, 2.3409], max dev {dev:.2e} (tol 5e-4)")
    assert ok


def test_c2_example2_independent_oracle():
    # the computed endpoint is checked against a direct convolution integral
    from scipy import integrate
    from qcf.model import cdf_direct, pdf_direct

    res, _ = run_preset("example2")
    hi = res.coverage.upper
    p1, p2, p3 = (QGaussianParams(0, 1, -1), QGaussianParams(1, 1, 0.5), QGaussianParams(2, 1, 1.5))
    s1, s2 = math.sqrt(2 / 2), math.sqrt(2 / 0.5)  # half-widths of the bounded terms

    def cdf(y):
        # P(X1 + X2 + X3 <= 3 y) with X1, X2 bounded
        inner = lambda x2, x1: pdf_direct(x1, p1) * pdf_direct(x2, p2) * cdf_direct(3 * y - x1 - x2, p3)
        val, _ = integrate.dblquad(inner, -s1, s1, 1 - s2, 1 + s2, epsabs=1e-11, epsrel=1e-11)
        return val

    F = cdf(hi)
    assert abs(F - 0.975) < 1e-7


def test_c3_example3_interval():
    lo, hi, dev, elapsed = interval_check("example3", (-2.5469, 2.5469), 1e-3)
    ok = dev <= 1e-3
    record("C3 example3 interval", ok,
           f"[{lo:.7f}, {hi:.7f}] vs [-2.5469, 2.5469], max dev {dev:.2e} (tol 1e-3); runtime {elapsed:.2f}s")
    assert ok


def test_c4_example4_extreme_tails():
    res, elapsed = run_preset("example4")
    cf = characteristic_function(preset("example4").model())
    q = quantile_adaptive(cf, 0.975, InversionOptions(backend="adaptive"))
    rel = abs(q / 9.1540e22 - 1)
    table = [round(float(v), 5) for v in res.cdf]
    ok = rel <= 5e-4 and table == EXAMPLE4_TABLE and elapsed < 1.0
    record("C4 example4 tails", ok,
           f"q(0.975) = {q:.6e} (rel dev {rel:.1e}, tol 5e-4); table {'matches' if table == EXAMPLE4_TABLE else table} "
           f"to 5 decimals; full preset {elapsed:.3f}s (< 1 s)")
    assert ok


@pytest.mark.parametrize("name,tol", [("example1", 0.02), ("example2", 0.02), ("example3", 0.05)])
def test_c5_mcm_agreement(name, tol):
    spec = preset(name)
    rep = compare(spec.model(), spec.inversion_options(), McmOptions(n_samples=100_000, seed=0))
    dev = max(abs(d) for d in rep.differences)
    ok = dev <= tol and rep.ks_passed
    record(f"C5 MCM agreement {name}", ok,
           f"MCM [{rep.mcm.ci_lower:.4f}, {rep.mcm.ci_upper:.4f}] vs CFA [{rep.cfa_lower:.4f}, {rep.cfa_upper:.4f}], "
           f"max dev {dev:.4f} (tol {tol}); KS {rep.ks:.5f} < {rep.ks_critical:.5f}")
    assert ok


def test_c6_oracle_suite():
    worst = {}
    for name, p, ref in oracle_cases():
        cf = single(p)
        x = ref.ppf(np.linspace(0.01, 0.99, 21))
        g = invert_on_grid(cf, x, (), InversionOptions(), level=None).cdf
        a = np.array([cdf_adaptive(cf, v, InversionOptions(backend="adaptive")) for v in x])
        exact = ref.cdf(x)
        worst[name] = max(np.max(np.abs(g - exact)), np.max(np.abs(a - exact)))
    top = max(worst.values())
    ok = top <= 1e-7
    record("C6 oracle suite", ok,
           f"{len(worst)} distributions x 21 points x 2 backends, max abs error {top:.1e} (tol 1e-7; "
           + ", ".join(f"{k} {v:.0e}" for k, v in worst.items()) + ")")
    assert ok


def test_c7_cf_properties():
    rng = np.random.default_rng(20240101)
    n_models, n_t = 1000, 10
    worst = 0.0
    failures = 0
    for _ in range(n_models):
        k = rng.integers(1, 6)
        q = rng.choice([-50.0, -1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 2.9], size=k) + rng.uniform(-0.05, 0.05, k)
        q = np.minimum(q, 2.99)
        coef = rng.uniform(-3, 3, k)
        sigma = rng.uniform(0.01, 10, k)
        mu = rng.uniform(-5, 5, k)
        m = LinearModel.from_arrays(coef, mu, sigma, q)
        centred = LinearModel.from_arrays(coef, np.zeros(k), sigma, q)
        t = rng.uniform(-100, 100, n_t)
        v, vm = cf_linear_combination(t, m), cf_linear_combination(-t, m)
        c, cm = cf_linear_combination(t, centred), cf_linear_combination(-t, centred)
        errs = [
            abs(cf_linear_combination(0.0, m) - 1.0),
            np.max(np.abs(v) - 1.0, initial=0.0),
            np.max(np.abs(vm - np.conj(v))),
            np.max(np.abs(c.imag)),
            np.max(np.abs(cm - c)),
        ]
        e = max(errs)
        worst = max(worst, e)
        failures += e > 1e-13
    ok = failures == 0
    record("C7 CF properties", ok,
           f"{n_models * n_t} random (model, t) cases, worst deviation {worst:.1e} (tol 1e-13), {failures} failures")
    assert ok


def _bessel_checks():
    worst = 0.0
    for z in np.concatenate([np.geomspace(1e-3, 1, 10), np.linspace(1.1, 50, 40)]):
        c = math.sqrt(2 / (math.pi * z))
        s, co = math.sin(z), math.cos(z)
        # forms that cancel at small z are only checked where they are well conditioned
        J = {0.5: c * s}
        if z > 0.5:
            J[1.5] = c * (s / z - co)
            J[2.5] = c * ((3 / z**2 - 1) * s - 3 * co / z)
        for nu, ref in J.items():
            worst = max(worst, abs(bessel_j(nu, z).value - ref) / c)
        k = math.sqrt(math.pi / (2 * z)) * math.exp(-z)
        for nu, ref in {0.5: k, 1.5: k * (1 + 1 / z), 2.5: k * (1 + 3 / z + 3 / z**2)}.items():
            worst = max(worst, abs(bessel_k(nu, z).value / ref - 1))
        w = -z * z / 4
        worst = max(worst, abs(hyp0f1(0.5, w).value - co), abs(hyp0f1(1.5, w).value - s / z) * max(1.0, z))
    return worst


def _dual_form_worst():
    worst = 0.0
    for theta in (1.5, 2.0, 5.0, 20.0):
        a = math.sqrt(2.0 * (theta - 1.0))   # a = sqrt(2 / (1 - q)) for this theta
        nu = theta - 0.5
        for t in np.linspace(50 / 2000, 50, 2000):
            z = a * t
            lhs = hyp0f1(theta + 0.5, -z * z / 4).value
            log_pref = math.lgamma(theta + 0.5) - nu * math.log(z / 2)
            rhs = math.exp(log_pref) * bessel_j(nu, z).value
            # relative to the magnitude of the oscillation envelope
            env = max(abs(rhs), math.exp(log_pref) * min(1.0, math.sqrt(2 / (math.pi * z))))
            worst = max(worst, abs(lhs - rhs) / env)
    return worst


def test_c8_special_functions():
    b = _bessel_checks()
    d = _dual_form_worst()
    ok = b <= 1e-10 and d <= 1e-9
    record("C8 special functions", ok,
           f"half-order Bessel and 0F1 cos/sinc worst rel {b:.1e} (tol 1e-10); "
           f"0F1 vs Bessel-J dual form worst rel {d:.1e} (tol 1e-9)")
    assert ok


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_c9_normalisation(name):
    from scipy.integrate import trapezoid
    from qcf.inversion import _enclosing_interval

    spec = preset(name)
    m = spec.model()
    cf = characteristic_function(m)
    opts = spec.inversion_options(backend="grid")
    lo, hi = _enclosing_interval(cf, opts)
    y = np.linspace(np.arcsinh((lo - m.center) / m.scale), np.arcsinh((hi - m.center) / m.scale), 2001)
    x = m.center + m.scale * np.sinh(y)
    res = invert_on_grid(cf, x, (), opts, level=None)
    total = trapezoid(res.pdf, x)
    ok = abs(total - 1) <= 1e-4
    record(f"C9 normalisation {name}", ok,
           f"integral of PDF over [{lo:.4g}, {hi:.4g}] = {total:.8f} (|dev| {abs(total - 1):.1e}, tol 1e-4)")
    assert ok


def test_speed_relative_to_monte_carlo():
    model = preset("example4").model()
    cf = characteristic_function(model)
    opts = InversionOptions(backend="adaptive")
    quantile_adaptive(cf, 0.975, opts)  # warm-up
    start = time.perf_counter()
    quantile_adaptive(cf, 0.025, opts), quantile_adaptive(cf, 0.975, opts)
    cfa = time.perf_counter() - start
    mc = propagate(model, McmOptions(n_samples=10**6, seed=0)).elapsed
    ratio = 100 * mc / cfa
    ok = ratio >= 100
    record("speed", ok,
           f"example4 CFA interval {cfa * 1e3:.1f} ms; MCM N=1e6 {mc:.3f}s -> N=1e8 about {100 * mc:.1f}s; "
           f"ratio {ratio:.0f}x (>= 100x)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
