"""Real-argument special functions used by the q-Gaussian characteristic function.

Scalar entry points (:func:`gamma_fn`, :func:`bessel_j`, :func:`bessel_k`,
:func:`hyp0f1`) return a :class:`SpecFunResult` carrying a status flag instead
of raising. The vectorised kernels :func:`hyp0f1_array` and :func:`matern`
are what the characteristic-function code calls on frequency grids.

Gamma, ``J_nu`` and the exponentially scaled ``K_nu`` come from
:mod:`scipy.special`. The confluent limit function ``0F1`` is evaluated here:

* power series while ``|z| <= max(9, b)`` (no cancellation worth speaking of),
* the Bessel identity
  ``0F1(b; -w^2/4) = Gamma(b) (w/2)^(1-b) J_(b-1)(w)`` in log space otherwise,
* Debye's large-order expansion of ``J`` when the order is large and the
  argument sits well inside the monotone region, where ``J`` itself would
  underflow.

Note on the Bessel identity: with ``nu = theta - 1/2`` the power of the
argument is ``-(theta - 1/2)``, i.e. ``(a t)^(-(theta-1/2))``. Writing the
exponent as ``-(theta + 1/2)`` does not reproduce the series; the test-suite
checks both forms numerically.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np
from scipy import special as sc

__all__ = [
    "Status",
    "SpecFunResult",
    "gamma_fn",
    "bessel_j",
    "bessel_k",
    "hyp0f1",
    "hyp0f1_array",
    "matern",
]

_LOG_TINY = -745.0
_SERIES_MAX_TERMS = 600


class Status(str, enum.Enum):
    OK = "ok"
    UNDERFLOW = "underflow-to-zero"
    OVERFLOW = "overflow"
    DOMAIN = "domain-error"


class SpecFunResult(NamedTuple):
    value: float
    status: Status

    @property
    def ok(self) -> bool:
        return self.status is Status.OK


def _classify(value: float) -> SpecFunResult:
    if math.isnan(value):
        return SpecFunResult(math.nan, Status.DOMAIN)
    if math.isinf(value):
        return SpecFunResult(value, Status.OVERFLOW)
    return SpecFunResult(float(value), Status.OK)


def gamma_fn(z: float) -> SpecFunResult:
    """Gamma function on the real line.

    Non-positive integers give ``domain-error``; arguments beyond ~171.62
    give ``overflow``.
    """
    z = float(z)
    if math.isnan(z) or (z <= 0 and z == math.floor(z)):
        return SpecFunResult(math.nan, Status.DOMAIN)
    value = float(sc.gamma(z))
    if value == 0.0:
        return SpecFunResult(0.0, Status.UNDERFLOW)
    return _classify(value)


def bessel_j(nu: float, z: float) -> SpecFunResult:
    """Bessel function of the first kind ``J_nu(z)`` for ``nu, z >= 0``."""
    nu, z = float(nu), float(z)
    if not (nu >= 0 and z >= 0) or math.isinf(nu):
        return SpecFunResult(math.nan, Status.DOMAIN)
    if z == 0.0:
        return SpecFunResult(1.0 if nu == 0 else 0.0, Status.OK)
    value = float(sc.jv(nu, z))
    if value == 0.0:
        return SpecFunResult(0.0, Status.UNDERFLOW)
    return _classify(value)


def bessel_k(nu: float, z: float) -> SpecFunResult:
    """Modified Bessel function of the second kind ``K_nu(z)`` for ``z > 0``.

    Large arguments underflow to an exact zero with status
    ``underflow-to-zero`` rather than returning subnormal values.
    """
    nu, z = float(nu), float(z)
    if not (nu >= 0 and z > 0) or math.isinf(nu):
        return SpecFunResult(math.nan, Status.DOMAIN)
    scaled = float(sc.kve(nu, z))
    if math.isinf(scaled):
        return SpecFunResult(math.inf, Status.OVERFLOW)
    if scaled == 0.0:
        return SpecFunResult(0.0, Status.UNDERFLOW)
    log_value = math.log(scaled) - z
    if log_value < -708.0:
        return SpecFunResult(0.0, Status.UNDERFLOW)
    return _classify(math.exp(log_value))


def hyp0f1(b: float, z: float) -> SpecFunResult:
    """Confluent hypergeometric limit function ``0F1(; b; z)`` for ``b > 0``."""
    b, z = float(b), float(z)
    if not b > 0 or math.isinf(b) or math.isnan(z):
        return SpecFunResult(math.nan, Status.DOMAIN)
    value = float(hyp0f1_array(b, np.array([z]))[0])
    if value == 0.0 and z != 0.0:
        return SpecFunResult(0.0, Status.UNDERFLOW)
    return _classify(value)


# -- Debye polynomials u_k(p), shared by the J and K large-order expansions --

_DEBYE = (
    ((1.0, 0),),
    ((3.0, 1), (-5.0, 3)),
    ((81.0, 2), (-462.0, 4), (385.0, 6)),
    ((30375.0, 3), (-369603.0, 5), (765765.0, 7), (-425425.0, 9)),
    (
        (4465125.0, 4),
        (-94121676.0, 6),
        (349922430.0, 8),
        (-446185740.0, 10),
        (185910725.0, 12),
    ),
)
_DEBYE_DEN = (1.0, 24.0, 1152.0, 414720.0, 39813120.0)


def _debye_sum(p: np.ndarray, order: float, alternate: bool) -> np.ndarray:
    total = np.zeros_like(p)
    for k, (poly, den) in enumerate(zip(_DEBYE, _DEBYE_DEN)):
        uk = sum(c * p**e for c, e in poly) / den
        sign = -1.0 if (alternate and k % 2) else 1.0
        total += sign * uk / order**k
    return total


def _hyp0f1_series(b: float, z: np.ndarray) -> np.ndarray:
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(_SERIES_MAX_TERMS):
        term = term * z / ((k + 1.0) * (b + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _hyp0f1_bessel(b: float, w: np.ndarray) -> np.ndarray:
    # Gamma(b) (w/2)^(1-b) J_{b-1}(w), combined in log space.
    nu = b - 1.0
    jv = sc.jv(nu, w)
    with np.errstate(divide="ignore"):
        log_mag = math.lgamma(b) - nu * np.log(0.5 * w) + np.log(np.abs(jv))
    out = np.sign(jv) * np.exp(np.minimum(log_mag, 709.0))
    out[log_mag < _LOG_TINY] = 0.0
    return out


def _hyp0f1_debye(b: float, w: np.ndarray) -> np.ndarray:
    nu = b - 1.0
    ratio = w / nu
    tanh_a = np.sqrt((1.0 - ratio) * (1.0 + ratio))
    alpha = np.arccosh(1.0 / ratio)
    log_j = (
        nu * (tanh_a - alpha)
        - 0.5 * np.log(2.0 * math.pi * nu * tanh_a)
        + np.log(_debye_sum(1.0 / tanh_a, nu, alternate=False))
    )
    log_mag = math.lgamma(b) - nu * np.log(0.5 * w) + log_j
    out = np.exp(np.minimum(log_mag, 709.0))
    out[log_mag < _LOG_TINY] = 0.0
    return out


def hyp0f1_array(b: float, z) -> np.ndarray:
    """Vectorised ``0F1(; b; z)`` for scalar ``b > 0`` and real array ``z``."""
    if not b > 0:
        raise ValueError(f"hyp0f1 requires b > 0, got {b!r}")
    z = np.asarray(z, dtype=float)
    flat = z.ravel()
    out = np.empty_like(flat)

    pos_limit = max(50.0, b)
    neg_limit = max(9.0, b)
    series = ((flat >= 0) & (flat <= pos_limit)) | ((flat < 0) & (-flat <= neg_limit))
    if series.any():
        out[series] = _hyp0f1_series(b, flat[series])

    big_pos = flat > pos_limit
    if big_pos.any():
        zz = flat[big_pos]
        w = 2.0 * np.sqrt(zz)
        log_val = (
            math.lgamma(b)
            + (1.0 - b) * np.log(0.5 * w)
            + np.log(sc.ive(b - 1.0, w))
            + w
        )
        out[big_pos] = np.exp(np.minimum(log_val, 710.0))

    rest = (flat < 0) & ~series
    if rest.any():
        w = 2.0 * np.sqrt(-flat[rest])
        nu = b - 1.0
        vals = np.empty_like(w)
        if nu > 100.0:
            ratio = np.minimum(w / nu, 1.0)
            debye = (w < nu) & (nu * ((1.0 - ratio) * (1.0 + ratio)) ** 1.5 > 400.0)
        else:
            debye = np.zeros_like(w, dtype=bool)
        if debye.any():
            vals[debye] = _hyp0f1_debye(b, w[debye])
        if (~debye).any():
            vals[~debye] = _hyp0f1_bessel(b, w[~debye])
        out[rest] = vals
    return out.reshape(z.shape)


def matern(m: float, z) -> np.ndarray:
    """Normalised ``2^(1-m) z^m K_m(z) / Gamma(m)`` for ``m > 0``, ``z >= 0``.

    This is the Matern correlation kernel; it equals 1 at ``z = 0`` and
    decreases monotonically to 0. Large ``m`` uses the uniform Debye expansion
    of ``K``; otherwise the exponentially scaled ``K`` from scipy is combined
    in log space. Values are clipped to ``[0, 1]``.
    """
    if not m > 0:
        raise ValueError(f"matern requires m > 0, got {m!r}")
    z = np.abs(np.asarray(z, dtype=float))
    flat = z.ravel()
    out = np.ones_like(flat)
    pos = flat > 0
    zz = flat[pos]
    log_norm = (1.0 - m) * math.log(2.0) - math.lgamma(m)

    if m > 80.0:
        y = zz / m
        s = np.sqrt(1.0 + y * y)
        log_val = (
            log_norm
            + 0.5 * math.log(math.pi / (2.0 * m))
            - 0.5 * np.log(s)
            + m * math.log(m)
            - m * (s - np.log1p(s))
            + np.log(_debye_sum(1.0 / s, m, alternate=True))
        )
        vals = np.exp(log_val)
    else:
        kscaled = sc.kve(m, zz)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_val = log_norm + m * np.log(zz) + np.log(kscaled) - zz
            vals = np.exp(log_val)
        tiny = ~np.isfinite(kscaled)
        if tiny.any():
            zt = zz[tiny]
            if m > 2.0:
                u = zt * zt / (4.0 * (m - 1.0))
                vals[tiny] = 1.0 - u + u * u * (m - 1.0) / (2.0 * (m - 2.0))
            elif m > 1.0:
                vals[tiny] = 1.0 - zt * zt / (4.0 * (m - 1.0))
            elif m < 1.0:
                coef = math.gamma(1.0 - m) / math.gamma(1.0 + m)
                vals[tiny] = 1.0 - coef * (0.5 * zt) ** (2.0 * m)
            else:
                vals[tiny] = 1.0
    out[pos] = np.clip(vals, 0.0, 1.0)
    return out.reshape(z.shape)
