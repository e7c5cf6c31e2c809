"""Tsallis q-Gaussian parameters and characteristic functions.

A :class:`QGaussianParams` record describes one input quantity
``X ~ TQG(mu, sigma, q)``. Three regimes are distinguished:

* ``q < 1``: bounded, ``X = mu + sigma * a * (2B - 1)`` with
  ``B ~ Beta(theta, theta)``, ``a = sqrt(2 / (1 - q))``,
  ``theta = (2 - q) / (1 - q)``;
* ``q = 1``: normal, ``X = mu + sigma * Z``;
* ``1 < q < 3``: heavy tailed, ``X = mu + sigma * b * T`` with
  ``T ~ t(nu)``, ``b = sqrt(2 / (3 - q))``, ``nu = (3 - q) / (q - 1)``.

The characteristic function of the standard member is, respectively,
``0F1(theta + 1/2; -(a t)^2 / 4)``, ``exp(-t^2 / 2)`` and the Matern kernel
``2^(1-nu/2) z^(nu/2) K_(nu/2)(z) / Gamma(nu/2)`` at ``z = sqrt(nu) b |t|``.
A :class:`LinearModel` ``Y = sum_k c_k X_k`` of independent inputs has the
product characteristic function ``prod_k cf_k(c_k t)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .exceptions import DomainError
from .specfun import hyp0f1_array, matern

__all__ = [
    "Regime",
    "QGaussianParams",
    "DerivedParams",
    "LinearModel",
    "CharFn",
    "derive_params",
    "sigma_from_tsallis_beta",
    "support",
    "cf_standard",
    "cf_tqg",
    "cf_linear_combination",
    "characteristic_function",
    "pdf_direct",
    "cdf_direct",
]

GAUSSIAN_Q_TOL = 1e-12
MAX_Q = 3.0 - 1e-6


class Regime(str, enum.Enum):
    BOUNDED = "bounded"
    GAUSSIAN = "gaussian"
    HEAVY = "heavy"


def _regime(q: float) -> Regime:
    if abs(q - 1.0) <= GAUSSIAN_Q_TOL:
        return Regime.GAUSSIAN
    return Regime.BOUNDED if q < 1.0 else Regime.HEAVY


@dataclass(frozen=True)
class QGaussianParams:
    """Location ``mu``, scale ``sigma > 0`` and Tsallis index ``q < 3``."""

    mu: float = 0.0
    sigma: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        for name in ("mu", "sigma", "q"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma!r}")
        if self.q >= 3.0:
            raise DomainError(f"q must satisfy q < 3, got q={self.q!r}")
        if self.q > MAX_Q:
            raise DomainError(
                f"q={self.q!r} is too close to 3 (nu -> 0); q <= 3 - 1e-6 is required"
            )

    @property
    def regime(self) -> Regime:
        return _regime(self.q)

    @classmethod
    def from_tsallis(cls, mu: float, beta: float, q: float) -> "QGaussianParams":
        """Build from the rate parametrisation ``beta = 1 / (2 sigma^2)``."""
        return cls(mu, sigma_from_tsallis_beta(beta), q)


@dataclass(frozen=True)
class DerivedParams:
    regime: Regime
    theta: Optional[float] = None
    a: Optional[float] = None
    nu: Optional[float] = None
    b: Optional[float] = None


def derive_params(p: QGaussianParams) -> DerivedParams:
    """Regime and the shape constants that apply to it (others are ``None``)."""
    q = p.q
    regime = _regime(q)
    if regime is Regime.BOUNDED:
        return DerivedParams(regime, theta=(2.0 - q) / (1.0 - q), a=math.sqrt(2.0 / (1.0 - q)))
    if regime is Regime.HEAVY:
        return DerivedParams(regime, nu=(3.0 - q) / (q - 1.0), b=math.sqrt(2.0 / (3.0 - q)))
    return DerivedParams(regime)


def sigma_from_tsallis_beta(beta: float) -> float:
    """Convert the Tsallis rate ``beta`` to the scale ``sigma = sqrt(1/(2 beta))``."""
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be a finite positive number, got {beta!r}")
    return math.sqrt(1.0 / (2.0 * beta))


def support(p: QGaussianParams) -> Optional[Tuple[float, float]]:
    """Closed support interval for ``q < 1``; ``None`` when it is the real line."""
    d = derive_params(p)
    if d.regime is not Regime.BOUNDED:
        return None
    half = p.sigma * d.a
    return (p.mu - half, p.mu + half)


def _standard_real(t: np.ndarray, q: float) -> np.ndarray:
    """Real, even CF of ``TQG(0, 1, q)`` evaluated at ``|t|``."""
    d = derive_params(QGaussianParams(0.0, 1.0, q))
    at = np.abs(t)
    if d.regime is Regime.GAUSSIAN:
        return np.exp(-0.5 * at * at)
    if d.regime is Regime.BOUNDED:
        u = d.a * at
        vals = hyp0f1_array(d.theta + 0.5, -0.25 * u * u)
        return np.clip(vals, -1.0, 1.0)
    return matern(0.5 * d.nu, math.sqrt(d.nu) * d.b * at)


def cf_standard(t, q: float):
    """Characteristic function of the standard q-Gaussian ``TQG(0, 1, q)``.

    Accepts a scalar or an array of frequencies and returns complex values
    of the same shape. The function is real and even; ``cf(0) == 1`` exactly.
    """
    QGaussianParams(0.0, 1.0, q)
    arr = np.asarray(t, dtype=float)
    out = _standard_real(arr, q).astype(complex)
    return complex(out) if out.ndim == 0 else out


def cf_tqg(t, p: QGaussianParams):
    """Characteristic function of ``TQG(mu, sigma, q)``."""
    arr = np.asarray(t, dtype=float)
    out = np.exp(1j * arr * p.mu) * _standard_real(p.sigma * arr, p.q)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LinearModel:
    """``Y = sum_k coef_k * X_k`` with independent q-Gaussian inputs."""

    terms: Tuple[Tuple[float, QGaussianParams], ...]

    def __post_init__(self):
        terms = tuple((float(c), p) for c, p in self.terms)
        if not terms:
            raise DomainError("a linear model needs at least one term")
        for k, (c, p) in enumerate(terms):
            if not math.isfinite(c):
                raise DomainError(f"term {k}: coefficient must be finite, got {c!r}")
            if not isinstance(p, QGaussianParams):
                raise DomainError(f"term {k}: expected QGaussianParams, got {type(p).__name__}")
        if all(c == 0.0 for c, _ in terms):
            raise DomainError("at least one coefficient must be non-zero")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_arrays(
        cls,
        coef: Sequence[float],
        mu: Sequence[float],
        sigma: Sequence[float],
        q: Sequence[float],
    ) -> "LinearModel":
        coef, mu, sigma, q = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (coef, mu, sigma, q))
        n = max(len(coef), len(mu), len(sigma), len(q))
        coef, mu, sigma, q = (np.broadcast_to(v, (n,)) for v in (coef, mu, sigma, q))
        return cls(tuple((c, QGaussianParams(m, s, qq)) for c, m, s, qq in zip(coef, mu, sigma, q)))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def active_terms(self):
        return [(c, p) for c, p in self.terms if c != 0.0]

    @property
    def center(self) -> float:
        """``sum_k c_k mu_k``; the model is symmetric about this point."""
        return math.fsum(c * p.mu for c, p in self.terms)

    @property
    def scale(self) -> float:
        return math.fsum(abs(c) * p.sigma for c, p in self.active_terms)

    @property
    def is_bounded(self) -> bool:
        return all(p.regime is Regime.BOUNDED for _, p in self.active_terms)

    @property
    def max_q(self) -> float:
        return max(p.q for _, p in self.active_terms)

    @property
    def bounded_half_width(self) -> float:
        """Sum of the half-widths of the bounded inputs' supports."""
        return math.fsum(
            abs(c) * p.sigma * derive_params(p).a
            for c, p in self.active_terms
            if p.regime is Regime.BOUNDED
        )

    def support(self) -> Optional[Tuple[float, float]]:
        """Exact support of ``Y`` when every active input is bounded."""
        if not self.is_bounded:
            return None
        lo = math.fsum(c * p.mu - abs(c) * p.sigma * derive_params(p).a for c, p in self.active_terms)
        hi = math.fsum(c * p.mu + abs(c) * p.sigma * derive_params(p).a for c, p in self.active_terms)
        return (lo, hi)

    def tail_bounds(self, eps: float) -> Tuple[float, float]:
        """Interval holding at least ``1 - eps`` of the mass of ``Y``.

        Union bound over the inputs: each active term gets ``eps / n`` of the
        budget, split evenly between its two tails. Bounded inputs contribute
        their exact half-width.
        """
        active = self.active_terms
        share = eps / (2.0 * len(active))
        half = []
        for c, p in active:
            d = derive_params(p)
            if d.regime is Regime.BOUNDED:
                w = d.a
            elif d.regime is Regime.GAUSSIAN:
                w = float(stats.norm.isf(share))
            else:
                w = d.b * float(stats.t.isf(share, d.nu))
            half.append(abs(c) * p.sigma * w)
        h = math.fsum(half)
        return (self.center - h, self.center + h)


def cf_linear_combination(t, m: LinearModel):
    """Characteristic function of ``Y = sum_k c_k X_k``: ``prod_k cf_k(c_k t)``.

    The location phases are collected into one factor ``exp(i t sum c_k mu_k)``
    so that centred models return exactly real values.
    """
    arr = np.asarray(t, dtype=float)
    real = np.ones_like(arr)
    for c, p in m.active_terms:
        real = real * _standard_real((c * p.sigma) * arr, p.q)
    center = m.center
    if center == 0.0:
        out = real.astype(complex)
    else:
        out = np.exp(1j * (arr * center)) * real
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CharFn:
    """An evaluable characteristic function ``t -> E[exp(i t Y)]``.

    ``center`` is a point of symmetry (or a rough location) used to place the
    oscillation breakpoints during inversion, ``scale`` a rough spread used to
    seed searches. ``support`` and ``tail_bounds`` are optional hints: the
    exact support for bounded variables and a callable ``eps -> (lo, hi)``
    enclosing at least ``1 - eps`` of the mass. ``frequency`` is the angular
    frequency at which the function itself oscillates (the summed half-widths
    of the bounded inputs); it refines the quadrature cells.
    """

    func: Callable[[np.ndarray], np.ndarray]
    center: float = 0.0
    scale: float = 1.0
    support: Optional[Tuple[float, float]] = None
    tail_bounds: Optional[Callable[[float], Tuple[float, float]]] = field(default=None, compare=False)
    model: Optional[LinearModel] = None
    frequency: float = 0.0

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self.func(arr), dtype=complex)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return complex(out) if out.ndim == 0 else out


def characteristic_function(m: LinearModel) -> CharFn:
    """Wrap :func:`cf_linear_combination` with the hints inversion relies on."""
    return CharFn(
        func=lambda t: cf_linear_combination(t, m),
        center=m.center,
        scale=m.scale,
        support=m.support(),
        tail_bounds=m.tail_bounds,
        model=m,
        frequency=m.bounded_half_width,
    )


def _frozen_standard(p: QGaussianParams):
    d = derive_params(p)
    if d.regime is Regime.BOUNDED:
        half = p.sigma * d.a
        return stats.beta(d.theta, d.theta, loc=p.mu - half, scale=2.0 * half)
    if d.regime is Regime.GAUSSIAN:
        return stats.norm(loc=p.mu, scale=p.sigma)
    return stats.t(d.nu, loc=p.mu, scale=p.sigma * d.b)


def pdf_direct(x, p: QGaussianParams):
    """Density of ``TQG(mu, sigma, q)`` through its beta / normal / Student-t
    representation (so no normalising constant is ever written down).
    Zero outside the support when ``q < 1``."""
    arr = np.asarray(x, dtype=float)
    out = _frozen_standard(p).pdf(arr)
    out = np.where(np.isfinite(out), out, 0.0)
    return float(out) if out.ndim == 0 else out


def cdf_direct(x, p: QGaussianParams):
    """Distribution function of ``TQG(mu, sigma, q)`` via the same representations."""
    arr = np.asarray(x, dtype=float)
    out = _frozen_standard(p).cdf(arr)
    return float(out) if np.ndim(out) == 0 else out


def model_from_terms(terms: Iterable[Tuple[float, float, float, float]]) -> LinearModel:
    """Build a model from ``(coef, mu, sigma, q)`` rows."""
    return LinearModel(tuple((c, QGaussianParams(m, s, q)) for c, m, s, q in terms))
