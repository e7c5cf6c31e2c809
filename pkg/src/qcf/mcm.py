"""Monte Carlo propagation through a linear model of q-Gaussian inputs.

Inputs are sampled from their exact representations (scaled symmetric beta,
normal, scaled Student t). Every input variable gets its own random stream,
derived from the seed and a key built from the term's parameters, so the
result does not depend on the order in which terms are listed. Sampling can
be split into chunks, each with its own spawned substream; results are
reproducible for a fixed ``(seed, n_chunks)`` pair.
"""

from __future__ import annotations

import math
import struct
import time
import zlib
from collections import Counter
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .exceptions import DomainError
from .model import LinearModel, QGaussianParams, Regime, derive_params

__all__ = [
    "MIN_SAMPLES",
    "McmOptions",
    "McmResult",
    "gamma_log",
    "sample_tqg",
    "simulate",
    "propagate",
    "coverage_indices",
    "ks_statistic",
]

MIN_SAMPLES = 1000


@dataclass(frozen=True)
class McmOptions:
    n_samples: int = 100_000
    seed: int = 0
    coverage_level: float = 0.95
    n_chunks: int = 1

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples:
            raise DomainError(f"n_samples must be an integer, got {self.n_samples!r}")
        if self.n_samples < MIN_SAMPLES:
            raise DomainError(f"n_samples below minimum ({self.n_samples} < {MIN_SAMPLES})")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not 0.0 < self.coverage_level < 1.0:
            raise DomainError(f"coverage_level must lie in (0, 1), got {self.coverage_level!r}")
        if int(self.n_chunks) != self.n_chunks or self.n_chunks < 1:
            raise DomainError(f"n_chunks must be a positive integer, got {self.n_chunks!r}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "n_chunks", int(self.n_chunks))


@dataclass(frozen=True)
class McmResult:
    ci_lower: float
    ci_upper: float
    sample_mean: Optional[float]
    elapsed: float
    n_samples: int
    seed: int
    coverage_level: float

    def to_dict(self) -> dict:
        return {
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "sample_mean": self.sample_mean,
            "elapsed": self.elapsed,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "coverage_level": self.coverage_level,
        }


# ---------------------------------------------------------------------------
# variates


def gamma_log(shape: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Logarithms of ``Gamma(shape, 1)`` draws.

    For ``shape < 1`` the boost ``G_a = G_{a+1} U^{1/a}`` is applied in log
    space; for tiny shapes ``G_a`` itself underflows to zero, while its
    logarithm stays finite.
    """
    if shape >= 1.0:
        return np.log(rng.standard_gamma(shape, n))
    g = rng.standard_gamma(shape + 1.0, n)
    u = rng.random(n)
    return np.log(g) + np.log1p(-u) / shape


def _standard_draws(p: QGaussianParams, n: int, rng: np.random.Generator) -> np.ndarray:
    d = derive_params(p)
    if d.regime is Regime.GAUSSIAN:
        return rng.standard_normal(n)
    if d.regime is Regime.BOUNDED:
        # 2B - 1 with B = G1 / (G1 + G2) ~ Beta(theta, theta)
        g1 = rng.standard_gamma(d.theta, n)
        g2 = rng.standard_gamma(d.theta, n)
        return d.a * (g1 - g2) / (g1 + g2)
    # T = Z / sqrt(G / nu) with G ~ chi^2_nu = 2 Gamma(nu / 2)
    z = rng.standard_normal(n)
    log_g = gamma_log(0.5 * d.nu, n, rng) + math.log(2.0)
    return d.b * z * np.exp(-0.5 * (log_g - math.log(d.nu)))


def sample_tqg(p: QGaussianParams, n: int, rng) -> np.ndarray:
    """``n`` i.i.d. draws of ``TQG(mu, sigma, q)``.

    ``rng`` is a :class:`numpy.random.Generator` or anything
    :func:`numpy.random.default_rng` accepts.

    Examples
    --------
    >>> x = sample_tqg(QGaussianParams(0.0, 1.0, 0.0), 1000, 1)
    >>> bool(abs(x).max() <= 2 ** 0.5)
    True
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    return p.mu + p.sigma * _standard_draws(p, int(n), rng)


def _term_key(p: QGaussianParams) -> int:
    return zlib.crc32(struct.pack("<3d", p.mu, p.sigma, p.q))


def _term_streams(m: LinearModel, seed: int, n_chunks: int) -> List[List[np.random.Generator]]:
    """One list of per-chunk generators for each term.

    Streams are keyed by the term's parameters and the occurrence count of
    identical parameters, which makes the draw of each input independent of
    where the term sits in the model.
    """
    seen: Counter = Counter()
    out = []
    for _, p in m.terms:
        key = _term_key(p)
        ss = np.random.SeedSequence([seed, key, seen[key]])
        seen[key] += 1
        out.append([np.random.Generator(np.random.PCG64(c)) for c in ss.spawn(n_chunks)])
    return out


def simulate(m: LinearModel, opts: McmOptions) -> np.ndarray:
    """Draw ``opts.n_samples`` realisations of ``Y = sum_k c_k X_k`` (unsorted)."""
    streams = _term_streams(m, opts.seed, opts.n_chunks)
    bounds = np.linspace(0, opts.n_samples, opts.n_chunks + 1).astype(int)
    y = np.zeros(opts.n_samples)
    for (c, p), gens in zip(m.terms, streams):
        if c == 0.0:
            continue
        for j, g in enumerate(gens):
            lo, hi = bounds[j], bounds[j + 1]
            if hi > lo:
                y[lo:hi] += c * sample_tqg(p, hi - lo, g)
    return y


def coverage_indices(n: int, level: float):
    """Zero-based positions of the order statistics bounding a central interval.

    The 1-based ranks are ``floor(n * alpha)`` and ``ceil(n * (1 - alpha))``
    with ``alpha = (1 - level) / 2``; a relative guard of ``1e-9`` absorbs
    floating error in the products (``100000 * 0.975`` is not exact), and
    ranks are clamped to ``[1, n]``.

    >>> coverage_indices(100000, 0.95)
    (2499, 97499)
    """
    alpha = 0.5 * (1.0 - level)
    lo = math.floor(n * alpha * (1.0 + 1e-9) + 1e-9)
    hi = math.ceil(n * (1.0 - alpha) * (1.0 - 1e-9) - 1e-9)
    lo = min(max(lo, 1), n)
    hi = min(max(hi, 1), n)
    return lo - 1, hi - 1


def propagate(m: LinearModel, opts: Optional[McmOptions] = None,
              return_sample: bool = False):
    """Monte Carlo coverage interval for ``Y``.

    Returns an :class:`McmResult`, or ``(result, sorted_sample)`` when
    ``return_sample`` is true.
    """
    opts = opts or McmOptions()
    start = time.perf_counter()
    y = simulate(m, opts)
    y.sort()
    i_lo, i_hi = coverage_indices(opts.n_samples, opts.coverage_level)
    mean = float(np.mean(y))
    result = McmResult(
        ci_lower=float(y[i_lo]),
        ci_upper=float(y[i_hi]),
        sample_mean=mean if math.isfinite(mean) else None,
        elapsed=time.perf_counter() - start,
        n_samples=opts.n_samples,
        seed=opts.seed,
        coverage_level=opts.coverage_level,
    )
    return (result, y) if return_sample else result


def ks_statistic(sorted_sample: Sequence[float], cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Two-sided Kolmogorov-Smirnov distance between a sorted sample and ``cdf``."""
    x = np.asarray(sorted_sample, dtype=float)
    n = len(x)
    if n == 0:
        raise DomainError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
