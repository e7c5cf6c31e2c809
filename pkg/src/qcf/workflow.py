"""End-to-end computations on a linear model: CFA distribution and CFA/MCM comparison."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .inversion import (
    DistResult,
    InversionOptions,
    cdf_interpolant,
    invert_on_grid,
    quantile_adaptive,
)
from .mcm import McmOptions, McmResult, ks_statistic, propagate
from .model import CharFn, LinearModel, characteristic_function

__all__ = [
    "ADAPTIVE_Q_THRESHOLD",
    "ADAPTIVE_X_THRESHOLD",
    "Comparison",
    "compare",
    "default_grid",
    "distribution",
    "ks_critical_value",
    "select_backend",
]

ADAPTIVE_Q_THRESHOLD = 2.5
ADAPTIVE_X_THRESHOLD = 1e6
DEFAULT_GRID_SIZE = 101
KS_COEFFICIENT = 1.95
FLAG_RELATIVE_DIFFERENCE = 0.10


def select_backend(model: LinearModel, x: Optional[Sequence[float]] = None) -> str:
    """``adaptive`` for very heavy tails (any ``q > 2.5``) or very large ``|x|``, else ``grid``."""
    if model.max_q > ADAPTIVE_Q_THRESHOLD:
        return "adaptive"
    if x is not None and len(x) and float(np.max(np.abs(x))) > ADAPTIVE_X_THRESHOLD:
        return "adaptive"
    return "grid"


def default_grid(cf: CharFn, opts: InversionOptions, n: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Evaluation grid when none is given.

    Bounded models use their exact support; otherwise the range runs between
    the ``1e-4`` and ``1 - 1e-4`` quantiles.
    """
    lo, hi = opts.x_min, opts.x_max
    if lo is None or hi is None:
        if cf.support is not None:
            s_lo, s_hi = cf.support
        else:
            q_opts = opts.with_(backend="adaptive", rel_tol=max(opts.rel_tol, 1e-6))
            s_lo = quantile_adaptive(cf, 1e-4, q_opts)
            s_hi = quantile_adaptive(cf, 1.0 - 1e-4, q_opts)
        lo = s_lo if lo is None else lo
        hi = s_hi if hi is None else hi
    return np.linspace(lo, hi, n)


def distribution(model: LinearModel, x: Optional[Sequence[float]] = None,
                 probs: Sequence[float] = (0.025, 0.975),
                 opts: Optional[InversionOptions] = None,
                 level: Optional[float] = 0.95) -> DistResult:
    """PDF/CDF on ``x`` plus quantiles and a coverage interval via the CFA."""
    opts = opts or InversionOptions()
    cf = characteristic_function(model)
    grid = default_grid(cf, opts) if x is None else np.asarray(x, dtype=float)
    start = time.perf_counter()
    result = invert_on_grid(cf, grid, probs, opts, level=level)
    result.diagnostics["elapsed"] = time.perf_counter() - start
    return result


def ks_critical_value(n: int) -> float:
    """Two-sided Kolmogorov-Smirnov critical value at roughly ``alpha = 0.001``."""
    return KS_COEFFICIENT / math.sqrt(n)


@dataclass(frozen=True)
class Comparison:
    cfa_lower: float
    cfa_upper: float
    mcm: McmResult
    cfa_elapsed: float
    ks: float
    ks_critical: float
    backend: str

    @property
    def differences(self):
        return (self.mcm.ci_lower - self.cfa_lower, self.mcm.ci_upper - self.cfa_upper)

    @property
    def relative_differences(self):
        return tuple(
            abs(d) / abs(ref) if ref != 0 else math.inf if d != 0 else 0.0
            for d, ref in zip(self.differences, (self.cfa_lower, self.cfa_upper))
        )

    @property
    def flagged(self) -> bool:
        """True when an MCM endpoint is more than 10% away from the CFA endpoint."""
        return any(r > FLAG_RELATIVE_DIFFERENCE for r in self.relative_differences)

    @property
    def ks_passed(self) -> bool:
        return self.ks < self.ks_critical

    def to_dict(self) -> dict:
        return {
            "cfa": {"lower": self.cfa_lower, "upper": self.cfa_upper,
                    "elapsed": self.cfa_elapsed, "backend": self.backend},
            "mcm": self.mcm.to_dict(),
            "difference": list(self.differences),
            "relative_difference": list(self.relative_differences),
            "flagged": self.flagged,
            "ks": self.ks,
            "ks_critical": self.ks_critical,
            "ks_passed": self.ks_passed,
        }


def compare(model: LinearModel, inv_opts: InversionOptions, mcm_opts: McmOptions,
            n_nodes: int = 513) -> Comparison:
    """Coverage intervals from both methods and the KS distance between them.

    The KS statistic compares the sorted MCM sample with the CFA CDF,
    evaluated at ``n_nodes`` order statistics and interpolated in between.
    """
    cf = characteristic_function(model)
    level = mcm_opts.coverage_level
    lo_p, hi_p = 0.5 * (1.0 - level), 0.5 * (1.0 + level)
    start = time.perf_counter()
    if inv_opts.backend == "adaptive":
        lower = quantile_adaptive(cf, lo_p, inv_opts)
        upper = quantile_adaptive(cf, hi_p, inv_opts)
    else:
        res = invert_on_grid(cf, default_grid(cf, inv_opts, 33), (lo_p, hi_p), inv_opts, level=None)
        lower, upper = res.quantiles[0][1], res.quantiles[1][1]
    cfa_elapsed = time.perf_counter() - start

    mcm_result, sample = propagate(model, mcm_opts, return_sample=True)
    finite = sample[np.isfinite(sample)]
    idx = np.linspace(0, len(finite) - 1, n_nodes).round().astype(int)
    cdf = cdf_interpolant(cf, finite[idx], inv_opts)
    ks = ks_statistic(sample, cdf)
    return Comparison(lower, upper, mcm_result, cfa_elapsed, ks,
                      ks_critical_value(mcm_opts.n_samples), inv_opts.backend)
