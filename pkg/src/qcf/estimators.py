"""scikit-learn style wrappers.

``fit`` takes a term table of shape ``(n_terms, 4)`` with columns
``coef, mu, sigma, q`` and builds the model; nothing is learned from data.
``transform`` then maps evaluation points ``x`` (shape ``(n,)`` or ``(n, 1)``)
to an ``(n, 2)`` array of ``[pdf, cdf]`` (CFA) or to the empirical CDF
(Monte Carlo).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .inversion import (
    Coverage,
    InversionOptions,
    _adaptive,
    decay_point,
    frequency_grid,
    quantile_adaptive,
    quantile_grid,
)
from .mcm import McmOptions, propagate
from .model import characteristic_function
from .validation import check_grid, check_probabilities, model_from_array
from .workflow import select_backend

__all__ = ["QGaussianCFA", "QGaussianMCM"]


class QGaussianCFA(TransformerMixin, BaseEstimator):
    """Distribution of ``sum_k coef_k X_k`` by characteristic-function inversion.

    Parameters
    ----------
    n_points : int, default=1024
        Minimum frequency-grid size for the grid backend.
    backend : {"auto", "grid", "adaptive"}, default="auto"
        ``auto`` picks ``adaptive`` when some ``q > 2.5``.
    level : float, default=0.95
        Coverage level of ``coverage_``.
    rel_tol, abs_tol : float
        Tolerances handed to the inversion.

    Attributes
    ----------
    model_ : LinearModel
    cf_ : CharFn
    options_ : InversionOptions
    coverage_ : Coverage

    Examples
    --------
    >>> est = QGaussianCFA().fit([[1.0, 0.0, 1.0, 1.0]])
    >>> round(est.coverage_.upper, 6)
    1.959964
    """

    def __init__(self, n_points=1024, backend="auto", level=0.95, rel_tol=1e-8, abs_tol=1e-12):
        self.n_points = n_points
        self.backend = backend
        self.level = level
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol

    def fit(self, X, y=None):
        self.model_ = model_from_array(X)
        self.cf_ = characteristic_function(self.model_)
        backend = select_backend(self.model_) if self.backend == "auto" else self.backend
        self.options_ = InversionOptions(
            n_points=self.n_points, backend=backend, rel_tol=self.rel_tol, abs_tol=self.abs_tol
        )
        self._grid = frequency_grid(self.cf_, self.options_) if backend == "grid" else None
        lo, hi = self.quantile([0.5 * (1 - self.level), 0.5 * (1 + self.level)])
        self.coverage_ = Coverage(float(lo), float(hi), float(self.level))
        self.n_features_in_ = 4
        return self

    def _values(self, x):
        x = check_grid(x)
        if self._grid is not None:
            # the aliasing period must cover the requested points
            grid = frequency_grid(self.cf_, self.options_, float(x.min()), float(x.max()))
            F, f = grid.evaluate(x)
            return np.maximum(f, 0.0), np.clip(F, 0.0, 1.0)
        decay = decay_point(self.cf_, self.options_.cf_cutoff)
        vals = [_adaptive(self.cf_, float(v), self.options_, decay) for v in x]
        return (np.maximum([v.pdf for v in vals], 0.0),
                np.clip([v.cdf for v in vals], 0.0, 1.0))

    def cdf(self, x):
        check_is_fitted(self, "cf_")
        return self._values(x)[1]

    def pdf(self, x):
        check_is_fitted(self, "cf_")
        return self._values(x)[0]

    def quantile(self, p):
        check_is_fitted(self, "cf_")
        probs = check_probabilities(p)
        if self._grid is not None:
            return np.array([quantile_grid(self._grid, v, self.cf_, self.options_) for v in probs])
        return np.array([quantile_adaptive(self.cf_, v, self.options_) for v in probs])

    def transform(self, X):
        """``[pdf, cdf]`` columns at the points ``X``."""
        check_is_fitted(self, "cf_")
        f, F = self._values(X)
        return np.column_stack([f, F])


class QGaussianMCM(TransformerMixin, BaseEstimator):
    """Monte Carlo counterpart of :class:`QGaussianCFA`.

    Attributes
    ----------
    model_ : LinearModel
    result_ : McmResult
    sample_ : ndarray, sorted draws of the output
    coverage_ : Coverage
    """

    def __init__(self, n_samples=100_000, seed=0, level=0.95, n_chunks=1):
        self.n_samples = n_samples
        self.seed = seed
        self.level = level
        self.n_chunks = n_chunks

    def fit(self, X, y=None):
        self.model_ = model_from_array(X)
        opts = McmOptions(self.n_samples, self.seed, self.level, self.n_chunks)
        self.result_, self.sample_ = propagate(self.model_, opts, return_sample=True)
        self.coverage_ = Coverage(self.result_.ci_lower, self.result_.ci_upper, float(self.level))
        self.n_features_in_ = 4
        return self

    def cdf(self, x):
        """Empirical CDF of the sample."""
        check_is_fitted(self, "sample_")
        x = check_grid(x)
        return np.searchsorted(self.sample_, x, side="right") / len(self.sample_)

    def quantile(self, p):
        check_is_fitted(self, "sample_")
        return np.quantile(self.sample_, check_probabilities(p))

    def transform(self, X):
        return self.cdf(X)[:, None]
