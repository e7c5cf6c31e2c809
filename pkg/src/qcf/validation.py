"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError
from .model import LinearModel

__all__ = ["check_terms", "check_probabilities", "check_grid", "model_from_array"]

TERM_COLUMNS = ("coef", "mu", "sigma", "q")


def check_terms(X) -> np.ndarray:
    """Validate a term table: shape ``(n_terms, 4)`` with columns coef, mu, sigma, q.

    A single row may be given as a flat sequence of four numbers.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1 and arr.size == len(TERM_COLUMNS):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != len(TERM_COLUMNS) or arr.shape[0] == 0:
        raise DomainError(
            f"terms must have shape (n_terms, 4) with columns {TERM_COLUMNS}, got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DomainError("terms contain non-finite values")
    return arr


def model_from_array(X) -> LinearModel:
    arr = check_terms(X)
    return LinearModel.from_arrays(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


def check_probabilities(p) -> np.ndarray:
    """1-d array of probabilities strictly inside (0, 1)."""
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.ndim != 1:
        raise DomainError(f"probabilities must be one-dimensional, got shape {arr.shape}")
    if not np.all((arr > 0) & (arr < 1)):
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    return arr


def check_grid(x, sort: bool = False) -> np.ndarray:
    """Finite 1-d evaluation grid; a column vector ``(n, 1)`` is flattened."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = np.atleast_1d(arr)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"grid must be a non-empty 1-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("grid contains non-finite values")
    return np.sort(arr) if sort else arr
