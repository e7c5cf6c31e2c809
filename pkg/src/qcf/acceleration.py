"""Wynn's epsilon algorithm for limits of slowly convergent sequences."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

__all__ = ["Extrapolation", "wynn_epsilon"]


class Extrapolation(NamedTuple):
    value: float
    error: float
    n_terms: int


def _epsilon_limit(s: np.ndarray) -> float:
    """Last entry of the deepest usable even column of the epsilon table."""
    prev = np.zeros(len(s) + 1)  # eps_{-1}
    cur = s.copy()               # eps_0
    best = cur[-1]
    col = 0
    tiny = 4 * np.finfo(float).eps
    while len(cur) > 1:
        diff = cur[1:] - cur[:-1]
        scale = np.maximum(np.abs(cur[1:]), np.abs(cur[:-1]))
        if np.any(np.abs(diff) <= tiny * np.maximum(scale, 1e-300)):
            break
        prev, cur = cur, prev[1:len(cur)] + 1.0 / diff
        col += 1
        if col % 2 == 0:
            if not np.isfinite(cur[-1]):
                break
            best = cur[-1]
    return float(best)


def wynn_epsilon(partial_sums: Sequence[float]) -> Extrapolation:
    """Extrapolate the limit of a sequence of partial sums.

    Builds the epsilon table and keeps its even columns, which are the Shanks
    transforms ``e_k(S_n)``; the estimate is the last entry of the deepest
    column that is still numerically meaningful. The error is judged, as in
    QUADPACK's ``qelg``, from how much the estimate moves when the last one
    or two partial sums are dropped.

    Examples
    --------
    >>> import math
    >>> s = [sum((-1) ** k / (k + 1) for k in range(n)) for n in range(1, 16)]
    >>> abs(wynn_epsilon(s).value - math.log(2)) < 1e-10
    True
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    if n == 0:
        raise ValueError("need at least one partial sum")
    if n < 3:
        err = abs(s[-1] - s[-2]) if n == 2 else math.inf
        return Extrapolation(float(s[-1]), err, n)
    value = _epsilon_limit(s)
    if n >= 5:
        v1, v2 = _epsilon_limit(s[:-1]), _epsilon_limit(s[:-2])
        error = abs(value - v1) + abs(value - v2)
    else:
        error = abs(s[-1] - s[-2])
    # a floor tied to the magnitude of the partial sums
    error = max(error, 8 * np.finfo(float).eps * float(np.max(np.abs(s[-3:]))))
    return Extrapolation(value, float(error), n)
