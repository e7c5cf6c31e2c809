"""The four worked examples, encoded term for term.

Example 1 sets its evaluation bounds to the exact support of the model and
uses 100 points across it; Example 3 gives its scales through the Tsallis
rates ``beta = 5, 4, 3, 2, 1``; Example 4 uses the adaptive backend with
acceleration and evaluates the CDF at ``1e10, 1e20, ..., 1e90``.
"""

from __future__ import annotations

import math
from typing import Dict, List

from .exceptions import DomainError
from .modelspec import ModelSpec, parse_model_spec

__all__ = ["PRESETS", "preset", "preset_names"]


def _example1() -> dict:
    mu, sigma, q, coef = [0, 0, 0], [3, 2, 1], [-100, -10, 0], [0.8, 0.15, 0.05]
    half = [s * math.sqrt(2.0 / (1.0 - qq)) for s, qq in zip(sigma, q)]
    x_min = sum((m - h) * c for m, h, c in zip(mu, half, coef))
    x_max = sum((m + h) * c for m, h, c in zip(mu, half, coef))
    return {
        "name": "example1",
        "description": "three bounded inputs (q = -100, -10, 0); exact support bounds",
        "terms": [
            {"coef": c, "mu": m, "sigma": s, "q": qq}
            for c, m, s, qq in zip(coef, mu, sigma, q)
        ],
        "options": {"n_points": 2**10, "x_min": x_min, "x_max": x_max},
        "x": "support:100",
        "probs": [0.025, 0.975],
    }


def _example2() -> dict:
    return {
        "name": "example2",
        "description": "mixed regimes (q = -1, 0.5, 1.5), locations 0, 1, 2",
        "terms": [
            {"coef": 1 / 3, "mu": 0, "sigma": 1, "q": -1},
            {"coef": 1 / 3, "mu": 1, "sigma": 1, "q": 0.5},
            {"coef": 1 / 3, "mu": 2, "sigma": 1, "q": 1.5},
        ],
        "options": {"n_points": 2**10},
        "x": "-3:5:100",
        "probs": [0.025, 0.975],
    }


def _example3() -> dict:
    return {
        "name": "example3",
        "description": "five inputs in the Tsallis rate parametrisation, q = -5 ... 2",
        "terms": [
            {"coef": 1 / 5, "mu": 0, "beta": b, "q": qq}
            for b, qq in zip([5, 4, 3, 2, 1], [-5, -1, 0, 1, 2])
        ],
        "options": {"n_points": 2**14},
        "x": "-10:10:301",
        "probs": [0.025, 0.975],
    }


def _example4() -> dict:
    return {
        "name": "example4",
        "description": "extreme tails: q = 0, 1, 2.9 (nu = 0.05); adaptive backend",
        "terms": [
            {"coef": 1 / 3, "mu": 0, "sigma": 1, "q": 0},
            {"coef": 1 / 3, "mu": 0, "sigma": 0.5, "q": 1},
            {"coef": 1 / 3, "mu": 0, "sigma": 0.1, "q": 2.9},
        ],
        "options": {"backend": "adaptive", "accelerate": True},
        "x": ",".join(f"1e{k}" for k in range(10, 100, 10)),
        "probs": [0.025, 0.975],
    }


PRESETS = {
    "example1": _example1,
    "example2": _example2,
    "example3": _example3,
    "example4": _example4,
}


def preset_names() -> List[str]:
    return list(PRESETS)


def preset(name: str) -> ModelSpec:
    """Model specification of a named example (``example1`` ... ``example4``)."""
    try:
        build = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return parse_model_spec(build())


def preset_documents() -> Dict[str, dict]:
    return {name: build() for name, build in PRESETS.items()}
