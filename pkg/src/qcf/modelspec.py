"""JSON model files.

A model file is one JSON object::

    {
      "terms": [
        {"coef": 0.8, "mu": 0.0, "sigma": 3.0, "q": -100},
        {"coef": 0.2, "mu": 0.0, "beta": 5.0, "q": 1.5}
      ],
      "options": {"n_points": 1024},
      "mcm": {"n_samples": 100000, "seed": 0},
      "x": [-1.0, 0.0, 1.0],
      "probs": [0.025, 0.975]
    }

Each term gives exactly one of ``sigma`` or ``beta`` (the Tsallis rate,
``sigma = sqrt(1 / (2 beta))``), either flat or nested as
``"scale": {"sigma": ...}``. ``options``, ``mcm``, ``x`` and ``probs`` are
optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .exceptions import DomainError
from .inversion import InversionOptions
from .mcm import McmOptions
from .model import LinearModel, QGaussianParams, sigma_from_tsallis_beta

__all__ = ["ModelSpec", "TermSpec", "load_model_spec", "parse_model_spec", "parse_grid_spec"]

_TERM_KEYS = {"coef", "mu", "sigma", "beta", "q", "scale"}
_TOP_KEYS = {"terms", "options", "mcm", "x", "probs", "name", "description"}


@dataclass(frozen=True)
class TermSpec:
    coef: float
    mu: float
    q: float
    sigma: Optional[float] = None
    beta: Optional[float] = None

    def params(self) -> QGaussianParams:
        sigma = self.sigma if self.sigma is not None else sigma_from_tsallis_beta(self.beta)
        return QGaussianParams(self.mu, sigma, self.q)

    def to_dict(self) -> Dict[str, float]:
        out = {"coef": self.coef, "mu": self.mu}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        else:
            out["beta"] = self.beta
        out["q"] = self.q
        return out


@dataclass(frozen=True)
class ModelSpec:
    terms: List[TermSpec]
    options: Dict[str, Any] = field(default_factory=dict)
    mcm: Dict[str, Any] = field(default_factory=dict)
    x: Optional[Union[List[float], Dict[str, Any]]] = None
    probs: Optional[List[float]] = None
    name: Optional[str] = None
    description: Optional[str] = None

    def model(self) -> LinearModel:
        return LinearModel(tuple((t.coef, t.params()) for t in self.terms))

    def inversion_options(self, **overrides) -> InversionOptions:
        return InversionOptions(**{**self.options, **overrides})

    def mcm_options(self, **overrides) -> McmOptions:
        return McmOptions(**{**self.mcm, **overrides})

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        if self.description:
            out["description"] = self.description
        out["terms"] = [t.to_dict() for t in self.terms]
        if self.options:
            out["options"] = dict(self.options)
        if self.mcm:
            out["mcm"] = dict(self.mcm)
        if self.x is not None:
            out["x"] = self.x
        if self.probs is not None:
            out["probs"] = list(self.probs)
        return out


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{where}: expected a finite number, got {value!r}")
    return value


def _parse_term(raw: Any, k: int) -> TermSpec:
    where = f"term {k}"
    if not isinstance(raw, dict):
        raise DomainError(f"{where}: expected an object, got {type(raw).__name__}")
    unknown = set(raw) - _TERM_KEYS
    if unknown:
        raise DomainError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("coef", "q"):
        if key not in raw:
            raise DomainError(f"{where}: missing '{key}'")
    scale = dict(raw.get("scale") or {})
    if not isinstance(raw.get("scale", {}), dict):
        raise DomainError(f"{where}: 'scale' must be an object")
    for key in ("sigma", "beta"):
        if key in raw:
            if key in scale:
                raise DomainError(f"{where}: '{key}' given twice")
            scale[key] = raw[key]
    if set(scale) - {"sigma", "beta"}:
        raise DomainError(f"{where}: scale accepts only 'sigma' or 'beta'")
    if len(scale) != 1:
        raise DomainError(f"{where}: give exactly one of 'sigma' or 'beta'")
    sigma = beta = None
    if "sigma" in scale:
        sigma = _number(scale["sigma"], f"{where} sigma")
    else:
        beta = _number(scale["beta"], f"{where} beta")
    term = TermSpec(
        coef=_number(raw["coef"], f"{where} coef"),
        mu=_number(raw.get("mu", 0.0), f"{where} mu"),
        q=_number(raw["q"], f"{where} q"),
        sigma=sigma,
        beta=beta,
    )
    try:
        term.params()
    except DomainError as exc:
        raise DomainError(f"{where}: {exc}") from None
    return term


def _check_keys(section: Dict[str, Any], cls, name: str) -> Dict[str, Any]:
    if not isinstance(section, dict):
        raise DomainError(f"'{name}' must be an object")
    allowed = {f.name for f in fields(cls)}
    unknown = set(section) - allowed
    if unknown:
        raise DomainError(f"'{name}': unknown keys {sorted(unknown)}")
    return dict(section)


def parse_model_spec(data: Any) -> ModelSpec:
    """Validate a decoded JSON document and build a :class:`ModelSpec`."""
    if not isinstance(data, dict):
        raise DomainError("model file must hold a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise DomainError(f"unknown top-level keys {sorted(unknown)}")
    terms = data.get("terms")
    if not isinstance(terms, list) or not terms:
        raise DomainError("model needs a non-empty 'terms' list")
    parsed = [_parse_term(t, k) for k, t in enumerate(terms)]
    spec = ModelSpec(
        terms=parsed,
        options=_check_keys(data.get("options", {}), InversionOptions, "options"),
        mcm=_check_keys(data.get("mcm", {}), McmOptions, "mcm"),
        x=data.get("x"),
        probs=data.get("probs"),
        name=data.get("name"),
        description=data.get("description"),
    )
    spec.model()  # coefficient checks
    spec.inversion_options()
    return spec


def load_model_spec(path: Union[str, Path]) -> ModelSpec:
    """Read and validate a model file."""
    text = Path(path).read_text()
    if not text.strip():
        raise DomainError(f"{path}: model file is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return parse_model_spec(data)


def parse_grid_spec(spec: Union[str, List[float], None], support=None) -> Optional[List[float]]:
    """Turn a grid specification into a list of floats.

    Accepted forms: a list of numbers; ``"a,b,c"``; ``"a:b:n"`` for ``n``
    evenly spaced points from ``a`` to ``b``; ``"support:n"`` for ``n``
    points across ``support`` (a bounded model's exact support).

    >>> parse_grid_spec("0:1:3")
    [0.0, 0.5, 1.0]
    >>> parse_grid_spec("1e10,1e20")
    [10000000000.0, 1e+20]
    """
    if spec is None:
        return None
    if isinstance(spec, (list, tuple)):
        return [_number(v, "grid") for v in spec]
    if not isinstance(spec, str):
        raise DomainError(f"grid must be a list or a string, got {spec!r}")
    text = spec.strip()
    if not text:
        raise DomainError("empty grid specification")
    if ":" in text:
        parts = [p.strip() for p in text.split(":")]
        if parts[0] == "support" and len(parts) == 2:
            if support is None:
                raise DomainError("'support:n' needs a model with bounded support")
            lo, hi = support
            n = parts[1]
        elif len(parts) == 3:
            lo, hi, n = parts
        else:
            raise DomainError(f"bad grid specification {spec!r}; use a:b:n or support:n")
        try:
            lo, hi, count = float(lo), float(hi), int(n)
        except ValueError:
            raise DomainError(f"bad grid specification {spec!r}") from None
        if count < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
            raise DomainError(f"bad grid specification {spec!r}")
        return [float(v) for v in np.linspace(lo, hi, count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"bad grid specification {spec!r}") from None
