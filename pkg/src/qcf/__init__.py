"""Exact distributions of linear combinations of Tsallis q-Gaussian variables.

The characteristic function of ``Y = sum_k c_k X_k`` with independent
``X_k ~ TQG(mu_k, sigma_k, q_k)`` is the product of the inputs'
characteristic functions; inverting it numerically gives the PDF, CDF,
quantiles and coverage intervals of ``Y``. A Monte Carlo sampler provides an
independent cross-check.

>>> from qcf import LinearModel, characteristic_function, quantile_adaptive
>>> m = LinearModel.from_arrays(coef=[1.0], mu=[0.0], sigma=[1.0], q=[1.0])
>>> round(quantile_adaptive(characteristic_function(m), 0.975), 6)
1.959964
"""

from .exceptions import BracketError, ConvergenceError, DomainError, InvalidBoundsError, QcfError
from .inversion import (
    Coverage,
    DistResult,
    InversionOptions,
    cdf_adaptive,
    gil_pelaez_cdf,
    gil_pelaez_pdf,
    invert_on_grid,
    quantile_adaptive,
)
from .mcm import McmOptions, McmResult, ks_statistic, propagate, sample_tqg
from .model import (
    CharFn,
    DerivedParams,
    LinearModel,
    QGaussianParams,
    Regime,
    cf_linear_combination,
    cf_standard,
    cf_tqg,
    characteristic_function,
    derive_params,
    pdf_direct,
    cdf_direct,
    sigma_from_tsallis_beta,
    support,
)
from .modelspec import ModelSpec, load_model_spec, parse_model_spec
from .presets import preset, preset_names
from .specfun import Status, SpecFunResult, bessel_j, bessel_k, gamma_fn, hyp0f1

__version__ = "0.1.0"

__all__ = [
    "BracketError", "ConvergenceError", "DomainError", "InvalidBoundsError", "QcfError",
    "Coverage", "DistResult", "InversionOptions", "cdf_adaptive", "gil_pelaez_cdf",
    "gil_pelaez_pdf", "invert_on_grid", "quantile_adaptive",
    "McmOptions", "McmResult", "ks_statistic", "propagate", "sample_tqg",
    "CharFn", "DerivedParams", "LinearModel", "QGaussianParams", "Regime",
    "cf_linear_combination", "cf_standard", "cf_tqg", "characteristic_function",
    "derive_params", "pdf_direct", "cdf_direct", "sigma_from_tsallis_beta", "support",
    "ModelSpec", "load_model_spec", "parse_model_spec", "preset", "preset_names",
    "Status", "SpecFunResult", "bessel_j", "bessel_k", "gamma_fn", "hyp0f1",
]
