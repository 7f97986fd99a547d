"""One-shot achievability bounds of the likelihood-encoder key generation scheme."""

from .bounds import (
    OneShotBounds,
    compute_T,
    compute_T_l,
    compute_epsilon,
    scheme_spectra,
    secrecy_infimum,
    theorem3_bounds,
)
from .params import OneShotParams, asymptotic_parameters, ceil_exp

__all__ = [
    "OneShotBounds",
    "OneShotParams",
    "asymptotic_parameters",
    "ceil_exp",
    "compute_T",
    "compute_T_l",
    "compute_epsilon",
    "scheme_spectra",
    "secrecy_infimum",
    "theorem3_bounds",
]
