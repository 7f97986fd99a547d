"""Hypercontractivity checks, contraction coefficients and the zero-rate converse."""

from .converse import rate_margin, theorem4_bound, zero_rate_margin
from .margins import (
    HOLDS,
    VIOLATED,
    FalsifyResult,
    FunctionalCheck,
    HcPoint,
    HcSearchConfig,
    HcVerdict,
    check_hypercontractive,
    functional_check,
    functional_falsify,
    hc_margin,
)
from .sdpi import contraction_ratio, sdpi_coefficient

__all__ = [
    "HOLDS",
    "VIOLATED",
    "FalsifyResult",
    "FunctionalCheck",
    "HcPoint",
    "HcSearchConfig",
    "HcVerdict",
    "check_hypercontractive",
    "contraction_ratio",
    "functional_check",
    "functional_falsify",
    "hc_margin",
    "rate_margin",
    "sdpi_coefficient",
    "theorem4_bound",
    "zero_rate_margin",
]
