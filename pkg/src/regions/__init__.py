"""Achievable rate regions for key generation with one communicator."""

from .evaluators import (
    SchemeInformations,
    cr_point,
    maxform_point,
    one_way_point,
    scheme_informations,
    theorem1_point,
    theorem2_point,
    unconstrained_capacity,
)
from .search import CandidatePool, analytic_schemes, key_rate_pool, maximize_key_rate
from .source import AuxScheme, RatePoint, SourceSpec, receiver_joint, reorder_receivers

__all__ = [
    "AuxScheme",
    "CandidatePool",
    "RatePoint",
    "SchemeInformations",
    "SourceSpec",
    "analytic_schemes",
    "cr_point",
    "key_rate_pool",
    "maximize_key_rate",
    "maxform_point",
    "one_way_point",
    "receiver_joint",
    "reorder_receivers",
    "scheme_informations",
    "theorem1_point",
    "theorem2_point",
    "unconstrained_capacity",
]
