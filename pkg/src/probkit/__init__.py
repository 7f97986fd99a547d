"""Exact finite-alphabet probability and information-measure kernels (all in nats)."""

from .measures import (
    conditional_mutual_information,
    disjoint_groups,
    entropy,
    marginalize,
    mutual_information,
    total_variation,
)
from .pmf import Channel, JointPmf, attach_channel, doubly_symmetric_binary, flatten_groups
from .search import SearchConfig
from .spectrum import DensitySpectrum, density_spectrum

__all__ = [
    "Channel",
    "DensitySpectrum",
    "JointPmf",
    "SearchConfig",
    "attach_channel",
    "conditional_mutual_information",
    "density_spectrum",
    "disjoint_groups",
    "doubly_symmetric_binary",
    "entropy",
    "flatten_groups",
    "marginalize",
    "mutual_information",
    "total_variation",
]
