import math

import numpy as np

from src.probkit import Channel, JointPmf
from src.regions import AuxScheme, SourceSpec

LN2 = math.log(2.0)


def h2(p: float) -> float:
    """Binary entropy in nats."""
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


def z_scheme(source: SourceSpec) -> AuxScheme:
    """U = Z, every S_l constant."""
    return AuxScheme(
        Channel.identity(source.z_size),
        tuple(Channel.constant((source.z_size, source.z_size)) for _ in source.receivers),
    )


def const_scheme(source: SourceSpec) -> AuxScheme:
    return AuxScheme.degenerate(source)


def random_source(rng: np.random.Generator, z_size: int, x_sizes) -> SourceSpec:
    table = rng.dirichlet(np.ones(z_size * math.prod(x_sizes))).reshape((z_size,) + tuple(x_sizes))
    return SourceSpec(JointPmf.from_table(table / table.sum()))
