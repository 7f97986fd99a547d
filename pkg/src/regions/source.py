from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ..errors import OmniscientMismatchError, UsageError
from ..probkit import Channel, JointPmf, attach_channel, marginalize

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SourceSpec:
    """
    Joint source over (Z, X_1, ..., X_m): coordinate 0 is the communicator,
    coordinate l is receiver l.

    With `omniscient` set, Z's alphabet is the row-major product of the X
    alphabets and all mass sits on z = (x_1, ..., x_m).
    """

    pmf: JointPmf
    omniscient: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        if self.pmf.ndim < 2:
            raise UsageError("a source needs Z and at least one receiver X_1")
        if self.omniscient:
            check_omniscient(self.pmf)

    @classmethod
    def from_receivers(cls, x_pmf: JointPmf, *, name: str = "") -> "SourceSpec":
        """Omniscient source Z = (X_1, ..., X_m) built from the law of X^m."""
        sizes = x_pmf.alphabet_sizes
        table = np.zeros((math.prod(sizes),) + sizes)
        for x in np.ndindex(*sizes):
            table[(int(np.ravel_multi_index(x, sizes)),) + x] = x_pmf.probs[x]
        return cls(JointPmf.from_table(table), omniscient=True, name=name)

    @classmethod
    def from_channels(cls, z_pmf: np.ndarray, channels: Sequence[Channel], *, name: str = "") -> "SourceSpec":
        """Z ~ z_pmf and each X_l drawn independently through channels[l-1] from Z."""
        pmf = JointPmf.from_table(np.asarray(z_pmf, dtype=float))
        for ch in channels:
            pmf = attach_channel(pmf, ch, 0)
        return cls(pmf, name=name)

    @property
    def m(self) -> int:
        return self.pmf.ndim - 1

    @property
    def z_size(self) -> int:
        return self.pmf.alphabet_sizes[0]

    @property
    def x_sizes(self) -> Tuple[int, ...]:
        return self.pmf.alphabet_sizes[1:]

    @property
    def receivers(self) -> range:
        return range(1, self.m + 1)

    def z_marginal(self) -> np.ndarray:
        return marginalize(self.pmf, 0).probs

    def receiver_pmf(self, l: int) -> JointPmf:
        """Joint law of (Z, X_l)."""
        return marginalize(self.pmf, (0, l))


def check_omniscient(pmf: JointPmf) -> None:
    x_sizes = pmf.alphabet_sizes[1:]
    if pmf.alphabet_sizes[0] != math.prod(x_sizes):
        raise OmniscientMismatchError(
            f"omniscient Z needs {math.prod(x_sizes)} symbols, source has {pmf.alphabet_sizes[0]}"
        )
    support = np.argwhere(pmf.probs > 0)
    expected = np.ravel_multi_index(tuple(support[:, 1:].T), x_sizes)
    if np.any(support[:, 0] != expected):
        raise OmniscientMismatchError("omniscient flag set but Z differs from (X_1, ..., X_m) with positive mass")


@dataclass(frozen=True)
class AuxScheme:
    """Factorized auxiliaries Q_{U|Z} prod_l Q_{S_l|UZ}."""

    q_u_given_z: Channel
    q_s_given_uz: Tuple[Channel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_s_given_uz", tuple(self.q_s_given_uz))
        u = self.u_card
        for l, ch in enumerate(self.q_s_given_uz, start=1):
            if len(ch.input_sizes) != 2 or ch.input_sizes[0] != u:
                raise UsageError(f"Q_(S_{l}|UZ) must read (U, Z) with |U|={u}, got inputs {ch.input_sizes}")

    @property
    def u_card(self) -> int:
        return self.q_u_given_z.output_size

    @property
    def s_cards(self) -> Tuple[int, ...]:
        return tuple(ch.output_size for ch in self.q_s_given_uz)

    def check(self, source: SourceSpec) -> None:
        if self.q_u_given_z.input_sizes != (source.z_size,):
            raise UsageError(f"Q_(U|Z) reads {self.q_u_given_z.input_sizes}, |Z| = {source.z_size}")
        if len(self.q_s_given_uz) != source.m:
            raise UsageError(f"scheme has {len(self.q_s_given_uz)} S-channels for m = {source.m}")
        for l, ch in enumerate(self.q_s_given_uz, start=1):
            if ch.input_sizes[1] != source.z_size:
                raise UsageError(f"Q_(S_{l}|UZ) reads |Z| = {ch.input_sizes[1]}, source has {source.z_size}")

    @classmethod
    def degenerate(cls, source: SourceSpec) -> "AuxScheme":
        """U and every S_l constant."""
        return cls(
            Channel.constant((source.z_size,)),
            tuple(Channel.constant((1, source.z_size)) for _ in source.receivers),
        )


@dataclass(frozen=True)
class RatePoint:
    """Extreme point (R, R_1, ..., R_m) in nats per symbol."""

    R: float
    R_l: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        values = (self.R,) + tuple(self.R_l)
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise UsageError(f"rates must be finite and nonnegative, got {values}")
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "R_l", tuple(float(r) for r in self.R_l))

    def to_bits(self) -> "RatePoint":
        return RatePoint(self.R / LN2, tuple(r / LN2 for r in self.R_l))

    def as_dict(self) -> dict:
        return {"R": self.R, "R_l": list(self.R_l)}


# Coordinates of the per-receiver induced joint built by `receiver_joint`.
Z, X, U, S = 0, 1, 2, 3


def receiver_joint(source: SourceSpec, aux: AuxScheme, l: int) -> JointPmf:
    """Induced joint of (Z, X_l, U, S_l); the chain (U, S_l) - Z - X_l holds by construction."""
    joint = attach_channel(source.receiver_pmf(l), aux.q_u_given_z, Z)
    return attach_channel(joint, aux.q_s_given_uz[l - 1], (U, Z))


def reorder_receivers(source: SourceSpec, aux: AuxScheme, order: Sequence[int]) -> Tuple[SourceSpec, AuxScheme]:
    """
    Relabel receivers so that position k holds original receiver order[k].

    The result is never flagged omniscient: Z keeps the original row-major
    layout of (X_1, ..., X_m).
    """
    order = tuple(int(o) for o in order)
    if sorted(order) != list(source.receivers):
        raise UsageError(f"order must permute 1..{source.m}, got {order}")
    aux.check(source)
    if order == tuple(source.receivers):
        return source, aux
    probs = np.transpose(source.pmf.probs, (0,) + order)
    reordered = SourceSpec(JointPmf.from_table(probs), name=source.name)
    return reordered, AuxScheme(aux.q_u_given_z, tuple(aux.q_s_given_uz[o - 1] for o in order))
