from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from ..errors import UsageError
from ..probkit import (
    Channel,
    attach_channel,
    conditional_mutual_information as cmi,
    entropy,
    mutual_information as mi,
)
from .source import S, U, X, Z, AuxScheme, RatePoint, SourceSpec, receiver_joint


@dataclass(frozen=True)
class SchemeInformations:
    """Single-letter quantities of one (source, aux) pair, per receiver where indexed."""

    i_uz: float
    i_us_x: Tuple[float, ...]
    i_s_x_given_u: Tuple[float, ...]
    i_s_z_given_u: Tuple[float, ...]
    i_us_z_given_x: Tuple[float, ...]


def scheme_informations(source: SourceSpec, aux: AuxScheme) -> SchemeInformations:
    aux.check(source)
    joints = [receiver_joint(source, aux, l) for l in source.receivers]
    return SchemeInformations(
        i_uz=mi(joints[0], U, Z),
        i_us_x=tuple(mi(j, (U, S), X) for j in joints),
        i_s_x_given_u=tuple(cmi(j, S, X, U) for j in joints),
        i_s_z_given_u=tuple(cmi(j, S, Z, U) for j in joints),
        i_us_z_given_x=tuple(cmi(j, (U, S), Z, X) for j in joints),
    )


def theorem1_point(source: SourceSpec, aux: AuxScheme) -> RatePoint:
    """R = min{I(U;Z), I(US_l;X_l)}, R_l = I(US_l;Z|X_l)."""
    info = scheme_informations(source, aux)
    return RatePoint(min((info.i_uz,) + info.i_us_x), info.i_us_z_given_x)


def maxform_point(source: SourceSpec, aux: AuxScheme) -> RatePoint:
    """Same R as theorem1_point; R_l = max{I(S_l;Z|U), I(US_l;Z|X_l)}."""
    info = scheme_informations(source, aux)
    return RatePoint(
        min((info.i_uz,) + info.i_us_x),
        tuple(max(a, b) for a, b in zip(info.i_s_z_given_u, info.i_us_z_given_x)),
    )


def _receiver_coords(source: SourceSpec) -> Tuple[int, ...]:
    return tuple(source.receivers)


def theorem2_point(source: SourceSpec, q_u: Channel) -> RatePoint:
    """Omniscient helper: R = min{I(U;X^m), H(X_l)}, R_l = I(U;X^m) - I(U;X_l)."""
    if not source.omniscient:
        raise UsageError("theorem2_point needs an omniscient source (Z = X^m)")
    xs = _receiver_coords(source)
    joint = attach_channel(source.pmf, q_u, xs)
    u = joint.ndim - 1
    i_all = mi(joint, u, xs)
    return RatePoint(
        min([i_all] + [entropy(joint, l) for l in xs]),
        tuple(max(0.0, i_all - mi(joint, u, l)) for l in xs),
    )


def unconstrained_capacity(source: SourceSpec) -> float:
    """min_l I(Z;X_l): the key capacity without communication constraints."""
    return min(mi(source.pmf, 0, l) for l in source.receivers)


def one_way_point(source: SourceSpec, q_u: Channel) -> RatePoint:
    """Single receiver: R = I(U;X_1), R_1 = I(U;Z) - I(U;X_1) clamped at 0."""
    if source.m != 1:
        raise UsageError(f"one_way_point needs m = 1, source has m = {source.m}")
    joint = attach_channel(source.pmf, q_u, 0)
    i_ux = mi(joint, 2, 1)
    return RatePoint(i_ux, (max(0.0, mi(joint, 2, 0) - i_ux),))


def cr_point(source: SourceSpec, q_u: Channel) -> RatePoint:
    """Common randomness: R = I(U;Z), R_l = I(U;Z) - I(U;X_l)."""
    joint = attach_channel(source.pmf, q_u, 0)
    u = joint.ndim - 1
    i_uz = mi(joint, u, 0)
    return RatePoint(i_uz, tuple(max(0.0, i_uz - mi(joint, u, l)) for l in source.receivers))
