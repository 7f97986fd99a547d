from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, InstanceOf

from ..probkit import Channel, SearchConfig
from ..regions import (
    AuxScheme,
    RatePoint,
    SourceSpec,
    cr_point,
    maximize_key_rate,
    maxform_point,
    one_way_point,
    theorem1_point,
    theorem2_point,
    unconstrained_capacity,
)
from .base_command import BaseCommand, CommandInput


class SourceInput(CommandInput):
    source: InstanceOf[SourceSpec]


class SchemeInput(SourceInput):
    scheme: InstanceOf[AuxScheme]


class ChannelInput(SourceInput):
    q_u: InstanceOf[Channel] = Field(..., description="Q_{U|Z}; for omniscient sources Z indexes X^m row-major.")


class MaximizeInput(SourceInput):
    budgets: List[float] = Field(..., description="Per-receiver rate budgets in nats.")
    search: SearchConfig = Field(default_factory=SearchConfig)


class RateOutput(BaseModel):
    R: float
    R_l: List[float]

    @classmethod
    def of(cls, point: RatePoint) -> "RateOutput":
        return cls(R=point.R, R_l=list(point.R_l))


class MaximizeOutput(RateOutput):
    u_given_z: List[List[float]]
    s_given_uz: List[List[List[float]]]


class CapacityOutput(BaseModel):
    capacity: float


class _RateCommand(BaseCommand):
    output_model = RateOutput
    nats_fields = frozenset({"R", "R_l"})
    tags = frozenset({"region"})


class Theorem1Command(_RateCommand):
    name = "region.theorem1"
    description = "Extreme point (R, R_l) of the general region for a given scheme"
    input_model = SchemeInput

    def execute(self, params: SchemeInput, *, context: Optional[Dict[str, Any]] = None) -> RateOutput:
        return RateOutput.of(theorem1_point(params.source, params.scheme))


class MaxformCommand(_RateCommand):
    name = "region.maxform"
    description = "Extreme point of the max-form region achieved by the one-shot scheme"
    input_model = SchemeInput

    def execute(self, params: SchemeInput, *, context: Optional[Dict[str, Any]] = None) -> RateOutput:
        return RateOutput.of(maxform_point(params.source, params.scheme))


class Theorem2Command(_RateCommand):
    name = "region.theorem2"
    description = "Extreme point of the omniscient-helper region for a given Q_{U|X^m}"
    input_model = ChannelInput

    def execute(self, params: ChannelInput, *, context: Optional[Dict[str, Any]] = None) -> RateOutput:
        return RateOutput.of(theorem2_point(params.source, params.q_u))


class OneWayCommand(_RateCommand):
    name = "region.oneway"
    description = "One-way key rate point for a single receiver"
    input_model = ChannelInput

    def execute(self, params: ChannelInput, *, context: Optional[Dict[str, Any]] = None) -> RateOutput:
        return RateOutput.of(one_way_point(params.source, params.q_u))


class CrCommand(_RateCommand):
    name = "region.cr"
    description = "Common-randomness rate point (no secrecy constraint)"
    input_model = ChannelInput

    def execute(self, params: ChannelInput, *, context: Optional[Dict[str, Any]] = None) -> RateOutput:
        return RateOutput.of(cr_point(params.source, params.q_u))


class CapacityCommand(BaseCommand[SourceInput, CapacityOutput]):
    name = "region.capacity"
    description = "Key capacity without communication constraints, min_l I(Z;X_l)"
    input_model = SourceInput
    output_model = CapacityOutput
    nats_fields = frozenset({"capacity"})
    tags = frozenset({"region"})

    def execute(self, params: SourceInput, *, context: Optional[Dict[str, Any]] = None) -> CapacityOutput:
        return CapacityOutput(capacity=unconstrained_capacity(params.source))


class MaximizeCommand(BaseCommand[MaximizeInput, MaximizeOutput]):
    name = "region.maximize"
    description = "Largest key rate found under per-receiver rate budgets"
    input_model = MaximizeInput
    output_model = MaximizeOutput
    nats_fields = frozenset({"R", "R_l"})
    tags = frozenset({"region", "search"})

    def execute(self, params: MaximizeInput, *, context: Optional[Dict[str, Any]] = None) -> MaximizeOutput:
        point, aux = maximize_key_rate(params.source, params.budgets, params.search)
        return MaximizeOutput(
            R=point.R,
            R_l=list(point.R_l),
            u_given_z=aux.q_u_given_z.rows.tolist(),
            s_given_uz=[ch.rows.tolist() for ch in aux.q_s_given_uz],
        )
