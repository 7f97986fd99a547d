from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..oneshot import OneShotParams, asymptotic_parameters, theorem3_bounds
from ..regions import scheme_informations
from .base_command import BaseCommand
from .region import SchemeInput


class BoundsInput(SchemeInput):
    I_list: List[int] = Field(..., description="I_0, ..., I_m")
    J_list: List[int] = Field(..., description="J_1, ..., J_m")
    order: List[int] = Field(default_factory=list, description="Receiver labels in codebook order.")
    blocklength: int = Field(1, ge=1)


class BoundsOutput(BaseModel):
    blocklength: int
    key_size: int
    order: List[int]
    T: float
    T_l: List[float]
    epsilon: float
    error_bounds: List[float]
    effective_error_bounds: List[float]
    secrecy_bounds: List[float]
    effective_secrecy_bounds: List[float]
    deltas: List[float]
    variant_epsilon: float
    variant_error_bounds: List[float]


class ParamsInput(SchemeInput):
    blocklength: int = Field(..., ge=1)
    beta: float = Field(..., gt=0, description="Rate slack in nats.")
    covering_slack: bool = False


class ParamsOutput(BaseModel):
    blocklength: int
    beta: float
    I_list: List[int]
    J_list: List[int]
    order: List[int]
    i_uz: float
    i_us_x: List[float]
    i_s_x_given_u: List[float]


class BoundsCommand(BaseCommand[BoundsInput, BoundsOutput]):
    name = "oneshot.bounds"
    description = "One-shot error and leakage bounds for given codebook sizes"
    input_model = BoundsInput
    output_model = BoundsOutput
    # leakage bounds share the unit of log|K|
    nats_fields = frozenset({"secrecy_bounds", "effective_secrecy_bounds"})
    tags = frozenset({"oneshot"})

    def execute(self, params: BoundsInput, *, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        sizes = OneShotParams(tuple(params.I_list), tuple(params.J_list), tuple(params.order))
        bounds = theorem3_bounds(params.source, params.scheme, sizes, blocklength=params.blocklength)
        return {**bounds.as_dict(), "order": list(sizes.order)}


class ParamsCommand(BaseCommand[ParamsInput, ParamsOutput]):
    name = "oneshot.params"
    description = "Blocklength-n codebook sizes from the scheme's single-letter informations"
    input_model = ParamsInput
    output_model = ParamsOutput
    nats_fields = frozenset({"beta", "i_uz", "i_us_x", "i_s_x_given_u"})
    tags = frozenset({"oneshot"})

    def execute(self, params: ParamsInput, *, context: Optional[Dict[str, Any]] = None) -> ParamsOutput:
        info = scheme_informations(params.source, params.scheme)
        sizes = asymptotic_parameters(
            info.i_uz,
            info.i_us_x,
            info.i_s_x_given_u,
            params.blocklength,
            params.beta,
            covering_slack=params.covering_slack,
        )
        return ParamsOutput(
            blocklength=params.blocklength,
            beta=params.beta,
            I_list=list(sizes.I_list),
            J_list=list(sizes.J_list),
            order=list(sizes.order),
            i_uz=info.i_uz,
            i_us_x=list(info.i_us_x),
            i_s_x_given_u=list(info.i_s_x_given_u),
        )
