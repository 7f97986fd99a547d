from __future__ import annotations

import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..hyperc import HcPoint, rate_margin, theorem4_bound, zero_rate_margin
from .base_command import BaseCommand, CommandInput


class ConverseInput(CommandInput):
    K: int = Field(..., ge=2, description="|K|")
    W: List[int] = Field(..., description="|W_1|, ..., |W_m|")
    p: List[float]


class MarginInput(ConverseInput):
    blocklength: Optional[int] = Field(None, ge=1, description="Also report the per-symbol rate form.")


class Theorem4Output(BaseModel):
    bound: float
    vacuous: bool


class MarginOutput(BaseModel):
    margin: float
    rate_margin: Optional[float] = None


class Theorem4Command(BaseCommand[ConverseInput, Theorem4Output]):
    name = "converse.theorem4"
    description = "Lower bound on half the distance of the keys from the ideal joint distribution"
    input_model = ConverseInput
    output_model = Theorem4Output
    tags = frozenset({"converse"})

    def execute(self, params: ConverseInput, *, context: Optional[Dict[str, Any]] = None) -> Theorem4Output:
        bound = theorem4_bound(params.K, params.W, HcPoint(tuple(params.p)))
        return Theorem4Output(bound=bound, vacuous=bound <= 0.0)


class MarginCommand(BaseCommand[MarginInput, MarginOutput]):
    name = "converse.margin"
    description = "Zero-rate margin log|K| - sum_l (1/p_l)(log|K| - log|W_l|)"
    input_model = MarginInput
    output_model = MarginOutput
    nats_fields = frozenset({"margin", "rate_margin"})
    tags = frozenset({"converse"})

    def execute(self, params: MarginInput, *, context: Optional[Dict[str, Any]] = None) -> MarginOutput:
        point = HcPoint(tuple(params.p))
        margin = zero_rate_margin(params.K, params.W, point)
        per_symbol = None
        if params.blocklength:
            n = params.blocklength
            per_symbol = rate_margin(math.log(params.K) / n, [math.log(w) / n for w in params.W], point)
        return MarginOutput(margin=margin, rate_margin=per_symbol)
