from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..errors import UsageError
from ..hyperc import HcPoint, HcSearchConfig, check_hypercontractive, functional_check, functional_falsify, sdpi_coefficient
from ..probkit import JointPmf, marginalize
from ..regions import SourceSpec
from .base_command import BaseCommand
from .region import SourceInput


def receivers_law(source: SourceSpec) -> JointPmf:
    """Law of (X_1, ..., X_m)."""
    return marginalize(source.pmf, tuple(source.receivers))


def pair_law(source: SourceSpec) -> JointPmf:
    """(X_1, X_2) for two receivers; (Z, X_1) for a single one."""
    if source.m == 2:
        return marginalize(source.pmf, (1, 2))
    if source.m == 1:
        return source.pmf
    raise UsageError(f"the contraction coefficient needs m <= 2, source has m = {source.m}")


class HcInput(SourceInput):
    p: List[float]
    search: HcSearchConfig = Field(default_factory=HcSearchConfig)


class FunctionalInput(SourceInput):
    p: List[float]
    functions: Optional[List[List[float]]] = Field(None, description="One value table per receiver; random search when omitted.")
    trials: int = Field(10_000, ge=1)
    seed: int = Field(0, ge=0)


class SdpiInput(SourceInput):
    search: HcSearchConfig = Field(default_factory=HcSearchConfig)


class HcOutput(BaseModel):
    status: str
    margin: float
    witness_label: str
    witness: Optional[List[List[float]]] = None
    evaluations: int
    restarts: int


class FunctionalOutput(BaseModel):
    mode: str
    satisfied: bool
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    trials: Optional[int] = None
    worst_gap: Optional[float] = None
    violations: Optional[int] = None
    witness: Optional[List[List[float]]] = None


class SdpiOutput(BaseModel):
    coefficient: float


class HcCheckCommand(BaseCommand[HcInput, HcOutput]):
    name = "hc.check"
    description = "Search for a channel violating (p_1, ..., p_m)-hypercontractivity of the receivers' law"
    input_model = HcInput
    output_model = HcOutput
    nats_fields = frozenset({"margin"})
    tags = frozenset({"hc", "search"})

    def execute(self, params: HcInput, *, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        verdict = check_hypercontractive(receivers_law(params.source), HcPoint(tuple(params.p)), params.search)
        return verdict.as_dict()


class FunctionalCommand(BaseCommand[FunctionalInput, FunctionalOutput]):
    name = "hc.functional"
    description = "Functional form E[prod f_l(X_l)] <= prod ||f_l||_p_l, for given or random functions"
    input_model = FunctionalInput
    output_model = FunctionalOutput
    tags = frozenset({"hc"})

    def execute(self, params: FunctionalInput, *, context: Optional[Dict[str, Any]] = None) -> FunctionalOutput:
        law = receivers_law(params.source)
        point = HcPoint(tuple(params.p))
        if params.functions is not None:
            check = functional_check(law, point, params.functions)
            return FunctionalOutput(mode="check", satisfied=check.satisfied, lhs=check.lhs, rhs=check.rhs)
        found = functional_falsify(law, point, params.trials, params.seed)
        return FunctionalOutput(
            mode="falsify",
            satisfied=not found.violated,
            trials=found.trials,
            worst_gap=found.worst_gap,
            violations=found.violations,
            witness=[list(f) for f in found.witness],
        )


class SdpiCommand(BaseCommand[SdpiInput, SdpiOutput]):
    name = "hc.sdpi"
    description = "Strong data-processing coefficient of the receivers' pair"
    input_model = SdpiInput
    output_model = SdpiOutput
    tags = frozenset({"hc", "search"})

    def execute(self, params: SdpiInput, *, context: Optional[Dict[str, Any]] = None) -> SdpiOutput:
        return SdpiOutput(coefficient=sdpi_coefficient(pair_law(params.source), params.search))
