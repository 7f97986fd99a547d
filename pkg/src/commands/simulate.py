from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..oneshot import OneShotParams
from ..protosim import LetterModel, SimResult, SimulationBudget, exact_evaluate, run_monte_carlo, soundness_report
from .base_command import BaseCommand
from .region import SchemeInput


class SimInput(SchemeInput):
    I_list: List[int]
    J_list: List[int]
    order: List[int] = Field(default_factory=list)
    blocklength: int = Field(1, ge=1)
    codebook_seed: int = Field(0, ge=0)
    budget: SimulationBudget = Field(default_factory=SimulationBudget)
    workers: Optional[int] = Field(None, ge=1)

    def sizes(self) -> OneShotParams:
        return OneShotParams(tuple(self.I_list), tuple(self.J_list), tuple(self.order))


class McInput(SimInput):
    trials: int = Field(10_000, ge=1)
    source_seed: int = Field(0, ge=0)


class SoundnessInput(SimInput):
    seeds: int = Field(20, ge=1, description="Codebook seeds codebook_seed .. codebook_seed+seeds-1.")


class SimOutput(BaseModel):
    """Per-receiver lists are indexed by receiver label; `order` is the codebook order used."""

    mode: str
    order: List[int]
    n: int
    key_size: int
    error: List[float]
    std_errors: List[float]
    leakage: List[float]
    leakage_biased: bool
    tv: List[float]
    tv_joint: float
    epsilon_n: float
    nu_n: float
    trials: Optional[int] = None
    codebook_seeds: List[int]
    source_seed: Optional[int] = None
    fallback_v: float
    fallback_w: List[float]


class SoundnessOutput(BaseModel):
    sound: bool
    entries: List[Dict[str, Any]]
    error: List[float]
    leakage: List[float]
    codebook_seeds: List[int]


_SIM_NATS = frozenset({"leakage", "nu_n"})


def _by_label(result: SimResult, sizes: OneShotParams) -> Dict[str, Any]:
    return {**result.relabeled(sizes.order).as_dict(), "order": list(sizes.order)}


class ExactCommand(BaseCommand[SimInput, SimOutput]):
    name = "simulate.exact"
    description = "Exact error, leakage and key-distribution distance of one realized codebook"
    input_model = SimInput
    output_model = SimOutput
    nats_fields = _SIM_NATS
    tags = frozenset({"simulate"})

    def execute(self, params: SimInput, *, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        sizes = params.sizes()
        model = LetterModel.from_scheme(params.source, params.scheme, sizes.order)
        result = exact_evaluate(model, sizes, params.blocklength, params.codebook_seed, params.budget)
        return _by_label(result, sizes)


class MonteCarloCommand(BaseCommand[McInput, SimOutput]):
    name = "simulate.mc"
    description = "Monte Carlo estimate of the operational metrics of one realized codebook"
    input_model = McInput
    output_model = SimOutput
    nats_fields = _SIM_NATS
    tags = frozenset({"simulate"})

    def execute(self, params: McInput, *, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        sizes = params.sizes()
        model = LetterModel.from_scheme(params.source, params.scheme, sizes.order)
        result = run_monte_carlo(
            model,
            sizes,
            params.blocklength,
            params.trials,
            params.codebook_seed,
            params.source_seed,
            params.budget,
            params.workers,
        )
        return _by_label(result, sizes)


class SoundnessCommand(BaseCommand[SoundnessInput, SoundnessOutput]):
    name = "simulate.soundness"
    description = "Codebook-averaged exact error against the one-shot error bound"
    input_model = SoundnessInput
    output_model = SoundnessOutput
    nats_fields = frozenset({"leakage"})
    tags = frozenset({"simulate", "oneshot"})

    def execute(self, params: SoundnessInput, *, context: Optional[Dict[str, Any]] = None) -> SoundnessOutput:
        seeds = list(range(params.codebook_seed, params.codebook_seed + params.seeds))
        report = soundness_report(
            params.source,
            params.scheme,
            params.sizes(),
            params.blocklength,
            seeds,
            params.budget,
            params.workers,
        )
        data = report.as_dict()
        mean = report.averaged.mean.relabeled(params.sizes().order)
        return SoundnessOutput(
            sound=data["sound"],
            entries=data["entries"],
            error=list(mean.error),
            leakage=list(mean.leakage),
            codebook_seeds=seeds,
        )
