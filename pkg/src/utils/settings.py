from __future__ import annotations

from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import UsageError
from ..hyperc import HcSearchConfig
from ..probkit import SearchConfig
from ..protosim import SimulationBudget


class OutputSettings(BaseModel):
    units: Literal["bits", "nats"] = "bits"
    indent: int = Field(2, ge=0)


class LoggingSettings(BaseModel):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"


class WorkbenchSettings(BaseModel):
    """Everything a run can be configured with; every field has a default."""

    model_config = ConfigDict(extra="forbid")

    search: SearchConfig = Field(default_factory=SearchConfig)
    hc_search: HcSearchConfig = Field(default_factory=HcSearchConfig)
    simulation: SimulationBudget = Field(default_factory=SimulationBudget)
    output: OutputSettings = Field(default_factory=OutputSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @classmethod
    def from_tree(cls, tree: Dict[str, Any]) -> "WorkbenchSettings":
        try:
            return cls.model_validate(tree or {})
        except ValidationError as ve:
            raise UsageError(f"invalid configuration: {ve}") from ve
