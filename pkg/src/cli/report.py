from __future__ import annotations

import math
import sys
from typing import Any, Dict, FrozenSet, List, Literal, Optional, TextIO

from pydantic import BaseModel, Field

LN2 = math.log(2.0)

Units = Literal["bits", "nats"]


class RunReport(BaseModel):
    """
    One self-describing document per run.

    `command` echoes the arguments after option parsing, `resolved_config` holds
    every setting with defaults filled in, and `results` is the command output in
    `units`. Only `wall_time` varies between identical runs.
    """

    command: List[str]
    subcommand: str
    resolved_config: Dict[str, Any]
    seeds: Dict[str, int] = Field(default_factory=dict)
    units: Units
    results: Dict[str, Any]
    wall_time: float


def _scale(value: Any, factor: float) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float)):
        return value / factor
    if isinstance(value, list):
        return [_scale(v, factor) for v in value]
    return value


def convert_units(payload: Dict[str, Any], nats_fields: FrozenSet[str], units: Units) -> Dict[str, Any]:
    """Copy of `payload` with the nats-valued fields divided by ln 2 when bits are requested."""
    if units == "nats":
        return dict(payload)
    return {k: _scale(v, LN2) if k in nats_fields else v for k, v in payload.items()}


def to_nats(value: Optional[float], units: Units) -> Optional[float]:
    """Input-side counterpart of `convert_units` for rates given on the command line."""
    if value is None or units == "nats":
        return value
    return value * LN2


def emit(report: RunReport, stream: Optional[TextIO] = None, *, indent: int = 2) -> None:
    out = stream or sys.stdout
    out.write(report.model_dump_json(indent=indent or None))
    out.write("\n")
    out.flush()
