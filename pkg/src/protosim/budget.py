from __future__ import annotations

import logging

from pydantic import BaseModel, Field

from ..errors import ResourceBudgetError

logger = logging.getLogger(__name__)


class SimulationBudget(BaseModel):
    """Size limits for realized codebooks and exact enumeration."""

    max_table_cells: int = Field(10**7, ge=1, description="Codebook symbols I*(1+sum_l J_l)*n.")
    max_enumeration_states: int = Field(10**7, ge=1, description="Joint states visited by exact evaluation.")


def check_budget(what: str, required: int, allowed: int) -> None:
    if required > allowed:
        raise ResourceBudgetError(
            f"{what} needs {required} cells, budget allows {allowed}",
            required=required,
            allowed=allowed,
        )
    logger.info("%s: %d of %d cells", what, required, allowed)
