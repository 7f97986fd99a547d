from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, Field

from .pmf import normalize_rows

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Channel parameters during a search: one row table per channel.
RowState = Tuple[np.ndarray, ...]

THREADS_ENV = "SKWB_THREADS"


class SearchConfig(BaseModel):
    """Knobs shared by every seeded channel search."""

    restarts: int = Field(64, ge=0, description="Number of seeded random restarts.")
    iterations: int = Field(500, ge=0, description="Local perturbation steps per restart.")
    seed: int = Field(0, ge=0, description="Root seed; restart r uses the stream (seed, r).")
    u_card: Optional[int] = Field(None, ge=1, description="Override for |U|.")
    s_card: Optional[int] = Field(None, ge=1, description="Override for |S_l|.")
    workers: Optional[int] = Field(None, ge=1, description="Parallel workers (default: $SKWB_THREADS or 1).")
    rate_weight: float = Field(10.0, ge=1.0, description="Largest weight on R_l in the scalarized key-rate objectives.")
    analytic_seeds: bool = Field(True, description="Also evaluate the analytic schemes.")


def resolve_workers(workers: Optional[int]) -> int:
    if workers:
        return int(workers)
    env = os.environ.get(THREADS_ENV, "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return 1


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Private stream for restart (or trial) `index` under root `seed`."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def run_indexed(fn: Callable[[int], T], count: int, workers: Optional[int] = None) -> List[T]:
    """Evaluate fn(0..count-1), possibly in parallel; results come back in index order."""
    n_workers = resolve_workers(workers)
    if n_workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, range(count)))


def best_index(values: Sequence[float]) -> int:
    """Index of the largest value; ties go to the lowest index."""
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def random_state(rng: np.random.Generator, shapes: Sequence[Tuple[int, int]]) -> RowState:
    out = []
    for n_rows, n_cols in shapes:
        # mix flat and peaked rows so restarts also start near deterministic maps
        alpha = rng.choice([0.2, 1.0])
        out.append(normalize_rows(rng.dirichlet(np.full(n_cols, alpha), size=n_rows) + 1e-300))
    return tuple(out)


def perturb_state(state: RowState, rng: np.random.Generator, step: float) -> RowState:
    """Move one row of one channel toward a random Dirichlet row or a vertex."""
    k = int(rng.integers(len(state)))
    rows = state[k].copy()
    r = int(rng.integers(rows.shape[0]))
    if rng.random() < 0.2:
        target = np.zeros(rows.shape[1])
        target[int(rng.integers(rows.shape[1]))] = 1.0
    else:
        target = rng.dirichlet(np.ones(rows.shape[1]))
    t = step * rng.random()
    rows[r] = (1.0 - t) * rows[r] + t * target
    rows[r] /= rows[r].sum()
    return state[:k] + (rows,) + state[k + 1 :]


@dataclass
class LocalSearchResult:
    value: float
    state: RowState
    evaluations: int
    accepted: int


def local_search(
    objective: Callable[[RowState], float],
    state: RowState,
    rng: np.random.Generator,
    iterations: int,
    *,
    initial_step: float = 0.5,
    min_step: float = 1e-4,
) -> LocalSearchResult:
    """Greedy coordinate-wise perturbation ascent on `objective` (maximized)."""
    best = objective(state)
    step = initial_step
    accepted = 0
    for _ in range(iterations):
        cand = perturb_state(state, rng, step)
        value = objective(cand)
        if value > best:
            state, best = cand, value
            accepted += 1
            step = min(1.0, step * 1.5)
        else:
            step = max(min_step, step * 0.9)
    return LocalSearchResult(best, state, iterations + 1, accepted)
