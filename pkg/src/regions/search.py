from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import UsageError
from ..probkit import Channel, entropy
from ..probkit.search import (
    RowState,
    SearchConfig,
    best_index,
    local_search,
    random_state,
    restart_rng,
    run_indexed,
)
from .evaluators import theorem1_point
from .source import AuxScheme, RatePoint, SourceSpec

logger = logging.getLogger(__name__)

# Slack allowed on R_l <= budget_l before a point counts as infeasible.
FEASIBILITY_TOL = 1e-9

# Above this many receivers only the all-constant and all-Z S-patterns are seeded.
_MAX_SEEDED_M = 6


def default_cardinalities(source: SourceSpec, search: SearchConfig) -> Tuple[int, int]:
    u_card = search.u_card or source.z_size + source.m + 1
    s_card = search.s_card or u_card * source.z_size
    return u_card, s_card


def scheme_from_state(source: SourceSpec, state: RowState) -> AuxScheme:
    u_rows, *s_rows = state
    u_card = u_rows.shape[1]
    return AuxScheme(
        Channel((source.z_size,), u_card, u_rows),
        tuple(Channel((u_card, source.z_size), rows.shape[1], rows) for rows in s_rows),
    )


def _state_of(aux: AuxScheme) -> RowState:
    return (np.array(aux.q_u_given_z.rows),) + tuple(np.array(ch.rows) for ch in aux.q_s_given_uz)


def analytic_schemes(source: SourceSpec, u_card: int, s_card: int) -> List[Tuple[str, AuxScheme]]:
    """
    Seed family: U in {Z, constant, X_j (omniscient only)} crossed with
    S_l in {constant, Z} per receiver, padded to the search cardinalities.
    """
    nz, m = source.z_size, source.m
    u_options: List[Tuple[str, Channel]] = [("U=const", Channel.constant((nz,), u_card))]
    if u_card >= nz:
        u_options.insert(0, ("U=Z", Channel.identity(nz, output_size=u_card)))
    if source.omniscient:
        for j, size in enumerate(source.x_sizes, start=1):
            if u_card >= size:
                u_options.append(
                    (
                        f"U=X{j}",
                        Channel.from_function(
                            (nz,), u_card, lambda z, j=j: np.unravel_index(z, source.x_sizes)[j - 1]
                        ),
                    )
                )

    s_const = Channel.constant((u_card, nz), s_card)
    s_options = [("const", s_const)]
    if s_card >= nz:
        s_options.append(("Z", Channel.from_function((u_card, nz), s_card, lambda u, z: z)))
    if m <= _MAX_SEEDED_M:
        patterns = list(itertools.product(range(len(s_options)), repeat=m))
    else:
        patterns = [(k,) * m for k in range(len(s_options))]

    out = []
    for u_name, u_ch in u_options:
        for pattern in patterns:
            label = u_name + "," + ",".join(f"S{l}={s_options[k][0]}" for l, k in enumerate(pattern, start=1))
            out.append((label, AuxScheme(u_ch, tuple(s_options[k][1] for k in pattern))))
    return out


class CandidatePool:
    """
    Nondominated (R, R_1..R_m) points seen by a key-rate search, with the scheme
    state that produced each. A point is dropped when another one has R at least
    as large and every R_l at most as large. Insertion order breaks ties.
    """

    def __init__(self, m: int) -> None:
        self._rates = np.empty((0, m))
        self._keys = np.empty(0)
        self._items: List[Tuple[RatePoint, Optional[RowState], str]] = []

    def __len__(self) -> int:
        return len(self._items)

    def add(self, point: RatePoint, state: Optional[RowState], label: str) -> bool:
        rates = np.asarray(point.R_l, dtype=float)
        if np.any(np.all(self._rates <= rates, axis=1) & (self._keys >= point.R)):
            return False
        keep = ~(np.all(rates <= self._rates, axis=1) & (point.R >= self._keys))
        self._rates = np.vstack([self._rates[keep], rates[None, :]])
        self._keys = np.append(self._keys[keep], point.R)
        self._items = [item for item, k in zip(self._items, keep) if k] + [(point, state, label)]
        return True

    def merge(self, other: "CandidatePool") -> None:
        for point, state, label in other._items:
            self.add(point, state, label)

    def best_within(self, budgets: Sequence[float]) -> Tuple[RatePoint, Optional[RowState], str]:
        """Largest R with R_l <= budgets[l-1] + FEASIBILITY_TOL."""
        limit = np.asarray(budgets, dtype=float) + FEASIBILITY_TOL
        fits = np.flatnonzero(np.all(self._rates <= limit, axis=1))
        if fits.size == 0:
            raise UsageError(f"no candidate fits the budgets {tuple(budgets)}")
        return self._items[int(fits[best_index(list(self._keys[fits]))])]


def restart_targets(
    index: int, m: int, rng: np.random.Generator, top: float, ceiling: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weights w and anchors c of the objective R - sum_l w_l max(0, R_l - c_l) for
    restart `index`. Restart 0 ignores the rates, odd restarts weigh them from 0
    with log-uniform weights in [1/top, top], even ones penalize them at weight
    `top` above anchors drawn uniformly from [0, ceiling].
    """
    if index == 0:
        return np.zeros(m), np.zeros(m)
    if index % 2:
        level = top ** rng.uniform(-1.0, 1.0)
        return level * rng.uniform(0.5, 1.5, size=m), np.zeros(m)
    return np.full(m, top), rng.uniform(0.0, ceiling, size=m)


def key_rate_pool(source: SourceSpec, search: Optional[SearchConfig] = None) -> CandidatePool:
    """
    Every nondominated `theorem1_point` met while searching, independent of any budget.

    Holds the degenerate scheme, the analytic seeds and each state visited by
    `search.restarts` local ascents, each on its own `restart_targets` objective.
    Restart r starts from the r-th analytic seed when there is one, and draws
    its targets from the stream (seed, r).
    """
    search = search or SearchConfig()
    u_card, s_card = default_cardinalities(source, search)
    shapes = [(source.z_size, u_card)] + [(u_card * source.z_size, s_card)] * source.m

    ceiling = entropy(source.pmf, 0)
    pool = CandidatePool(source.m)
    fallback = AuxScheme.degenerate(source)
    pool.add(theorem1_point(source, fallback), None, "degenerate")

    seeds = analytic_schemes(source, u_card, s_card) if search.analytic_seeds else []
    seed_states = [_state_of(aux) for _, aux in seeds]
    for label, aux in seeds:
        pool.add(theorem1_point(source, aux), _state_of(aux), label)

    def restart(index: int) -> CandidatePool:
        rng = restart_rng(search.seed, index)
        weights, anchors = restart_targets(index, source.m, rng, search.rate_weight, ceiling)
        start = seed_states[index] if index < len(seed_states) else random_state(rng, shapes)
        visited = CandidatePool(source.m)
        label = f"restart {index}"

        def objective(state: RowState) -> float:
            point = theorem1_point(source, scheme_from_state(source, state))
            visited.add(point, state, label)
            excess = np.maximum(0.0, np.asarray(point.R_l) - anchors)
            return point.R - float(np.dot(weights, excess))

        local_search(objective, start, rng, search.iterations)
        return visited

    for visited in run_indexed(restart, search.restarts, search.workers):
        pool.merge(visited)
    logger.info("key-rate search: %d nondominated candidates", len(pool))
    return pool


def maximize_key_rate(
    source: SourceSpec,
    budgets: Sequence[float],
    search: Optional[SearchConfig] = None,
) -> Tuple[RatePoint, AuxScheme]:
    """
    Best `theorem1_point` found with R_l <= budgets[l-1] for every receiver.

    The candidates come from `key_rate_pool`, which never looks at the budgets,
    so the returned R is nondecreasing in every budget for a fixed config.
    """
    search = search or SearchConfig()
    budgets = tuple(float(b) for b in budgets)
    if len(budgets) != source.m:
        raise UsageError(f"need {source.m} budgets, got {len(budgets)}")
    if any(b < 0 for b in budgets):
        raise UsageError(f"budgets must be nonnegative, got {budgets}")

    point, state, label = key_rate_pool(source, search).best_within(budgets)
    aux = AuxScheme.degenerate(source) if state is None else scheme_from_state(source, state)
    logger.info("best R=%.6g nats under budgets %s from %s", point.R, budgets, label)
    return point, aux
