from __future__ import annotations

import logging
from typing import List, Optional

import numpy as np

from ..errors import UsageError
from ..probkit import Channel, JointPmf, attach_channel, mutual_information
from ..probkit.search import local_search, random_state, restart_rng, run_indexed
from .margins import HcSearchConfig

logger = logging.getLogger(__name__)

# Channels with I(U;X_1) below this are excluded from the supremum.
DEGENERATE_TOL = 1e-9

# Strengths of the weak binary seeds around the uniform channel.
_WEAK_SEED_STRENGTHS = (0.2, 0.05, 0.01)


def contraction_ratio(pmf: JointPmf, q_u: Channel) -> Optional[float]:
    """I(U;X_2) / I(U;X_1) for U drawn from X_1, or None when I(U;X_1) is negligible."""
    joint = attach_channel(pmf, q_u, 0)
    i_u1 = mutual_information(joint, 2, 0)
    if i_u1 < DEGENERATE_TOL:
        return None
    return mutual_information(joint, 2, 1) / i_u1


def _correlation_direction(pmf: JointPmf) -> np.ndarray:
    """Second left singular vector of P_{X1X2} / sqrt(P_X1 P_X2), as a function of x_1."""
    p1 = pmf.probs.sum(axis=1)
    p2 = pmf.probs.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.where(np.outer(p1, p2) > 0, pmf.probs / np.sqrt(np.outer(p1, p2)), 0.0)
    left, _, _ = np.linalg.svd(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(p1 > 0, left[:, 1] / np.sqrt(p1), 0.0)
    scale = np.max(np.abs(h))
    return h / scale if scale > 0 else h


def _seed_channels(pmf: JointPmf, u_card: int) -> List[Channel]:
    size = pmf.alphabet_sizes[0]
    seeds = []
    if u_card >= size:
        seeds.append(Channel.identity(size, output_size=u_card))
    h = _correlation_direction(pmf)
    for eps in _WEAK_SEED_STRENGTHS:
        rows = np.zeros((size, u_card))
        rows[:, 0] = 0.5 + eps * h
        rows[:, 1] = 0.5 - eps * h
        seeds.append(Channel((size,), u_card, rows))
    return seeds


def sdpi_coefficient(pmf: JointPmf, search: Optional[HcSearchConfig] = None) -> float:
    """
    Best found value of sup I(U;X_2) / I(U;X_1) over P_{U|X_1}.

    Seeds are U = X_1 and weak binary channels along the maximal-correlation
    direction; restarts then climb from random channels. Clamped to [0, 1].
    """
    search = search or HcSearchConfig()
    if pmf.ndim != 2:
        raise UsageError(f"the contraction coefficient needs a pair (X_1, X_2), got {pmf.ndim} coordinates")
    if mutual_information(pmf, 0, 1) < 1e-12:
        return 0.0
    size = pmf.alphabet_sizes[0]
    u_card = max(2, search.u_card or size + 1)

    seed_values = [contraction_ratio(pmf, ch) for ch in _seed_channels(pmf, u_card)]
    best_seed = max((v for v in seed_values if v is not None), default=0.0)

    def restart(index: int) -> float:
        rng = restart_rng(search.seed, index)
        best = [0.0]

        def objective(state) -> float:
            ratio = contraction_ratio(pmf, Channel((size,), u_card, state[0]))
            if ratio is None:
                return -1.0
            best[0] = max(best[0], ratio)
            return ratio

        local_search(objective, random_state(rng, [(size, u_card)]), rng, search.iterations)
        return best[0]

    found = run_indexed(restart, search.restarts, search.workers)
    value = min(1.0, max([best_seed] + found))
    logger.info("contraction coefficient: %.6g (seeds %.6g, %d restarts)", value, best_seed, search.restarts)
    return max(0.0, value)
