from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import UsageError
from ..oneshot import OneShotParams
from .budget import SimulationBudget, check_budget
from .model import LetterModel

logger = logging.getLogger(__name__)


def _sample_rows(rng: np.random.Generator, cdf: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Inverse-CDF draws: one symbol per cell of `shape` from the row `cdf` selects."""
    # entries that reach the row total become 1, so a draw never passes the last symbol with mass
    cdf = np.where(cdf >= cdf[..., -1:], 1.0, cdf)
    draws = rng.random(shape)
    return np.minimum((draws[..., None] >= cdf).sum(axis=-1), cdf.shape[-1] - 1)


@dataclass(frozen=True)
class Codebook:
    """
    Realized superposition codebook at blocklength n.

    Index tuples (i_0, ..., i_m) are flattened in row-major order, so
    `u_words[i]` is u(i) and `s_words[l-1][i, j]` is s_l(i, j).
    """

    model: LetterModel
    params: OneShotParams
    n: int
    seed: int
    u_words: np.ndarray
    s_words: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        I = self.params.I
        if self.u_words.shape != (I, self.n):
            raise UsageError(f"u table has shape {self.u_words.shape}, expected {(I, self.n)}")
        for l, (words, J) in enumerate(zip(self.s_words, self.params.J_list), start=1):
            if words.shape != (I, J, self.n):
                raise UsageError(f"s_{l} table has shape {words.shape}, expected {(I, J, self.n)}")
        self.u_words.setflags(write=False)
        for words in self.s_words:
            words.setflags(write=False)

    @property
    def index_shape(self) -> Tuple[int, ...]:
        return self.params.I_list

    def flat_index(self, index: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(index), self.index_shape))

    def u_codeword(self, index: Sequence[int]) -> np.ndarray:
        return self.u_words[self.flat_index(index)]

    def s_codeword(self, l: int, index: Sequence[int], j: int) -> np.ndarray:
        return self.s_words[l - 1][self.flat_index(index), j]


def build_codebook(
    model: LetterModel,
    params: OneShotParams,
    n: int,
    seed: int = 0,
    budget: Optional[SimulationBudget] = None,
) -> Codebook:
    """
    Draw u(i) i.i.d. from Q_U and each s_l(i, j) letterwise from Q_{S_l|U=u(i)_t}.

    Deterministic in `seed`.
    """
    budget = budget or SimulationBudget()
    if n < 1:
        raise UsageError(f"blocklength must be >= 1, got {n}")
    if params.m != model.m:
        raise UsageError(f"params describe {params.m} receivers, model has {model.m}")
    I = params.I
    check_budget("codebook", I * (1 + sum(params.J_list)) * n, budget.max_table_cells)

    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    u_words = _sample_rows(rng, np.cumsum(model.q_u), (I, n))
    s_words = []
    for q_s, J in zip(model.q_s_given_u, params.J_list):
        cdf = np.cumsum(q_s, axis=1)[u_words][:, None, :, :]
        s_words.append(_sample_rows(rng, cdf, (I, J, n)))
    logger.info("built codebook: I=%d, J=%s, n=%d, seed=%d", I, params.J_list, n, seed)
    return Codebook(model, params, n, int(seed), u_words, tuple(s_words))
