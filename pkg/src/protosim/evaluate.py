from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from ..oneshot import OneShotParams, theorem3_bounds
from ..probkit.search import run_indexed
from ..regions.source import AuxScheme, SourceSpec
from .budget import SimulationBudget, check_budget
from .codebook import Codebook, build_codebook
from .coding import index_split, decode_table, encoder_posteriors
from .model import LetterModel
from .results import EXACT, SimResult

logger = logging.getLogger(__name__)


def block_conditional(q_x_given_z: np.ndarray, z_block: Sequence[int]) -> np.ndarray:
    """Q_{X^m|Z}^n(. | z_block) with one axis of size |X_l|^n per receiver, first letter most significant."""
    m = q_x_given_z.ndim - 1
    out = np.ones((1,) * m)
    interleave = [k for pair in zip(range(m), range(m, 2 * m)) for k in pair]
    for z in z_block:
        letter = q_x_given_z[int(z)]
        grown = np.multiply.outer(out, letter).transpose(interleave)
        out = grown.reshape(tuple(a * b for a, b in zip(out.shape, letter.shape)))
    return out


def _entropy(table: np.ndarray) -> float:
    return float(entr(table).sum())


def key_distribution_target(key_size: int, m: int) -> np.ndarray:
    """mu_{K^m}: K_1 = ... = K_m uniform on the key alphabet."""
    mu = np.zeros((key_size,) * m)
    for k in range(key_size):
        mu[(k,) * m] = 1.0 / key_size
    return mu


def enumeration_states(model: LetterModel, params: OneShotParams, n: int) -> int:
    blocks = model.source.z_size**n
    x_blocks = [s**n for s in model.source.x_sizes]
    per_receiver = params.I * max(params.J_list) * max(x_blocks)
    return blocks * max(per_receiver, params.I * math.prod(x_blocks))


def evaluate_codebook(codebook: Codebook, budget: Optional[SimulationBudget] = None) -> SimResult:
    """
    Exact metrics of a fixed codebook by enumerating every source block.

    The decoder is deterministic, so for each z-block the receiver blocks are
    summed against Q_{X^m|Z}^n instead of being enumerated jointly with z.
    """
    budget = budget or SimulationBudget()
    model, params, n = codebook.model, codebook.params, codebook.n
    m, I, I_0 = model.m, params.I, params.key_size
    check_budget("exact enumeration", enumeration_states(model, params, n), budget.max_enumeration_states)

    splits = [index_split(codebook, l) for l in model.source.receivers]
    keys = np.arange(I_0)
    # onehot[a, j, x, k] = 1 when receiver l decodes key k
    onehots = [(decode_table(codebook, l)[..., None] == keys).astype(float) for l in model.source.receivers]

    error = np.zeros(m)
    p_kw = [np.zeros((I_0, known, J)) for (_, known, _), J in zip(splits, params.J_list)]
    p_kk = [np.zeros((I_0, I_0)) for _ in range(m)]
    p_keys = np.zeros((I_0,) * m)
    fallback_v = 0.0
    fallback_w = np.zeros(m)

    for z_block in itertools.product(range(model.source.z_size), repeat=n):
        p_z = float(np.prod(model.q_z[list(z_block)]))
        if p_z == 0.0:
            continue
        post = encoder_posteriors(codebook, z_block)
        q_x = block_conditional(model.q_x_given_z, z_block)
        if post.v_fallback:
            fallback_v += p_z
        decoded = []
        for l, (_, known, unknown) in enumerate(splits, start=1):
            p_v = post.v.reshape(I_0, known, unknown)
            p_w = post.w[l - 1].reshape(I_0, known, unknown, -1)
            fallback_w[l - 1] += p_z * float(post.v @ post.w_fallback[l - 1])
            q_xl = q_x.sum(axis=tuple(k for k in range(m) if k != l - 1))
            # P(K_l = k | v, x-block)
            given_v = np.einsum("cabj,ajxk->cabxk", p_w, onehots[l - 1])
            correct = np.einsum("cab,cabxc,x->", p_v, given_v, q_xl)
            error[l - 1] += p_z * (1.0 - correct)
            p_kk[l - 1] += p_z * np.einsum("cab,cabxk,x->ck", p_v, given_v, q_xl)
            p_kw[l - 1] += p_z * np.einsum("cab,cabj->caj", p_v, p_w)
            decoded.append(given_v.reshape(I, q_xl.shape[0], I_0))

        operands: List = [q_x, list(range(m)), post.v, [m]]
        for l, table in enumerate(decoded):
            operands += [table, [m, l, m + 1 + l]]
        p_keys += p_z * np.einsum(*operands, list(range(m + 1, 2 * m + 1)), optimize=True)

    if fallback_v > 0 or fallback_w.any():
        logger.warning("encoder fallback mass: v %.3g, w %s", fallback_v, np.round(fallback_w, 6).tolist())
    leakage = []
    for joint in p_kw:
        h_cond = _entropy(joint) - _entropy(joint.sum(axis=0))
        leakage.append(math.log(I_0) - h_cond)
    mu_pair = np.eye(I_0) / I_0
    return SimResult(
        mode=EXACT,
        n=n,
        key_size=I_0,
        error=tuple(float(np.clip(e, 0.0, 1.0)) for e in error),
        leakage=tuple(leakage),
        tv=tuple(float(np.abs(p - mu_pair).sum()) for p in p_kk),
        tv_joint=float(np.abs(p_keys - key_distribution_target(I_0, m)).sum()),
        codebook_seeds=(codebook.seed,),
        fallback_v=fallback_v,
        fallback_w=tuple(float(f) for f in fallback_w),
    )


def exact_evaluate(
    model: LetterModel,
    params: OneShotParams,
    n: int,
    codebook_seed: int = 0,
    budget: Optional[SimulationBudget] = None,
) -> SimResult:
    budget = budget or SimulationBudget()
    # check before drawing the codebook so an oversized request fails fast
    check_budget("exact enumeration", enumeration_states(model, params, n), budget.max_enumeration_states)
    return evaluate_codebook(build_codebook(model, params, n, codebook_seed, budget), budget)


@dataclass(frozen=True)
class AveragedResult:
    mean: SimResult
    per_seed: Tuple[SimResult, ...]


def average_over_codebooks(
    model: LetterModel,
    params: OneShotParams,
    n: int,
    seeds: Sequence[int],
    budget: Optional[SimulationBudget] = None,
    workers: Optional[int] = None,
) -> AveragedResult:
    """Exact metrics averaged over independently drawn codebooks, one per seed."""
    seeds = tuple(int(s) for s in seeds)
    results = run_indexed(lambda k: exact_evaluate(model, params, n, seeds[k], budget), len(seeds), workers)

    def mean(values) -> Tuple[float, ...]:
        return tuple(float(v) for v in np.mean(np.array(values), axis=0))

    averaged = SimResult(
        mode=EXACT,
        n=n,
        key_size=params.key_size,
        error=tuple(float(np.clip(e, 0.0, 1.0)) for e in mean([r.error for r in results])),
        leakage=mean([r.leakage for r in results]),
        tv=mean([r.tv for r in results]),
        tv_joint=float(np.mean([r.tv_joint for r in results])),
        codebook_seeds=seeds,
        fallback_v=float(np.mean([r.fallback_v for r in results])),
        fallback_w=mean([r.fallback_w for r in results]),
    )
    return AveragedResult(averaged, tuple(results))


@dataclass(frozen=True)
class SoundnessEntry:
    receiver: int
    error: float
    bound: float
    variant_bound: float

    @property
    def applicable(self) -> bool:
        return self.bound < 1.0

    @property
    def sound(self) -> bool:
        return not self.applicable or self.error <= self.bound

    @property
    def variant_sound(self) -> bool:
        return self.variant_bound >= 1.0 or self.error <= self.variant_bound


@dataclass(frozen=True)
class SoundnessReport:
    entries: Tuple[SoundnessEntry, ...]
    averaged: AveragedResult

    @property
    def sound(self) -> bool:
        return all(e.sound for e in self.entries)

    @property
    def exceedances(self) -> Tuple[SoundnessEntry, ...]:
        return tuple(e for e in self.entries if not e.sound)

    def as_dict(self) -> dict:
        return {
            "sound": self.sound,
            "entries": [
                {
                    "receiver": e.receiver,
                    "error": e.error,
                    "bound": e.bound,
                    "variant_bound": e.variant_bound,
                    "applicable": e.applicable,
                    "sound": e.sound,
                    "variant_sound": e.variant_sound,
                }
                for e in self.entries
            ],
            "averaged": self.averaged.mean.as_dict(),
        }


def soundness_report(
    source: SourceSpec,
    aux: AuxScheme,
    params: OneShotParams,
    n: int,
    seeds: Sequence[int],
    budget: Optional[SimulationBudget] = None,
    workers: Optional[int] = None,
) -> SoundnessReport:
    """
    Compare the codebook-averaged exact error with the one-shot error bound,
    and with the variant counting I_0 * prod_{j>l} I_j competing indices.
    """
    bounds = theorem3_bounds(source, aux, params, blocklength=n)
    model = LetterModel.from_scheme(source, aux, params.order)
    averaged = average_over_codebooks(model, params, n, seeds, budget, workers)
    entries = tuple(
        SoundnessEntry(receiver=params.order[k], error=err, bound=b, variant_bound=vb)
        for k, (err, b, vb) in enumerate(
            zip(averaged.mean.error, bounds.error_bounds, bounds.variant_error_bounds)
        )
    )
    for e in entries:
        if not e.sound:
            logger.warning(
                "receiver %d: averaged error %.6g exceeds bound %.6g (variant bound %.6g, %s)",
                e.receiver,
                e.error,
                e.bound,
                e.variant_bound,
                "holds" if e.variant_sound else "also exceeded",
            )
    return SoundnessReport(entries, averaged)
