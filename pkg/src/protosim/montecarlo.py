from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.stats import binomtest

from ..errors import UsageError
from ..oneshot import OneShotParams
from ..probkit.search import restart_rng, run_indexed
from .budget import SimulationBudget
from .codebook import Codebook, build_codebook
from .coding import decode, encode
from .model import LetterModel
from .results import MONTE_CARLO, SimResult

logger = logging.getLogger(__name__)

# One-sigma coverage for the Wilson half-width.
_ONE_SIGMA = 0.6826894921370859


@dataclass(frozen=True)
class TrialOutcome:
    key: int
    decoded: Tuple[int, ...]
    messages: Tuple[Tuple[int, ...], ...]
    fallback_v: bool
    fallback_w: Tuple[bool, ...]


def sample_block(model: LetterModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. letters of (Z, X_1, ..., X_m); row 0 is the z-block, row l the x_l-block."""
    pmf = model.source.pmf
    flat = rng.choice(pmf.flat.size, size=n, p=pmf.flat)
    return np.array(np.unravel_index(flat, pmf.alphabet_sizes))


def run_trial(codebook: Codebook, rng: np.random.Generator) -> TrialOutcome:
    block = sample_block(codebook.model, codebook.n, rng)
    out = encode(codebook, block[0], rng)
    decoded = tuple(decode(codebook, l, block[l], out.message(l)) for l in codebook.model.source.receivers)
    return TrialOutcome(out.key, decoded, out.messages, out.v_fallback, out.w_fallback)


def wilson_std_error(successes: int, trials: int) -> float:
    """Half-width of the one-sigma Wilson interval."""
    ci = binomtest(successes, trials).proportion_ci(confidence_level=_ONE_SIGMA, method="wilson")
    return 0.5 * (ci.high - ci.low)


def _plugin_entropy(counts: Counter, total: int) -> float:
    freqs = np.fromiter(counts.values(), dtype=float) / total
    return float(-(freqs * np.log(freqs)).sum())


def _plugin_leakage(outcomes, l: int, key_size: int) -> float:
    joint = Counter((o.key, o.messages[l - 1]) for o in outcomes)
    messages = Counter(o.messages[l - 1] for o in outcomes)
    total = len(outcomes)
    return math.log(key_size) - (_plugin_entropy(joint, total) - _plugin_entropy(messages, total))


def _plugin_tv(counts: Counter, total: int, key_size: int) -> float:
    """Empirical |P - mu| where mu is uniform on the all-equal key tuples."""
    tv = 0.0
    for keys, c in counts.items():
        target = 1.0 / key_size if len(set(keys)) == 1 else 0.0
        tv += abs(c / total - target)
    # all-equal tuples never observed
    seen = {keys[0] for keys in counts if len(set(keys)) == 1}
    tv += (key_size - len(seen)) / key_size
    return tv


def run_monte_carlo(
    model: LetterModel,
    params: OneShotParams,
    n: int,
    trials: int,
    codebook_seed: int = 0,
    source_seed: int = 0,
    budget: Optional[SimulationBudget] = None,
    workers: Optional[int] = None,
) -> SimResult:
    """
    Empirical metrics over `trials` i.i.d. source blocks for one codebook.

    Trial t draws its block and encoder randomness from the stream
    (source_seed, t). Leakage and TV are plug-in estimates and biased.
    """
    if trials < 1:
        raise UsageError(f"trials must be >= 1, got {trials}")
    codebook = build_codebook(model, params, n, codebook_seed, budget)
    outcomes = run_indexed(lambda t: run_trial(codebook, restart_rng(source_seed, t)), trials, workers)
    logger.info("monte carlo: %d trials at n=%d", trials, n)

    m, I_0 = model.m, params.key_size
    errors, std_errors, leakage, tv = [], [], [], []
    for l in model.source.receivers:
        wrong = sum(o.decoded[l - 1] != o.key for o in outcomes)
        errors.append(wrong / trials)
        std_errors.append(wilson_std_error(wrong, trials))
        leakage.append(_plugin_leakage(outcomes, l, I_0))
        pairs = Counter((o.key, o.decoded[l - 1]) for o in outcomes)
        tv.append(_plugin_tv(pairs, trials, I_0))
    fallback_v = sum(o.fallback_v for o in outcomes) / trials
    fallback_w = tuple(sum(o.fallback_w[k] for o in outcomes) / trials for k in range(m))
    if fallback_v > 0 or any(fallback_w):
        logger.warning("encoder fallback rate: v %.3g, w %s", fallback_v, [round(f, 6) for f in fallback_w])
    return SimResult(
        mode=MONTE_CARLO,
        n=n,
        key_size=I_0,
        error=tuple(errors),
        leakage=tuple(leakage),
        tv=tuple(tv),
        tv_joint=_plugin_tv(Counter(o.decoded for o in outcomes), trials, I_0),
        std_errors=tuple(std_errors),
        trials=trials,
        codebook_seeds=(codebook.seed,),
        source_seed=source_seed,
        leakage_biased=True,
        fallback_v=fallback_v,
        fallback_w=fallback_w,
    )
