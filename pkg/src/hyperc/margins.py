from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..errors import UsageError
from ..probkit import Channel, JointPmf, attach_channel, marginalize, mutual_information
from ..probkit.search import best_index, local_search, random_state, restart_rng, run_indexed

logger = logging.getLogger(__name__)

# A margin below -VIOLATION_TOL counts as a violation.
VIOLATION_TOL = 1e-6

# Slack on lhs <= rhs in the functional form.
FUNCTIONAL_TOL = 1e-12

HOLDS = "holds-up-to-search"
VIOLATED = "violated"


class HcSearchConfig(BaseModel):
    """Knobs for the channel searches over P_{U|X^m} and P_{U|X_1}."""

    restarts: int = Field(32, ge=0, description="Seeded random restarts.")
    iterations: int = Field(400, ge=0, description="Local perturbation steps per restart.")
    u_card: Optional[int] = Field(None, ge=2, description="|U| (default |X^m| + 1).")
    seed: int = Field(0, ge=0)
    workers: Optional[int] = Field(None, ge=1)


@dataclass(frozen=True)
class HcPoint:
    p: Tuple[float, ...]

    def __post_init__(self) -> None:
        p = tuple(float(v) for v in self.p)
        if not p:
            raise UsageError("hypercontractivity needs at least one exponent")
        if any(not math.isfinite(v) or v < 1.0 for v in p):
            raise UsageError(f"exponents must be finite and >= 1, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def weights(self) -> Tuple[float, ...]:
        """1/p_l."""
        return tuple(1.0 / v for v in self.p)


def _check_dims(pmf: JointPmf, p: HcPoint) -> None:
    if pmf.ndim != p.m:
        raise UsageError(f"{p.m} exponents for a law over {pmf.ndim} coordinates")


def hc_margin(pmf: JointPmf, q_u: Channel, p: HcPoint) -> float:
    """g = I(U;X^m) - sum_l (1/p_l) I(U;X_l), with U drawn through q_u from X^m."""
    _check_dims(pmf, p)
    coords = tuple(range(pmf.ndim))
    joint = attach_channel(pmf, q_u, coords)
    u = pmf.ndim
    g = mutual_information(joint, u, coords)
    for l, w in enumerate(p.weights):
        g -= w * mutual_information(joint, u, l)
    return g


def witness_channels(pmf: JointPmf, u_card: int) -> List[Tuple[str, Channel]]:
    """U = X^m (when |U| allows), U = X_l, and constant U."""
    sizes = pmf.alphabet_sizes
    n_in = math.prod(sizes)
    out = [("U=const", Channel.constant((n_in,), u_card))]
    if u_card >= n_in:
        out.append(("U=X^m", Channel.identity(n_in, output_size=u_card)))
    for l, size in enumerate(sizes):
        if u_card >= size:
            out.append(
                (
                    f"U=X{l + 1}",
                    Channel.from_function((n_in,), u_card, lambda x, l=l: np.unravel_index(x, sizes)[l]),
                )
            )
    return out


@dataclass(frozen=True)
class HcVerdict:
    status: str
    margin: float
    witness: Optional[Channel]
    witness_label: str
    evaluations: int
    restarts: int

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "margin": self.margin,
            "witness_label": self.witness_label,
            "witness": None if self.witness is None else self.witness.rows.tolist(),
            "evaluations": self.evaluations,
            "restarts": self.restarts,
        }


def check_hypercontractive(pmf: JointPmf, p: HcPoint, search: Optional[HcSearchConfig] = None) -> HcVerdict:
    """
    Minimize hc_margin over P_{U|X^m}: analytic witnesses first, then seeded
    restarts of local descent. A clean search is not a certificate.
    """
    search = search or HcSearchConfig()
    _check_dims(pmf, p)
    n_in = math.prod(pmf.alphabet_sizes)
    u_card = search.u_card or n_in + 1

    candidates: List[Tuple[float, Optional[Channel], str, int]] = []
    for label, ch in witness_channels(pmf, u_card):
        candidates.append((hc_margin(pmf, ch, p), ch, label, 1))

    def restart(index: int):
        rng = restart_rng(search.seed, index)
        start = random_state(rng, [(n_in, u_card)])

        def objective(state) -> float:
            return -hc_margin(pmf, Channel((n_in,), u_card, state[0]), p)

        res = local_search(objective, start, rng, search.iterations)
        return -res.value, Channel((n_in,), u_card, res.state[0]), f"restart {index}", res.evaluations

    candidates.extend(run_indexed(restart, search.restarts, search.workers))
    win = best_index([-c[0] for c in candidates])
    margin, witness, label, _ = candidates[win]
    evaluations = sum(c[3] for c in candidates)
    status = VIOLATED if margin < -VIOLATION_TOL else HOLDS
    logger.info("hypercontractivity at p=%s: %s (min margin %.3g from %s)", p.p, status, margin, label)
    return HcVerdict(
        status=status,
        margin=margin,
        witness=witness if status == VIOLATED else None,
        witness_label=label if status == VIOLATED else "",
        evaluations=evaluations,
        restarts=search.restarts,
    )


@dataclass(frozen=True)
class FunctionalCheck:
    lhs: float
    rhs: float
    satisfied: bool


def _as_functions(pmf: JointPmf, fs: Sequence[Sequence[float]]) -> List[np.ndarray]:
    if len(fs) != pmf.ndim:
        raise UsageError(f"need {pmf.ndim} functions, got {len(fs)}")
    out = []
    for l, (f, size) in enumerate(zip(fs, pmf.alphabet_sizes), start=1):
        arr = np.asarray(f, dtype=float)
        if arr.shape[-1] != size:
            raise UsageError(f"f_{l} has {arr.shape[-1]} values, X_{l} has {size} symbols")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise UsageError(f"f_{l} must be finite and nonnegative")
        out.append(arr)
    return out


def _functional_sides(pmf: JointPmf, p: HcPoint, fs: List[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """lhs and rhs for a batch of function tuples (leading axis = batch)."""
    m = pmf.ndim
    operands: list = [pmf.probs, list(range(m))]
    for l, f in enumerate(fs):
        operands += [f, [m, l]]
    lhs = np.einsum(*operands, [m])
    rhs = np.ones_like(lhs)
    for l, (f, exponent) in enumerate(zip(fs, p.p)):
        marginal = marginalize(pmf, l).probs
        rhs = rhs * ((f**exponent) @ marginal) ** (1.0 / exponent)
    return lhs, rhs


def functional_check(pmf: JointPmf, p: HcPoint, fs: Sequence[Sequence[float]]) -> FunctionalCheck:
    """E[prod_l f_l(X_l)] against prod_l ||f_l||_{p_l}."""
    _check_dims(pmf, p)
    funcs = [f[None, :] for f in _as_functions(pmf, fs)]
    lhs, rhs = _functional_sides(pmf, p, funcs)
    lhs, rhs = float(lhs[0]), float(rhs[0])
    return FunctionalCheck(lhs, rhs, lhs <= rhs + FUNCTIONAL_TOL)


@dataclass(frozen=True)
class FalsifyResult:
    trials: int
    worst_gap: float
    witness: Tuple[Tuple[float, ...], ...]
    violations: int

    @property
    def violated(self) -> bool:
        return self.violations > 0


def functional_falsify(
    pmf: JointPmf,
    p: HcPoint,
    trials: int = 10_000,
    seed: int = 0,
    zero_fraction: float = 0.3,
) -> FalsifyResult:
    """
    Random nonnegative function tuples: values uniform on [0, 1) with each
    entry zeroed with probability `zero_fraction`. Reports the largest lhs - rhs.
    """
    _check_dims(pmf, p)
    if trials < 1:
        raise UsageError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    funcs = []
    for size in pmf.alphabet_sizes:
        values = rng.random((trials, size))
        values[rng.random((trials, size)) < zero_fraction] = 0.0
        funcs.append(values)
    lhs, rhs = _functional_sides(pmf, p, funcs)
    gap = lhs - rhs
    k = int(np.argmax(gap))
    return FalsifyResult(
        trials=trials,
        worst_gap=float(gap[k]),
        witness=tuple(tuple(float(v) for v in f[k]) for f in funcs),
        violations=int(np.sum(gap > FUNCTIONAL_TOL)),
    )
