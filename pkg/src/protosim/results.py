from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

from ..errors import UsageError

EXACT = "exact"
MONTE_CARLO = "monte-carlo"

# Exact leakage may dip below zero by rounding only.
LEAKAGE_TOL = 1e-9


@dataclass(frozen=True)
class SimResult:
    """
    Operational metrics of one (or an average of several) realized schemes.

    `error[l-1]` is P[K != K_l], `leakage[l-1]` is log|K| - H(K|W_l) in nats,
    `tv[l-1]` is |P_{K K_l} - mu_{K K_l}| and `tv_joint` is |P_{K^m} - mu_{K^m}|,
    all total variations unnormalized in [0, 2].
    """

    mode: str
    n: int
    key_size: int
    error: Tuple[float, ...]
    leakage: Tuple[float, ...]
    tv: Tuple[float, ...]
    tv_joint: float
    std_errors: Tuple[float, ...] = ()
    trials: Optional[int] = None
    codebook_seeds: Tuple[int, ...] = ()
    source_seed: Optional[int] = None
    leakage_biased: bool = False
    fallback_v: float = 0.0
    fallback_w: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.mode not in (EXACT, MONTE_CARLO):
            raise UsageError(f"unknown simulation mode {self.mode!r}")
        if any(not 0.0 <= e <= 1.0 for e in self.error):
            raise UsageError(f"error probabilities outside [0, 1]: {self.error}")
        if self.mode == EXACT:
            if any(v < -LEAKAGE_TOL for v in self.leakage):
                raise UsageError(f"negative exact leakage {self.leakage}")
            if any(se != 0.0 for se in self.std_errors):
                raise UsageError("exact results carry no standard error")
        if not self.std_errors:
            object.__setattr__(self, "std_errors", (0.0,) * len(self.error))

    @property
    def m(self) -> int:
        return len(self.error)

    def relabeled(self, order: Sequence[int]) -> "SimResult":
        """Per-receiver entries moved from codebook position k to receiver label order[k]."""
        if sorted(order) != list(range(1, self.m + 1)):
            raise UsageError(f"order must be a permutation of 1..{self.m}, got {tuple(order)}")

        def by_label(values: Tuple[float, ...]) -> Tuple[float, ...]:
            if len(values) != self.m:
                return values
            out = [0.0] * self.m
            for k, label in enumerate(order):
                out[label - 1] = values[k]
            return tuple(out)

        return replace(
            self,
            error=by_label(self.error),
            leakage=by_label(self.leakage),
            tv=by_label(self.tv),
            std_errors=by_label(self.std_errors),
            fallback_w=by_label(self.fallback_w),
        )

    @property
    def epsilon_n(self) -> float:
        """Reliability metric: max_l P[K != K_l]."""
        return max(self.error)

    @property
    def nu_n(self) -> float:
        """Secrecy metric: max_l (log|K| - H(K|W_l))."""
        return max(self.leakage)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "key_size": self.key_size,
            "error": list(self.error),
            "std_errors": list(self.std_errors),
            "leakage": list(self.leakage),
            "leakage_biased": self.leakage_biased,
            "tv": list(self.tv),
            "tv_joint": self.tv_joint,
            "epsilon_n": self.epsilon_n,
            "nu_n": self.nu_n,
            "trials": self.trials,
            "codebook_seeds": list(self.codebook_seeds),
            "source_seed": self.source_seed,
            "fallback_v": self.fallback_v,
            "fallback_w": list(self.fallback_w),
        }
