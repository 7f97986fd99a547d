from __future__ import annotations

import math
from typing import Sequence

from ..errors import UsageError
from .margins import HcPoint


def _check_sizes(K_size: int, W_sizes: Sequence[int], p: HcPoint) -> None:
    if int(K_size) != K_size or K_size < 2:
        raise UsageError(f"key alphabet needs at least 2 symbols, got {K_size}")
    if len(W_sizes) != p.m:
        raise UsageError(f"{len(W_sizes)} message sizes for {p.m} exponents")
    if any(int(w) != w or w < 1 for w in W_sizes):
        raise UsageError(f"message alphabets must be integers >= 1, got {list(W_sizes)}")


def theorem4_bound(K_size: int, W_sizes: Sequence[int], p: HcPoint) -> float:
    """
    Lower bound on (1/2)|P_{K^m} - mu_{K^m}| for a (p_1, ..., p_m)-hypercontractive source:

        1 - 1/|K| - [ |K| prod_l (|W_l|/|K|)^(1/p_l) ]^(1 / sum_l 1/p_l)

    Returned unclamped; a negative value means the bound is vacuous.
    """
    _check_sizes(K_size, W_sizes, p)
    log_k = math.log(K_size)
    log_inner = log_k + sum(w * (math.log(size) - log_k) for w, size in zip(p.weights, W_sizes))
    return 1.0 - 1.0 / K_size - math.exp(log_inner / sum(p.weights))


def zero_rate_margin(K_size: int, W_sizes: Sequence[int], p: HcPoint) -> float:
    """log|K| - sum_l (1/p_l)(log|K| - log|W_l|) in nats; the key distribution is driven away from uniform as this tends to -inf."""
    _check_sizes(K_size, W_sizes, p)
    log_k = math.log(K_size)
    return log_k - sum(w * (log_k - math.log(size)) for w, size in zip(p.weights, W_sizes))


def rate_margin(R: float, R_l: Sequence[float], p: HcPoint) -> float:
    """Per-symbol form R - sum_l (1/p_l)(R - R_l) of the zero-rate margin (nats)."""
    if len(R_l) != p.m:
        raise UsageError(f"{len(R_l)} message rates for {p.m} exponents")
    return R - sum(w * (R - r) for w, r in zip(p.weights, R_l))
