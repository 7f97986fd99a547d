from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Sequence, Tuple

from ..errors import RangeOverflowError, UsageError

# exp() of anything above this is not a finite float.
_MAX_EXPONENT = math.log(sys.float_info.max)

# exp(n * I) values this close to an integer are taken as that integer.
_ROUNDING_TOL = 1e-9


def _check_sizes(name: str, values: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or int(v) != v or int(v) < 1:
            raise UsageError(f"{name} entries must be integers >= 1, got {v!r}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class OneShotParams:
    """
    Codebook sizes I_0, ..., I_m and J_1, ..., J_m.

    `order` lists the original receiver labels in the order the sizes refer
    to (identity unless produced by `asymptotic_parameters` after sorting).
    """

    I_list: Tuple[int, ...]
    J_list: Tuple[int, ...]
    order: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        I_list = _check_sizes("I", self.I_list)
        J_list = _check_sizes("J", self.J_list)
        if len(I_list) != len(J_list) + 1 or not J_list:
            raise UsageError(f"need m+1 I-sizes and m >= 1 J-sizes, got {len(I_list)} and {len(J_list)}")
        order = tuple(self.order) or tuple(range(1, len(J_list) + 1))
        if sorted(order) != list(range(1, len(J_list) + 1)):
            raise UsageError(f"order must permute 1..{len(J_list)}, got {order}")
        object.__setattr__(self, "I_list", I_list)
        object.__setattr__(self, "J_list", J_list)
        object.__setattr__(self, "order", order)

    @property
    def m(self) -> int:
        return len(self.J_list)

    @property
    def I(self) -> int:
        # python ints do not overflow
        return math.prod(self.I_list)

    @property
    def key_size(self) -> int:
        return self.I_list[0]

    def message_size(self, l: int) -> int:
        """|W_l| = I_1 ... I_l * J_l."""
        return math.prod(self.I_list[1 : l + 1]) * self.J_list[l - 1]

    def competing_indices(self, l: int) -> int:
        """Number of index tuples receiver l does not learn from its message: I_0 * prod_{j>l} I_j."""
        return self.I_list[0] * math.prod(self.I_list[l + 1 :])


def ceil_exp(exponent: float) -> int:
    """ceil(exp(exponent)) as an int >= 1, snapping values within rounding noise of an integer."""
    if exponent > _MAX_EXPONENT:
        raise RangeOverflowError(f"codebook size exp({exponent:.6g}) is not representable", exponent=exponent)
    value = math.exp(exponent)
    nearest = round(value)
    if abs(value - nearest) <= _ROUNDING_TOL * max(1.0, value):
        return max(1, int(nearest))
    return max(1, math.ceil(value))


def asymptotic_parameters(
    i_uz: float,
    i_us_x: Sequence[float],
    i_s_x_given_u: Sequence[float],
    n: int,
    beta: float,
    *,
    covering_slack: bool = False,
) -> OneShotParams:
    """
    Blocklength-n codebook sizes from the single-letter informations.

    Receivers are sorted so that I(US_l;X_l) is non-increasing; the returned
    `order` records the permutation. With `covering_slack` the I_1 exponent
    gains 2*beta so the total index rate becomes I(U;Z) + beta.
    """
    if beta <= 0:
        raise UsageError(f"beta must be positive, got {beta}")
    if n < 1:
        raise UsageError(f"blocklength must be >= 1, got {n}")
    if len(i_us_x) != len(i_s_x_given_u) or not i_us_x:
        raise UsageError("need one I(US_l;X_l) and one I(S_l;X_l|U) per receiver")

    order = sorted(range(len(i_us_x)), key=lambda k: -i_us_x[k])
    us_x = [i_us_x[k] for k in order]
    s_x_u = [i_s_x_given_u[k] for k in order]
    capped = [min(i_uz, v) for v in us_x]

    J_list = [ceil_exp(n * (v + beta)) for v in s_x_u]
    I_list = [ceil_exp(n * (capped[-1] - beta))]
    I_list.append(ceil_exp(n * (i_uz - capped[0] + (2 * beta if covering_slack else 0.0))))
    for l in range(1, len(us_x)):
        I_list.append(ceil_exp(n * (capped[l - 1] - capped[l])))
    return OneShotParams(tuple(I_list), tuple(J_list), tuple(k + 1 for k in order))
