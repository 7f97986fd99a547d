from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..probkit import flatten_groups
from ..regions.source import S, U, X, Z, AuxScheme, SourceSpec, receiver_joint, reorder_receivers


def _conditional(table: np.ndarray, n_cond: int) -> np.ndarray:
    """Normalize over the trailing axes; rows with no mass become all-zero."""
    axes = tuple(range(n_cond, table.ndim))
    totals = table.sum(axis=axes, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(totals > 0, table / totals, 0.0)
    return out


@dataclass(frozen=True)
class LetterModel:
    """
    Per-letter laws driving codebook generation, encoding and decoding.

    Receivers are indexed 1..m in the codebook order, which may differ from
    the source's labels when built with an `order`.
    """

    source: SourceSpec
    aux: AuxScheme
    q_u: np.ndarray
    q_z_given_u: np.ndarray
    q_s_given_u: Tuple[np.ndarray, ...]
    q_z_given_us: Tuple[np.ndarray, ...]
    q_x_given_us: Tuple[np.ndarray, ...]
    q_z: np.ndarray
    q_x_given_z: np.ndarray

    @classmethod
    def from_scheme(
        cls,
        source: SourceSpec,
        aux: AuxScheme,
        order: Optional[Sequence[int]] = None,
    ) -> "LetterModel":
        if order is not None:
            source, aux = reorder_receivers(source, aux, order)
        aux.check(source)
        s_given_u, z_given_us, x_given_us = [], [], []
        q_u = q_z_given_u = None
        for l in source.receivers:
            joint = receiver_joint(source, aux, l)
            if q_u is None:
                uz = flatten_groups(joint, [U, Z])
                q_u = uz.sum(axis=1)
                q_z_given_u = _conditional(uz, 1)
            s_given_u.append(_conditional(flatten_groups(joint, [U, S]), 1))
            z_given_us.append(_conditional(flatten_groups(joint, [U, S, Z]), 2))
            x_given_us.append(_conditional(flatten_groups(joint, [U, S, X]), 2))
        probs = source.pmf.probs
        return cls(
            source=source,
            aux=aux,
            q_u=q_u,
            q_z_given_u=q_z_given_u,
            q_s_given_u=tuple(s_given_u),
            q_z_given_us=tuple(z_given_us),
            q_x_given_us=tuple(x_given_us),
            q_z=source.z_marginal(),
            q_x_given_z=_conditional(probs, 1),
        )

    @property
    def m(self) -> int:
        return self.source.m

    @property
    def u_card(self) -> int:
        return self.q_u.shape[0]

    @property
    def s_cards(self) -> Tuple[int, ...]:
        return tuple(q.shape[1] for q in self.q_s_given_u)

    def receiver_given_z(self, l: int) -> np.ndarray:
        """Q_{X_l|Z} as a (|Z|, |X_l|) table."""
        axes = tuple(k for k in range(1, self.m + 1) if k != l)
        return self.q_x_given_z.sum(axis=axes) if axes else self.q_x_given_z
