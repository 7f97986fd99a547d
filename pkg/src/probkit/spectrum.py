from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UsageError
from .measures import disjoint_groups
from .pmf import MASS_TOL, CoordinateGroup, JointPmf, _freeze, flatten_groups

# Atoms closer than this are merged into one.
MERGE_TOL = 1e-12


def _merge_atoms(values: np.ndarray, probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keep = probs > 0
    values, probs = values[keep], probs[keep]
    order = np.argsort(values, kind="stable")
    values, probs = values[order], probs[order]
    if values.size == 0:
        return values, probs
    starts = np.concatenate(([0], np.flatnonzero(np.diff(values) > MERGE_TOL) + 1))
    mass = np.add.reduceat(probs, starts)
    centre = np.add.reduceat(probs * values, starts) / mass
    return centre, mass


@dataclass(frozen=True)
class DensitySpectrum:
    """Distribution of an information density: atoms (value in nats, probability)."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).reshape(-1)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if values.shape != probs.shape or values.size == 0:
            raise UsageError("spectrum needs matching, nonempty value and probability arrays")
        if np.any(probs < 0):
            raise UsageError("spectrum probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > MASS_TOL:
            raise UsageError(f"spectrum mass is {probs.sum()!r}")
        if np.any(np.diff(values) <= 0):
            raise UsageError("spectrum values must be strictly increasing")
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "probs", _freeze(probs))

    @classmethod
    def from_atoms(cls, values, probs) -> "DensitySpectrum":
        v, p = _merge_atoms(np.asarray(values, dtype=float), np.asarray(probs, dtype=float))
        return cls(v, p)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return [(float(v), float(p)) for v, p in zip(self.values, self.probs)]

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def prob_greater(self, gamma: float) -> float:
        return float(self.probs[self.values > gamma].sum())

    def iid_power(self, n: int) -> "DensitySpectrum":
        """Spectrum of the sum of n i.i.d. copies (the density of an i.i.d. n-block)."""
        if n < 1:
            raise UsageError(f"blocklength must be >= 1, got {n}")
        values, probs = self.values, self.probs
        for _ in range(n - 1):
            values, probs = _merge_atoms(
                np.add.outer(values, self.values).reshape(-1),
                np.multiply.outer(probs, self.probs).reshape(-1),
            )
        return DensitySpectrum(values, probs / probs.sum())


def density_spectrum(
    pmf: JointPmf,
    group_a: CoordinateGroup,
    group_b: CoordinateGroup,
    group_c: CoordinateGroup = (),
) -> DensitySpectrum:
    """
    Law of log[ P(a,b|c) / (P(a|c) P(b|c)) ] under the joint of (A, B, C).

    Cells with zero joint mass are skipped; with an empty C this is the
    unconditional information density.
    """
    a, b, c = disjoint_groups(group_a, group_b, group_c)
    pmf.check_group(a)
    pmf.check_group(b)
    t = flatten_groups(pmf, [a, b, c])
    p_c = t.sum(axis=(0, 1))
    p_ac = t.sum(axis=1)
    p_bc = t.sum(axis=0)
    ia, ib, ic = np.nonzero(t > 0)
    values = (
        np.log(t[ia, ib, ic])
        + np.log(p_c[ic])
        - np.log(p_ac[ia, ic])
        - np.log(p_bc[ib, ic])
    )
    return DensitySpectrum.from_atoms(values, t[ia, ib, ic])
