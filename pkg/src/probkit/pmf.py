from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

from ..errors import UsageError

# Tolerance on the total mass of a pmf and on each channel row.
MASS_TOL = 1e-12

CoordinateGroup = Union[int, Sequence[int]]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def as_group(group: CoordinateGroup) -> Tuple[int, ...]:
    """Normalize an int or a sequence of ints into a coordinate tuple."""
    if isinstance(group, (int, np.integer)):
        return (int(group),)
    return tuple(int(g) for g in group)


@dataclass(frozen=True)
class JointPmf:
    """
    Exact pmf over a product of finite alphabets.

    `probs` is stored as a read-only table whose shape is `alphabet_sizes`;
    a flat row-major vector is accepted on construction.
    """

    alphabet_sizes: Tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.alphabet_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise UsageError(f"alphabet sizes must be positive integers, got {sizes}")
        table = np.asarray(self.probs, dtype=float)
        if table.size != math.prod(sizes):
            raise UsageError(
                f"pmf has {table.size} entries but the alphabets {sizes} need {math.prod(sizes)}"
            )
        table = table.reshape(sizes)
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise UsageError("pmf entries must be finite and nonnegative")
        total = float(table.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise UsageError(f"pmf sums to {total!r}, expected 1 within {MASS_TOL}")
        object.__setattr__(self, "alphabet_sizes", sizes)
        object.__setattr__(self, "probs", _freeze(table))

    # Constructors --------------------------------------------------------------

    @classmethod
    def from_table(cls, table: np.ndarray) -> "JointPmf":
        table = np.asarray(table, dtype=float)
        return cls(tuple(table.shape), table)

    @classmethod
    def uniform(cls, sizes: Sequence[int]) -> "JointPmf":
        sizes = tuple(sizes)
        return cls(sizes, np.full(sizes, 1.0 / math.prod(sizes)))

    @classmethod
    def point_mass(cls, sizes: Sequence[int], at: Sequence[int]) -> "JointPmf":
        table = np.zeros(tuple(sizes))
        table[tuple(at)] = 1.0
        return cls(tuple(sizes), table)

    @classmethod
    def product(cls, *pmfs: "JointPmf") -> "JointPmf":
        """Independent product; coordinates are concatenated in argument order."""
        table = np.ones(())
        for p in pmfs:
            table = np.multiply.outer(table, p.probs)
        return cls.from_table(table)

    # Accessors -----------------------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def flat(self) -> np.ndarray:
        return self.probs.reshape(-1)

    def check_group(self, group: CoordinateGroup, *, allow_empty: bool = False) -> Tuple[int, ...]:
        coords = as_group(group)
        if not coords and not allow_empty:
            raise UsageError("coordinate group must be nonempty")
        if len(set(coords)) != len(coords):
            raise UsageError(f"coordinate group {coords} repeats an index")
        for c in coords:
            if not 0 <= c < self.ndim:
                raise UsageError(f"coordinate {c} out of range for a {self.ndim}-coordinate pmf")
        return coords

    def group_size(self, group: CoordinateGroup) -> int:
        return math.prod(self.alphabet_sizes[c] for c in as_group(group))


def doubly_symmetric_binary(crossover: float) -> JointPmf:
    """Fair bit X and its image through a BSC(crossover)."""
    d = float(crossover)
    return JointPmf((2, 2), np.array([[1 - d, d], [d, 1 - d]]) / 2.0)


@dataclass(frozen=True)
class Channel:
    """Conditional pmf with one row per input tuple (row-major over `input_sizes`)."""

    input_sizes: Tuple[int, ...]
    output_size: int
    rows: np.ndarray

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.input_sizes)
        out = int(self.output_size)
        if not sizes or any(s < 1 for s in sizes) or out < 1:
            raise UsageError(f"invalid channel shape {sizes} -> {out}")
        rows = np.asarray(self.rows, dtype=float)
        if rows.size != math.prod(sizes) * out:
            raise UsageError(
                f"channel table has {rows.size} entries, expected {math.prod(sizes)} x {out}"
            )
        rows = rows.reshape(math.prod(sizes), out)
        if np.any(rows < 0) or not np.all(np.isfinite(rows)):
            raise UsageError("channel rows must be finite and nonnegative")
        sums = rows.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > MASS_TOL)
        if bad.size:
            raise UsageError(f"channel row {int(bad[0])} sums to {sums[bad[0]]!r}")
        object.__setattr__(self, "input_sizes", sizes)
        object.__setattr__(self, "output_size", out)
        object.__setattr__(self, "rows", _freeze(rows))

    # Constructors --------------------------------------------------------------

    @classmethod
    def identity(cls, size: int, *, output_size: int | None = None) -> "Channel":
        """Copy the input; extra output symbols (if any) get no mass."""
        out = size if output_size is None else output_size
        if out < size:
            raise UsageError(f"identity channel needs at least {size} outputs, got {out}")
        rows = np.zeros((size, out))
        rows[np.arange(size), np.arange(size)] = 1.0
        return cls((size,), out, rows)

    @classmethod
    def constant(cls, input_sizes: Sequence[int], output_size: int = 1, symbol: int = 0) -> "Channel":
        rows = np.zeros((math.prod(input_sizes), output_size))
        rows[:, symbol] = 1.0
        return cls(tuple(input_sizes), output_size, rows)

    @classmethod
    def from_function(
        cls,
        input_sizes: Sequence[int],
        output_size: int,
        fn: Callable[..., int],
    ) -> "Channel":
        """Deterministic channel: input tuple -> fn(*inputs)."""
        sizes = tuple(input_sizes)
        rows = np.zeros((math.prod(sizes), output_size))
        for r, idx in enumerate(np.ndindex(*sizes)):
            rows[r, int(fn(*idx))] = 1.0
        return cls(sizes, output_size, rows)

    @classmethod
    def binary_symmetric(cls, crossover: float) -> "Channel":
        d = float(crossover)
        return cls((2,), 2, np.array([[1 - d, d], [d, 1 - d]]))

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        input_sizes: Sequence[int],
        output_size: int,
        *,
        concentration: float = 1.0,
    ) -> "Channel":
        sizes = tuple(input_sizes)
        rows = rng.dirichlet(np.full(output_size, concentration), size=math.prod(sizes))
        return cls(sizes, output_size, normalize_rows(rows))

    # Derived channels ----------------------------------------------------------

    @property
    def n_inputs(self) -> int:
        return math.prod(self.input_sizes)

    def as_table(self) -> np.ndarray:
        return self.rows.reshape(self.input_sizes + (self.output_size,))

    def with_rows(self, rows: np.ndarray) -> "Channel":
        return Channel(self.input_sizes, self.output_size, rows)

    def compose(self, other: "Channel") -> "Channel":
        """Run `self` then `other`; `other` must read exactly this channel's output."""
        if other.input_sizes != (self.output_size,):
            raise UsageError(
                f"cannot compose: output size {self.output_size} vs next input {other.input_sizes}"
            )
        return Channel(self.input_sizes, other.output_size, normalize_rows(self.rows @ other.rows))


def normalize_rows(rows: np.ndarray) -> np.ndarray:
    rows = np.clip(np.asarray(rows, dtype=float), 0.0, None)
    sums = rows.sum(axis=1, keepdims=True)
    return rows / sums


def attach_channel(pmf: JointPmf, channel: Channel, inputs: CoordinateGroup) -> JointPmf:
    """
    Extend `pmf` by one new last coordinate drawn through `channel` from `inputs`.

    The channel may either list one input size per input coordinate, or read a
    single flattened input whose size is the product of the input alphabets.
    """
    coords = pmf.check_group(inputs)
    sizes = tuple(pmf.alphabet_sizes[c] for c in coords)
    if channel.input_sizes != sizes:
        if not (len(channel.input_sizes) == 1 and channel.n_inputs == math.prod(sizes)):
            raise UsageError(
                f"channel expects inputs {channel.input_sizes}, coordinates {coords} have {sizes}"
            )
    table = channel.rows.reshape(sizes + (channel.output_size,))
    # reorder the input axes into ascending coordinate order, then broadcast
    order = sorted(range(len(coords)), key=lambda k: coords[k])
    table = table.transpose(tuple(order) + (len(coords),))
    shape = [pmf.alphabet_sizes[i] if i in coords else 1 for i in range(pmf.ndim)]
    joint = pmf.probs[..., None] * table.reshape(shape + [channel.output_size])
    return JointPmf.from_table(joint)


def flatten_groups(pmf: JointPmf, groups: Iterable[CoordinateGroup]) -> np.ndarray:
    """Marginal over the union of `groups` reshaped to one axis per group."""
    coords: list[int] = []
    dims: list[int] = []
    for g in groups:
        g = as_group(g)
        coords.extend(g)
        dims.append(pmf.group_size(g))
    pmf.check_group(coords, allow_empty=True)
    drop = tuple(i for i in range(pmf.ndim) if i not in coords)
    table = pmf.probs.sum(axis=drop) if drop else pmf.probs
    kept = sorted(coords)
    table = table.transpose([kept.index(c) for c in coords])
    return table.reshape(dims)
