from __future__ import annotations

import numpy as np
from scipy.special import entr

from ..errors import UsageError
from .pmf import CoordinateGroup, JointPmf, as_group, flatten_groups


def marginalize(pmf: JointPmf, keep: CoordinateGroup) -> JointPmf:
    """Exact marginal on `keep`, coordinates in the order they are listed."""
    coords = pmf.check_group(keep)
    drop = tuple(i for i in range(pmf.ndim) if i not in coords)
    table = pmf.probs.sum(axis=drop) if drop else pmf.probs
    kept = sorted(coords)
    return JointPmf.from_table(table.transpose([kept.index(c) for c in coords]))


def entropy(pmf: JointPmf, group: CoordinateGroup) -> float:
    """Shannon entropy (nats) of the marginal on `group`; the empty group has entropy 0."""
    coords = pmf.check_group(group, allow_empty=True)
    if not coords:
        return 0.0
    p = flatten_groups(pmf, [coords])
    return max(0.0, float(entr(p).sum()))


def disjoint_groups(*groups: CoordinateGroup) -> list[tuple[int, ...]]:
    out = [as_group(g) for g in groups]
    seen: set[int] = set()
    for g in out:
        if seen.intersection(g):
            raise UsageError(f"coordinate groups overlap: {out}")
        seen.update(g)
    return out


def mutual_information(pmf: JointPmf, group_a: CoordinateGroup, group_b: CoordinateGroup) -> float:
    """I(A;B) in nats."""
    a, b = disjoint_groups(group_a, group_b)
    pmf.check_group(a)
    pmf.check_group(b)
    value = entropy(pmf, a) + entropy(pmf, b) - entropy(pmf, a + b)
    return max(0.0, value)


def conditional_mutual_information(
    pmf: JointPmf,
    group_a: CoordinateGroup,
    group_b: CoordinateGroup,
    group_c: CoordinateGroup = (),
) -> float:
    """I(A;B|C) in nats; an empty C gives I(A;B)."""
    a, b, c = disjoint_groups(group_a, group_b, group_c)
    pmf.check_group(a)
    pmf.check_group(b)
    pmf.check_group(c, allow_empty=True)
    value = entropy(pmf, a + c) + entropy(pmf, b + c) - entropy(pmf, a + b + c) - entropy(pmf, c)
    return max(0.0, value)


def total_variation(p: JointPmf, q: JointPmf) -> float:
    """Unnormalized L1 distance sum |p - q|, in [0, 2]."""
    if p.alphabet_sizes != q.alphabet_sizes:
        raise UsageError(f"alphabet mismatch: {p.alphabet_sizes} vs {q.alphabet_sizes}")
    return float(np.abs(p.probs - q.probs).sum())
