from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import UsageError
from ..probkit import DensitySpectrum, density_spectrum
from ..regions.source import S, U, X, Z, AuxScheme, SourceSpec, receiver_joint, reorder_receivers
from .params import OneShotParams

logger = logging.getLogger(__name__)

_GRID_POINTS = 1000


def _tail_above(spectrum: DensitySpectrum) -> np.ndarray:
    """P[i > v_j] at every atom v_j."""
    rev = np.cumsum(spectrum.probs[::-1])[::-1]
    return np.concatenate((rev[1:], [0.0]))


def _mass_below(spectrum: DensitySpectrum) -> np.ndarray:
    """P[i < v_j] at every atom v_j."""
    return np.concatenate(([0.0], np.cumsum(spectrum.probs)[:-1]))


def _covering_term(spectrum: DensitySpectrum, size: int) -> float:
    # inf_gamma P[i > gamma] + exp(gamma/2) / (2 sqrt(size)); on each step of the
    # tail the sum grows with gamma, so only atoms compete with the gamma -> -inf limit 1
    if size < 1:
        raise UsageError(f"codebook size must be >= 1, got {size}")
    log_scale = -math.log(2.0) - 0.5 * math.log(size)
    with np.errstate(over="ignore"):
        candidates = _tail_above(spectrum) + np.exp(spectrum.values / 2.0 + log_scale)
    return min(1.0, float(candidates.min()))


def compute_T(spectrum: DensitySpectrum, I: int) -> float:
    """Soft-covering term for the U-codebook of total size I."""
    return _covering_term(spectrum, I)


def compute_T_l(spectrum: DensitySpectrum, J_l: int) -> float:
    """Soft-covering term for receiver l's S-codebook of size J_l."""
    return _covering_term(spectrum, J_l)


def _decoding_term(spectrum: DensitySpectrum, competitors: int) -> float:
    if competitors < 1:
        raise UsageError(f"index set size must be >= 1, got {competitors}")
    if competitors == 1:
        # log(0) = -inf: there is no wrong index to confuse with
        return 0.0
    shift = math.log(competitors - 1)
    # inf over gamma of P[i <= shift + gamma] + exp(-gamma): approached from the
    # left of each atom, plus the gamma -> +inf limit 1
    with np.errstate(over="ignore"):
        candidates = _mass_below(spectrum) + np.exp(shift - spectrum.values)
    return min(1.0, float(candidates.min()))


def compute_epsilon(spectra: Sequence[DensitySpectrum], I_0: int) -> float:
    """Decoding term: max over receivers of the Shannon-bound infimum."""
    if not spectra:
        raise UsageError("compute_epsilon needs at least one spectrum")
    return max(_decoding_term(s, I_0) for s in spectra)


def secrecy_infimum(a: float, size: int, m: int) -> Tuple[float, float]:
    """
    inf over 0 < delta < size^(3/2)/e of 4m(a + 2 delta) log(size^(3/2)/delta).

    Returns (value, minimizing delta). Minimized over x = log(delta) by bounded
    Brent search with a dense-grid safeguard; a = 0 gives the delta -> 0 limit 0.
    """
    if a <= 0.0:
        return 0.0, 0.0
    log_c = 1.5 * math.log(size)
    upper = log_c - 1.0
    lower = min(log_c - 80.0, math.log(a) - 40.0)

    def objective(x):
        return 4.0 * m * (a + 2.0 * np.exp(x)) * (log_c - x)

    res = minimize_scalar(objective, bounds=(lower, upper), method="bounded", options={"xatol": 1e-10})
    grid = np.linspace(lower, upper, _GRID_POINTS)
    values = objective(grid)
    k = int(np.argmin(values))
    if float(res.fun) <= values[k]:
        return float(res.fun), float(math.exp(res.x))
    return float(values[k]), float(math.exp(grid[k]))


@dataclass(frozen=True)
class OneShotBounds:
    T: float
    T_list: Tuple[float, ...]
    epsilon: float
    error_bounds: Tuple[float, ...]
    secrecy_bounds: Tuple[float, ...]
    deltas: Tuple[float, ...] = ()
    # decoding term over the I_0 * prod_{j>l} I_j indices receiver l does not learn from W_l
    variant_epsilon: float = 0.0
    variant_error_bounds: Tuple[float, ...] = ()
    blocklength: int = 1
    key_size: int = 1

    def __post_init__(self) -> None:
        for name, v in [("T", self.T), ("epsilon", self.epsilon)] + [("T_l", t) for t in self.T_list]:
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"{name} = {v} outside [0, 1]")
        if any(b < 0 for b in self.error_bounds + self.secrecy_bounds):
            raise UsageError("bounds must be nonnegative")

    @property
    def effective_error_bounds(self) -> Tuple[float, ...]:
        return tuple(min(1.0, b) for b in self.error_bounds)

    @property
    def effective_secrecy_bounds(self) -> Tuple[float, ...]:
        # leakage never exceeds log|K|
        cap = math.log(self.key_size)
        return tuple(min(cap, b) for b in self.secrecy_bounds)

    def as_dict(self) -> dict:
        return {
            "blocklength": self.blocklength,
            "key_size": self.key_size,
            "T": self.T,
            "T_l": list(self.T_list),
            "epsilon": self.epsilon,
            "error_bounds": list(self.error_bounds),
            "effective_error_bounds": list(self.effective_error_bounds),
            "secrecy_bounds": list(self.secrecy_bounds),
            "effective_secrecy_bounds": list(self.effective_secrecy_bounds),
            "deltas": list(self.deltas),
            "variant_epsilon": self.variant_epsilon,
            "variant_error_bounds": list(self.variant_error_bounds),
        }


def scheme_spectra(
    source: SourceSpec, aux: AuxScheme, blocklength: int = 1
) -> Tuple[DensitySpectrum, Tuple[DensitySpectrum, ...], Tuple[DensitySpectrum, ...]]:
    """Spectra of i_{U;Z}, i_{S_l;Z|U} and i_{US_l;X_l}, tensorized to the n-block."""
    aux.check(source)
    joints = [receiver_joint(source, aux, l) for l in source.receivers]
    spec_uz = density_spectrum(joints[0], U, Z)
    spec_sz = tuple(density_spectrum(j, S, Z, U) for j in joints)
    spec_usx = tuple(density_spectrum(j, (U, S), X) for j in joints)
    if blocklength > 1:
        spec_uz = spec_uz.iid_power(blocklength)
        spec_sz = tuple(s.iid_power(blocklength) for s in spec_sz)
        spec_usx = tuple(s.iid_power(blocklength) for s in spec_usx)
    return spec_uz, spec_sz, spec_usx


def theorem3_bounds(
    source: SourceSpec,
    aux: AuxScheme,
    params: OneShotParams,
    *,
    blocklength: int = 1,
) -> OneShotBounds:
    """
    One-shot error and leakage bounds of the likelihood-encoder scheme.

    With blocklength n > 1 the single-letter source and auxiliaries are used
    i.i.d. over n symbols and the spectra are tensorized accordingly. Entries
    of the per-receiver tuples follow `params.order`.
    """
    m = source.m
    if params.m != m:
        raise UsageError(f"params describe {params.m} receivers, source has {m}")
    source, aux = reorder_receivers(source, aux, params.order)
    spec_uz, spec_sz, spec_usx = scheme_spectra(source, aux, blocklength)

    T = compute_T(spec_uz, params.I)
    T_list = tuple(compute_T_l(s, J) for s, J in zip(spec_sz, params.J_list))
    eps = compute_epsilon(spec_usx, params.key_size)
    variant = max(_decoding_term(s, params.competing_indices(l)) for l, s in enumerate(spec_usx, start=1))

    error_bounds, secrecy_bounds, deltas = [], [], []
    for l, T_l in enumerate(T_list, start=1):
        error_bounds.append(2 * m * (eps + T + T_l))
        value, delta = secrecy_infimum(2 * T + T_l, params.I * params.J_list[l - 1], m)
        secrecy_bounds.append(value)
        deltas.append(delta)
    bounds = OneShotBounds(
        T=T,
        T_list=T_list,
        epsilon=eps,
        error_bounds=tuple(error_bounds),
        secrecy_bounds=tuple(secrecy_bounds),
        deltas=tuple(deltas),
        variant_epsilon=variant,
        variant_error_bounds=tuple(2 * m * (variant + T + t) for t in T_list),
        blocklength=blocklength,
        key_size=params.key_size,
    )
    if min(bounds.error_bounds) >= 1.0:
        logger.info("one-shot error bounds are vacuous (min %.4g)", min(bounds.error_bounds))
    return bounds
