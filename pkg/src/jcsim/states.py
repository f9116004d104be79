"""Core state containers for a two-level atom coupled to one bosonic mode.

Storage convention
------------------
A joint pure state keeps two complex amplitude arrays over the Fock index n:

    amps_e[n]  for n = 0 .. n_max      (atom excited,  field |n>)
    amps_g[n]  for n = 0 .. n_max + 1  (atom ground,   field |n>)

The ground array carries one extra slot so that the topmost excitation pair
{|e, n_max>, |g, n_max+1>} closes on itself under resonant exchange.  With
this layout truncation error lives entirely in state preparation; the
propagator itself is exact on the stored space.

All containers are immutable values: arrays are copied in and marked
read-only, operations return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy import constants

NORM_TOL_STATE = 1e-10     # construction-time norm gate
NORM_TOL_REDUCE = 1e-6     # looser gate for reduction of long-evolved states
TRACE_TOL = 1e-10
HERMITICITY_SLACK = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the resonant atom-mode model.

    omega is the shared atom/mode angular frequency in rad/s, g the vacuum
    coupling rate in rad/s.  hbar and k_boltzmann are carried explicitly so
    thermal occupations are reproducible from the stored values alone.
    """

    omega: float
    g: float
    hbar: float = constants.hbar
    k_boltzmann: float = constants.k

    def __post_init__(self):
        for name in ("omega", "g", "hbar", "k_boltzmann"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class AtomState:
    """Normalized atom amplitudes (c_e, c_g)."""

    c_e: complex
    c_g: complex

    def __post_init__(self):
        n = abs(self.c_e) ** 2 + abs(self.c_g) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"atom amplitudes not normalized: |c|^2 = {n!r}")

    @classmethod
    def excited(cls) -> "AtomState":
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def ground(cls) -> "AtomState":
        return cls(0.0 + 0.0j, 1.0 + 0.0j)

    @classmethod
    def equal_superposition(cls) -> "AtomState":
        """(|e> + |g>)/sqrt(2), the standard coherence probe."""
        s = 1.0 / np.sqrt(2.0)
        return cls(s + 0.0j, s + 0.0j)


def _frozen_array(values, length: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size != length:
        raise ValueError(f"{what} must have length {length}, got {arr.size}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointPureState:
    """Joint atom-field pure state in the storage convention above."""

    n_max: int
    amps_e: np.ndarray
    amps_g: np.ndarray

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        e = _frozen_array(self.amps_e, self.n_max + 1, "amps_e")
        g = _frozen_array(self.amps_g, self.n_max + 2, "amps_g")
        object.__setattr__(self, "amps_e", e)
        object.__setattr__(self, "amps_g", g)
        nrm = self.norm()
        if abs(nrm - 1.0) > NORM_TOL_STATE:
            raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {NORM_TOL_STATE}")

    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.amps_e) ** 2).sum()
                             + (np.abs(self.amps_g) ** 2).sum()))

    def excitation_number(self) -> float:
        """Conserved mean excitation: n over |g,n>, n+1 over |e,n>."""
        n_e = np.arange(self.n_max + 1)
        n_g = np.arange(self.n_max + 2)
        return float(((n_e + 1) * np.abs(self.amps_e) ** 2).sum()
                     + (n_g * np.abs(self.amps_g) ** 2).sum())


@dataclass(frozen=True, eq=False)
class WeightedEnsemble:
    """Statistical mixture of joint pure states with positive weights.

    tail_tol is the truncation tolerance declared by whatever built the
    ensemble; the weight sum may fall short of one by at most that much.
    """

    members: Tuple[Tuple[float, JointPureState], ...]
    tail_tol: float = 0.0

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        for w, s in members:
            if not np.isfinite(w) or w <= 0.0:
                raise ValueError(f"ensemble weights must be > 0, got {w!r}")
            if not isinstance(s, JointPureState):
                raise ValueError("ensemble members must be JointPureState instances")
        total = sum(w for w, _ in members)
        if total > 1.0 + 1e-12 or total < 1.0 - self.tail_tol - 1e-12:
            raise ValueError(
                f"weight sum {total!r} outside [1 - {self.tail_tol}, 1]")
        object.__setattr__(self, "members", members)

    @property
    def weight_sum(self) -> float:
        return float(sum(w for w, _ in self.members))

    @property
    def weight_deficit(self) -> float:
        """Truncated-away probability mass, reported alongside reductions."""
        return max(0.0, 1.0 - self.weight_sum)


@dataclass(frozen=True)
class AtomDensityMatrix:
    """Reduced 2x2 atom state: populations and the e-g coherence."""

    rho_ee: float
    rho_gg: float
    rho_eg: complex

    def __post_init__(self):
        if abs(self.rho_ee + self.rho_gg - 1.0) > TRACE_TOL:
            raise ValueError(
                f"trace {self.rho_ee + self.rho_gg!r} deviates from 1 beyond {TRACE_TOL}")
        for name in ("rho_ee", "rho_gg"):
            v = getattr(self, name)
            if v < -HERMITICITY_SLACK or v > 1.0 + HERMITICITY_SLACK:
                raise ValueError(f"{name} = {v!r} outside [0, 1]")
        if abs(self.rho_eg) ** 2 > self.rho_ee * self.rho_gg + HERMITICITY_SLACK:
            raise ValueError("coherence violates |rho_eg|^2 <= rho_ee * rho_gg")

    @property
    def rho_ge(self) -> complex:
        return np.conj(self.rho_eg)

    def purity(self) -> float:
        return float(self.rho_ee ** 2 + self.rho_gg ** 2 + 2 * abs(self.rho_eg) ** 2)


def reduce_atom(state: JointPureState) -> AtomDensityMatrix:
    """Trace out the field.

    rho_ee = sum_n |amps_e[n]|^2, rho_eg = sum_n amps_e[n] * conj(amps_g[n])
    over the shared index range.  The input is gated at a looser norm
    tolerance than construction so long sweeps with accumulated round-off
    still reduce; the output is renormalized to unit trace.
    """
    norm2 = float((np.abs(state.amps_e) ** 2).sum() + (np.abs(state.amps_g) ** 2).sum())
    if abs(np.sqrt(norm2) - 1.0) > NORM_TOL_REDUCE:
        raise ValueError(f"state norm {np.sqrt(norm2)!r} beyond reduction gate "
                         f"{NORM_TOL_REDUCE}")
    ee = float((np.abs(state.amps_e) ** 2).sum()) / norm2
    gg = float((np.abs(state.amps_g) ** 2).sum()) / norm2
    eg = complex((state.amps_e * np.conj(state.amps_g[:-1])).sum()) / norm2
    return AtomDensityMatrix(ee, gg, eg)


def reduce_atom_ensemble(ensemble: WeightedEnsemble) -> AtomDensityMatrix:
    """Weight-averaged reduction, renormalized by the weight sum.

    The mass lost to truncation is available as ensemble.weight_deficit.
    """
    total = ensemble.weight_sum
    ee = gg = 0.0
    eg = 0.0 + 0.0j
    for w, s in ensemble.members:
        r = reduce_atom(s)
        ee += w * r.rho_ee
        gg += w * r.rho_gg
        eg += w * r.rho_eg
    return AtomDensityMatrix(ee / total, gg / total, eg / total)


def support_dimension(state: JointPureState, tol: float = 1e-12) -> int:
    """Number of basis amplitudes with modulus above tol."""
    if not (tol > 0.0):
        raise ValueError(f"tol must be > 0, got {tol!r}")
    return int((np.abs(state.amps_e) > tol).sum() + (np.abs(state.amps_g) > tol).sum())


def marginal_purity(state: JointPureState) -> float:
    """Purity of either marginal of the joint pure state.

    For a pure joint state the atom and field marginals share nonzero
    spectrum, so the cheap atom-side purity equals the field-side one.
    Equals 1 exactly when atom and field factorize.
    """
    return reduce_atom(state).purity()
