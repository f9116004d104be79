"""Builders for the field states the atom is probed against.

Three preparations cover the studies this package reproduces: a thermal
mixture (geometric Fock weights), a coherent state (Poisson amplitudes), and
the flat-amplitude "phase state" over n = 0..r.  Truncations are explicit:
every spec carries an eps_tail bound on the discarded probability mass, and
builders renormalize what is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .states import AtomState, JointPureState, ModelParams, WeightedEnsemble

EPS_TAIL_MAX = 1e-3


def _check_eps_tail(eps_tail: float):
    if not (0.0 < eps_tail <= EPS_TAIL_MAX):
        raise ValueError(f"eps_tail must lie in (0, {EPS_TAIL_MAX}], got {eps_tail!r}")


@dataclass(frozen=True)
class ThermalSpec:
    """Thermal field at `temperature` kelvin with the atom factored in.

    temperature == 0.0 is accepted as the exact vacuum limit.
    """

    temperature: float
    atom: AtomState
    eps_tail: float = 1e-12

    def __post_init__(self):
        if not np.isfinite(self.temperature) or self.temperature < 0.0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature!r}")
        _check_eps_tail(self.eps_tail)


@dataclass(frozen=True)
class CoherentSpec:
    alpha: complex
    atom: AtomState
    eps_tail: float = 1e-12

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        _check_eps_tail(self.eps_tail)


@dataclass(frozen=True)
class PhaseStateSpec:
    """Uniform superposition of |0> .. |r| with uniform phases."""

    r: int
    atom: AtomState

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 0:
            raise ValueError(f"r must be a nonnegative integer, got {self.r!r}")
        object.__setattr__(self, "r", int(self.r))


def _product_state(atom: AtomState, field: np.ndarray) -> JointPureState:
    """atom (x) field with the extra ground slot appended."""
    n_max = field.size - 1
    amps_e = atom.c_e * field
    amps_g = np.concatenate([atom.c_g * field, [0.0 + 0.0j]])
    return JointPureState(n_max, amps_e, amps_g)


# --- thermal ----------------------------------------------------------------

def thermal_q(spec: ThermalSpec, params: ModelParams) -> float:
    """Boltzmann ratio q = exp(-hbar*omega / (kB*T)); 0 at the T=0 limit."""
    if spec.temperature == 0.0:
        return 0.0
    return float(np.exp(-params.hbar * params.omega
                        / (params.k_boltzmann * spec.temperature)))


def thermal_truncation(q: float, eps_tail: float) -> int:
    """Smallest N with geometric tail q^(N+1) < eps_tail."""
    _check_eps_tail(eps_tail)
    if not (0.0 <= q < 1.0):
        raise ValueError(f"q must lie in [0, 1), got {q!r}")
    if q == 0.0:
        return 0
    n = max(0, int(np.ceil(np.log(eps_tail) / np.log(q))) - 1)
    while q ** (n + 1) >= eps_tail:
        n += 1
    while n > 0 and q ** n < eps_tail:
        n -= 1
    return n

def thermal_weights(spec: ThermalSpec, params: ModelParams) -> np.ndarray:
    """Kept Fock weights (1-q) q^n for n = 0 .. N, unrenormalized."""
    q = thermal_q(spec, params)
    n_max = thermal_truncation(q, spec.eps_tail)
    return (1.0 - q) * q ** np.arange(n_max + 1, dtype=np.float64)


def build_thermal(spec: ThermalSpec, params: ModelParams) -> WeightedEnsemble:
    """Thermal mixture as an ensemble of Fock members sharing one n_max.

    The thermal state is diagonal in the Fock basis, so this unraveling is
    exact, not a sampling approximation.  Member k is the atom state against
    field |k> with weight (1-q) q^k; the deficit stays below eps_tail.
    """
    weights = thermal_weights(spec, params)
    n_max = weights.size - 1
    members = []
    for n, w in enumerate(weights):
        field = np.zeros(n_max + 1, dtype=np.complex128)
        field[n] = 1.0
        members.append((float(w), _product_state(spec.atom, field)))
    return WeightedEnsemble(tuple(members), tail_tol=spec.eps_tail)


# --- coherent ---------------------------------------------------------------

def coherent_truncation(alpha: complex, eps_tail: float) -> int:
    """Smallest N with Poisson(|alpha|^2) tail P(X > N) < eps_tail.

    The tail is the regularized lower incomplete gamma gammainc(N+1, lam),
    evaluated directly to dodge 1 - cumsum cancellation.
    """
    _check_eps_tail(eps_tail)
    lam = abs(alpha) ** 2
    if lam == 0.0:
        return 0
    n = max(0, int(lam))
    while special.gammainc(n + 1, lam) >= eps_tail:
        n += 1
    while n > 0 and special.gammainc(n, lam) < eps_tail:
        n -= 1
    return n


def coherent_field_amps(alpha: complex, n_max: int) -> tuple[np.ndarray, float]:
    """Truncated, renormalized coherent amplitudes and the discarded mass."""
    n = np.arange(n_max + 1, dtype=np.float64)
    mag = abs(alpha)
    if mag == 0.0:
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        amps[0] = 1.0
        return amps, 0.0
    log_mag = -0.5 * mag ** 2 + n * np.log(mag) - 0.5 * special.gammaln(n + 1.0)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    kept = float((np.abs(amps) ** 2).sum())
    return amps / np.sqrt(kept), max(0.0, 1.0 - kept)


def build_coherent(spec: CoherentSpec) -> JointPureState:
    """Coherent field against the atom, truncated at Poisson tail < eps_tail."""
    n_max = coherent_truncation(spec.alpha, spec.eps_tail)
    field, _ = coherent_field_amps(spec.alpha, n_max)
    return _product_state(spec.atom, field)


# --- phase state ------------------------------------------------------------

def build_phase_state(spec: PhaseStateSpec) -> JointPureState:
    """Flat field amplitudes 1/sqrt(r+1) on n = 0..r; exact, no truncation."""
    field = np.full(spec.r + 1, 1.0 / np.sqrt(spec.r + 1.0), dtype=np.complex128)
    return _product_state(spec.atom, field)
