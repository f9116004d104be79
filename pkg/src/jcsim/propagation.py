"""Exact propagation of the resonant atom-mode model, plus a brute-force check.

On resonance the excitation-number operator commutes with the exchange
coupling, so the joint state evolves independently inside each pair
{|e,n>, |g,n+1>}.  The pair rotates by the angle

    theta_n = g * sqrt(n+1) * t

according to

    amps_e[n]   ->  cos(theta_n) * amps_e[n]   - 1j * sin(theta_n) * amps_g[n+1]
    amps_g[n+1] -> -1j * sin(theta_n) * amps_e[n] + cos(theta_n) * amps_g[n+1]

while amps_g[0] is left alone (the dark state).  That closed form is the hot
path of the package: everything is vectorized over n and, for time sweeps,
chunked over the grid.

Two time parameterizations are exposed.  The physical API takes seconds and
ModelParams; the *_gt variants take the dimensionless angle gt directly, so
pipelines that only care about gt never round-trip through seconds (changing
g then cannot move their output by even one ulp).

evolve_oracle integrates the full truncated Hamiltonian matrix with a
classical fixed-step 4th-order Runge-Kutta scheme.  It shares no code with
the closed form and exists to cross-check it; global error falls as steps^-4.
"""

from __future__ import annotations

import enum
from typing import Iterable, List, Sequence, Union

import numpy as np

from .states import (AtomDensityMatrix, JointPureState, ModelParams,
                     WeightedEnsemble, reduce_atom)

# target element count per broadcast chunk in multi-time sweeps (~16 MB complex)
_CHUNK_ELEMS = 1_000_000


class FrameConvention(enum.Enum):
    """Rotating frame of the returned amplitudes.

    INTERACTION keeps only the exchange rotation.  SCHROEDINGER multiplies
    each basis amplitude by its free phase exp(-1j*omega*t*(n + sz/2)); the
    two differ by a uniform factor exp(-1j*omega*t) on rho_eg, so populations
    and |rho_eg| agree between them.
    """

    INTERACTION = "interaction"
    SCHROEDINGER = "schroedinger"


def _rotate_gt(amps_e: np.ndarray, amps_g: np.ndarray, gt: float,
               reverse: bool) -> tuple[np.ndarray, np.ndarray]:
    """One doublet rotation by dimensionless angle gt (arrays unchanged)."""
    m = amps_e.size
    theta = gt * np.sqrt(np.arange(1, m + 1, dtype=np.float64))
    c = np.cos(theta)
    s = np.sin(theta)
    if reverse:
        s = -s
    new_e = c * amps_e - 1j * s * amps_g[1:]
    new_g = np.empty_like(amps_g)
    new_g[0] = amps_g[0]
    new_g[1:] = -1j * s * amps_e + c * amps_g[1:]
    return new_e, new_g


def _free_phases(omega_t: float, n_max: int,
                 reverse: bool) -> tuple[np.ndarray, np.ndarray]:
    """Free-evolution phase factors for the e and g amplitude arrays.

    Built as cumulative powers of u = exp(-1j*omega_t) so the phase
    *difference* between neighbouring n stays accurate to n*eps even when
    omega_t is astronomically large, which keeps observables frame-independent.
    """
    u = np.exp(1j * omega_t if reverse else -1j * omega_t)
    powers = np.empty(n_max + 2, dtype=np.complex128)
    powers[0] = 1.0
    np.cumprod(np.full(n_max + 1, u), out=powers[1:])
    half = np.exp(0.5j * omega_t if reverse else -0.5j * omega_t)
    return powers[: n_max + 1] * half, powers * np.conj(half)


def evolve_exact_gt(state: JointPureState, gt: float,
                    reverse: bool = False) -> JointPureState:
    """Interaction-frame evolution by dimensionless angle gt >= 0."""
    if not np.isfinite(gt) or gt < 0.0:
        raise ValueError(f"gt must be finite and >= 0, got {gt!r}")
    e, g = _rotate_gt(state.amps_e, state.amps_g, float(gt), reverse)
    return JointPureState(state.n_max, e, g)


def evolve_exact(state: JointPureState, params: ModelParams, t: float,
                 frame: FrameConvention = FrameConvention.INTERACTION,
                 reverse: bool = False) -> JointPureState:
    """Closed-form evolution for a duration t >= 0 seconds.

    Reverse evolution is requested through the flag, not a negative t.
    """
    if not np.isfinite(t) or t < 0.0:
        raise ValueError(f"t must be finite and >= 0 (use reverse=True to undo), got {t!r}")
    e, g = _rotate_gt(state.amps_e, state.amps_g, params.g * t, reverse)
    if frame is FrameConvention.SCHROEDINGER:
        ph_e, ph_g = _free_phases(params.omega * t, state.n_max, reverse)
        e = e * ph_e
        g = g * ph_g
    return JointPureState(state.n_max, e, g)


def _series_pure_gt(amps_e: np.ndarray, amps_g: np.ndarray,
                    gt_grid: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rho_ee, rho_gg, rho_eg_raw) of one pure state on a gt grid.

    Unnormalized sums, chunked over the grid to bound memory.
    """
    m = amps_e.size
    sq = np.sqrt(np.arange(1, m + 1, dtype=np.float64))
    ee = np.empty(gt_grid.size)
    gg = np.empty(gt_grid.size)
    eg = np.empty(gt_grid.size, dtype=np.complex128)
    step = max(1, _CHUNK_ELEMS // max(m, 1))
    g0 = amps_g[0]
    for lo in range(0, gt_grid.size, step):
        hi = min(lo + step, gt_grid.size)
        theta = gt_grid[lo:hi, None] * sq[None, :]
        c = np.cos(theta)
        s = np.sin(theta)
        ne = c * amps_e - 1j * (s * amps_g[1:])
        ng_tail = -1j * (s * amps_e) + c * amps_g[1:]   # slots n = 1 .. n_max+1
        ee[lo:hi] = (np.abs(ne) ** 2).sum(axis=1)
        gg[lo:hi] = abs(g0) ** 2 + (np.abs(ng_tail) ** 2).sum(axis=1)
        eg[lo:hi] = ne[:, 0] * np.conj(g0) + (ne[:, 1:] * np.conj(ng_tail[:, :-1])).sum(axis=1)
    return ee, gg, eg


def coherence_series_gt(state0: Union[JointPureState, WeightedEnsemble],
                        gt_grid: Sequence[float]
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rho_ee, rho_gg, rho_eg) arrays over a dimensionless gt grid.

    Ensembles are averaged member by member in storage order and
    renormalized by the weight sum, matching reduce_atom_ensemble.
    """
    grid = np.asarray(gt_grid, dtype=np.float64).reshape(-1)
    if grid.size == 0:
        raise ValueError("gt grid must be nonempty")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0 or np.any(np.diff(grid) < 0.0):
        raise ValueError("gt grid must be finite, nonnegative and nondecreasing")
    if isinstance(state0, JointPureState):
        ee, gg, eg = _series_pure_gt(state0.amps_e, state0.amps_g, grid)
        norm2 = float((np.abs(state0.amps_e) ** 2).sum()
                      + (np.abs(state0.amps_g) ** 2).sum())
        return ee / norm2, gg / norm2, eg / norm2
    total = state0.weight_sum
    ee = np.zeros(grid.size)
    gg = np.zeros(grid.size)
    eg = np.zeros(grid.size, dtype=np.complex128)
    for w, member in state0.members:
        me, mg, mx = _series_pure_gt(member.amps_e, member.amps_g, grid)
        norm2 = float((np.abs(member.amps_e) ** 2).sum()
                      + (np.abs(member.amps_g) ** 2).sum())
        ee += (w / norm2) * me
        gg += (w / norm2) * mg
        eg += (w / norm2) * mx
    return ee / total, gg / total, eg / total


def coherence_trace(state0: Union[JointPureState, WeightedEnsemble],
                    params: ModelParams, t_grid: Sequence[float],
                    frame: FrameConvention = FrameConvention.INTERACTION
                    ) -> List[AtomDensityMatrix]:
    """Reduced atom state at every time of a nondecreasing grid (seconds).

    Each grid point is evaluated directly from the closed form (no step
    accumulation), so the k-th element is exactly
    reduce_atom(evolve_exact(state0, params, t_grid[k], frame)).
    """
    t = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if t.size == 0:
        raise ValueError("t_grid must be nonempty")
    if not np.all(np.isfinite(t)) or t[0] < 0.0 or np.any(np.diff(t) < 0.0):
        raise ValueError("t_grid must be finite, nonnegative and nondecreasing")
    ee, gg, eg = coherence_series_gt(state0, params.g * t)
    if frame is FrameConvention.SCHROEDINGER:
        eg = eg * np.exp(-1j * params.omega * t)
    return [AtomDensityMatrix(float(a), float(b), complex(c))
            for a, b, c in zip(ee, gg, eg)]


def _dense_hamiltonian(n_max: int, params: ModelParams,
                       frame: FrameConvention) -> np.ndarray:
    """Full matrix of the truncated model over the storage basis, in rad/s.

    Basis order: |e,0> .. |e,n_max>, then |g,0> .. |g,n_max+1>.
    """
    ne, ng = n_max + 1, n_max + 2
    dim = ne + ng
    h = np.zeros((dim, dim))
    for n in range(ne):
        v = params.g * np.sqrt(n + 1.0)
        h[n, ne + n + 1] = v
        h[ne + n + 1, n] = v
    if frame is FrameConvention.SCHROEDINGER:
        diag = np.concatenate([params.omega * (np.arange(ne) + 0.5),
                               params.omega * (np.arange(ng) - 0.5)])
        h[np.diag_indices(dim)] += diag
    return h


def evolve_oracle(state: JointPureState, params: ModelParams, t: float,
                  frame: FrameConvention = FrameConvention.INTERACTION,
                  steps: int = 100_000, norm_tol: float | None = None
                  ) -> JointPureState:
    """Fixed-step RK4 integration of the full truncated Hamiltonian.

    Deliberately independent of the doublet closed form.  Norm drift of the
    non-unitary integrator is the residual proxy: when norm_tol is given and
    the drift exceeds it, the call fails reporting the achieved residual
    (meaning: raise `steps`).
    """
    if not np.isfinite(t) or t < 0.0:
        raise ValueError(f"t must be finite and >= 0, got {t!r}")
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    a = -1j * _dense_hamiltonian(state.n_max, params, frame)
    y = np.concatenate([state.amps_e, state.amps_g]).astype(np.complex128)
    h = t / steps
    dot = a.dot
    for _ in range(int(steps)):
        k1 = dot(y)
        k2 = dot(y + (0.5 * h) * k1)
        k3 = dot(y + (0.5 * h) * k2)
        k4 = dot(y + h * k3)
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    drift = abs(float(np.linalg.norm(y)) - 1.0)
    if norm_tol is not None and drift > norm_tol:
        raise ValueError(f"integrator norm drift {drift:.3e} exceeds requested "
                         f"tolerance {norm_tol:.3e}; increase steps")
    ne = state.n_max + 1
    return JointPureState(state.n_max, y[:ne], y[ne:])
