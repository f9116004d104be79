"""Ramsey-style interrogation built on the exact propagator.

The workflow mirrors the bench protocol: hold the joint system until the
excited population crosses a target (usually 1/2), read the remaining atom
coherence there, then trace the fringe P_g(phi) a second pi/2 pulse of phase
phi would produce:

    P_g(phi) = (1/2) * (1 + Re(2 rho_ge(t_alpha) exp(1j phi)))

The fringe contrast 2 |rho_ge(t_alpha)| measures how much which-path
information the field has soaked up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .initial_states import CoherentSpec, build_coherent
from .propagation import coherence_series_gt
from .states import AtomState, JointPureState, ModelParams, WeightedEnsemble

RESIDUAL_TOL = 1e-10
_MAX_BISECT = 40


class NoCrossingError(ValueError):
    """The population never meets the target on the search grid."""


@dataclass(frozen=True)
class CrossingQuery:
    """Where and how to look for a population crossing.

    grid is (t_lo, t_hi, n_points) in seconds.  which selects the first
    bracketed root or the one nearest t_ref (required, and inside the grid,
    for which='nearest').
    """

    target: float = 0.5
    which: str = "first"
    t_ref: Optional[float] = None
    grid: Tuple[float, float, int] = (0.0, 1.0, 1000)

    def __post_init__(self):
        if not (0.0 < self.target < 1.0):
            raise ValueError(f"target population must lie in (0, 1), got {self.target!r}")
        if self.which not in ("first", "nearest"):
            raise ValueError(f"which must be 'first' or 'nearest', got {self.which!r}")
        t_lo, t_hi, n = self.grid
        if not (np.isfinite(t_lo) and np.isfinite(t_hi)) or not 0.0 <= t_lo < t_hi:
            raise ValueError(f"grid must satisfy 0 <= t_lo < t_hi, got {self.grid!r}")
        if int(n) != n or n < 10:
            raise ValueError(f"grid needs at least 10 points, got {n!r}")
        if self.which == "nearest":
            if self.t_ref is None:
                raise ValueError("which='nearest' requires t_ref")
            if not t_lo <= self.t_ref <= t_hi:
                raise ValueError(f"t_ref {self.t_ref!r} outside grid [{t_lo}, {t_hi}]")


def _rho_ee_gt(state0, gt: float) -> float:
    ee, _, _ = coherence_series_gt(state0, np.array([gt]))
    return float(ee[0])


def find_crossing_gt(state0: Union[JointPureState, WeightedEnsemble],
                     target: float, gt_lo: float, gt_hi: float, n_points: int,
                     which: str = "first", gt_ref: float | None = None) -> float:
    """Dimensionless-time crossing search: bracket on a grid, then bisect.

    Bisection refines until |rho_ee - target| < 1e-10 (at most 40 halvings,
    plenty for any grid an experiment sweep would use).
    """
    grid = np.linspace(gt_lo, gt_hi, int(n_points))
    ee, _, _ = coherence_series_gt(state0, grid)
    f = ee - target
    hits = np.nonzero(np.abs(f) < RESIDUAL_TOL)[0]
    idx = np.nonzero(f[:-1] * f[1:] < 0.0)[0]
    if hits.size == 0 and idx.size == 0:
        raise NoCrossingError(
            f"population never reaches {target} on the grid "
            f"(range [{ee.min():.6f}, {ee.max():.6f}])")
    # candidate roots: exact grid hits and bracket midpoints
    cands: List[Tuple[float, Tuple[float, float] | None]] = []
    for i in hits:
        cands.append((grid[i], None))
    for i in idx:
        cands.append((0.5 * (grid[i] + grid[i + 1]), (grid[i], grid[i + 1])))
    cands.sort(key=lambda c: c[0])
    if which == "first":
        pos, bracket = cands[0]
    elif which == "nearest":
        if gt_ref is None:
            raise ValueError("which='nearest' requires gt_ref")
        pos, bracket = min(cands, key=lambda c: abs(c[0] - gt_ref))
    else:
        raise ValueError(f"which must be 'first' or 'nearest', got {which!r}")
    if bracket is None:
        return float(pos)
    a, b = bracket
    fa = _rho_ee_gt(state0, a) - target
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (a + b)
        fm = _rho_ee_gt(state0, mid) - target
        if abs(fm) < RESIDUAL_TOL:
            return float(mid)
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    raise NoCrossingError(
        f"bisection stalled: residual {fm:.3e} after {_MAX_BISECT} iterations; "
        "refine the search grid")


def find_crossing(state0: Union[JointPureState, WeightedEnsemble],
                  params: ModelParams, query: CrossingQuery) -> float:
    """Crossing time in seconds for the given query."""
    t_lo, t_hi, n = query.grid
    gt_ref = None if query.t_ref is None else params.g * query.t_ref
    gt = find_crossing_gt(state0, query.target, params.g * t_lo, params.g * t_hi,
                          n, which=query.which, gt_ref=gt_ref)
    return gt / params.g


def ramsey_fringe(rho_ge: complex, phi_grid: Sequence[float]) -> np.ndarray:
    """Ground-state detection probability versus second-pulse phase."""
    if abs(rho_ge) > 0.5 + 1e-12:
        raise ValueError(f"|rho_ge| = {abs(rho_ge)!r} exceeds 1/2; not a physical "
                         "atom coherence")
    phi = np.asarray(phi_grid, dtype=np.float64)
    return 0.5 * (1.0 + np.real(2.0 * rho_ge * np.exp(1j * phi)))


@dataclass(frozen=True, eq=False)
class RamseyScan:
    """One interrogation: crossing time, coherence there, and the fringe.

    The phase grid is anchored so it contains the fringe extrema; the span
    max(p_g) - min(p_g) then equals 2 |rho_ge| (checked at construction).
    """

    t_alpha: float
    rho_ge: complex
    phi_grid: np.ndarray
    p_g: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi_grid, dtype=np.float64, copy=True)
        pg = np.array(self.p_g, dtype=np.float64, copy=True)
        if phi.shape != pg.shape or phi.size < 2:
            raise ValueError("phi_grid and p_g must be matching arrays of >= 2 points")
        if np.any(pg < -1e-12) or np.any(pg > 1.0 + 1e-12):
            raise ValueError("fringe probabilities leave [0, 1]")
        span = float(pg.max() - pg.min())
        if abs(span - 2.0 * abs(self.rho_ge)) > 1e-10:
            raise ValueError(f"fringe span {span!r} does not equal 2|rho_ge| "
                             f"= {2 * abs(self.rho_ge)!r}")
        phi.setflags(write=False)
        pg.setflags(write=False)
        object.__setattr__(self, "phi_grid", phi)
        object.__setattr__(self, "p_g", pg)

    @property
    def contrast(self) -> float:
        return 2.0 * abs(self.rho_ge)


def _scan_gt(state0, target: float, gt_lo: float, gt_hi: float, n_points: int,
             which: str, gt_ref: float | None, n_phi: int) -> tuple[float, complex, np.ndarray, np.ndarray]:
    gt_alpha = find_crossing_gt(state0, target, gt_lo, gt_hi, n_points,
                                which=which, gt_ref=gt_ref)
    _, _, eg = coherence_series_gt(state0, np.array([gt_alpha]))
    rho_ge = complex(np.conj(eg[0]))
    anchor = -np.angle(rho_ge) if abs(rho_ge) > 0.0 else 0.0
    if n_phi < 2 or n_phi % 2:
        raise ValueError(f"n_phi must be even and >= 2, got {n_phi!r}")
    phi = anchor + np.arange(n_phi) * (2.0 * np.pi / n_phi)
    return gt_alpha, rho_ge, phi, ramsey_fringe(rho_ge, phi)


def scan_at_crossing(state0: Union[JointPureState, WeightedEnsemble],
                     params: ModelParams, query: CrossingQuery,
                     n_phi: int = 64) -> RamseyScan:
    """Locate the crossing and trace the fringe there (t_alpha in seconds)."""
    t_lo, t_hi, n = query.grid
    gt_ref = None if query.t_ref is None else params.g * query.t_ref
    gt_alpha, rho_ge, phi, pg = _scan_gt(state0, query.target, params.g * t_lo,
                                         params.g * t_hi, n, query.which,
                                         gt_ref, n_phi)
    return RamseyScan(t_alpha=gt_alpha / params.g, rho_ge=rho_ge,
                      phi_grid=phi, p_g=pg)


def contrast_sweep_gt(alphas: Sequence[float], target: float, gt_lo: float,
                      gt_hi: float, n_points: int, which: str = "first",
                      gt_ref: float | None = None, eps_tail: float = 1e-12,
                      atom: AtomState | None = None
                      ) -> List[Tuple[float, float, float]]:
    """(alpha, gt_alpha, contrast) per coherent amplitude, dimensionless time.

    The atom starts excited unless another preparation is passed.
    """
    if len(alphas) == 0:
        raise ValueError("alphas must be nonempty")
    atom = AtomState.excited() if atom is None else atom
    out = []
    for alpha in alphas:
        state0 = build_coherent(CoherentSpec(alpha=alpha, atom=atom,
                                             eps_tail=eps_tail))
        gt_alpha, rho_ge, _, _ = _scan_gt(state0, target, gt_lo, gt_hi,
                                          n_points, which, gt_ref, n_phi=2)
        out.append((float(alpha), float(gt_alpha), 2.0 * abs(rho_ge)))
    return out


def contrast_vs_alpha(alphas: Sequence[float], params: ModelParams,
                      query: CrossingQuery, eps_tail: float = 1e-12,
                      atom: AtomState | None = None
                      ) -> List[Tuple[float, float, float]]:
    """(alpha, t_alpha seconds, contrast) for each alpha under one query."""
    t_lo, t_hi, n = query.grid
    gt_ref = None if query.t_ref is None else params.g * query.t_ref
    rows = contrast_sweep_gt(alphas, query.target, params.g * t_lo,
                             params.g * t_hi, n, which=query.which,
                             gt_ref=gt_ref, eps_tail=eps_tail, atom=atom)
    return [(a, gt / params.g, c) for a, gt, c in rows]
