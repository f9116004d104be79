"""Closed-form observables and statistical baselines.

The flat phase state over n = 0..r dephases into a stationary statistical
regime.  Its atom coherence admits the exact expression (atom prepared in
the balanced superposition)

    rho_eg(t) = cos(g sqrt(r+1) t) exp(1j g sqrt(r) t) / (2 (r+1))
              + sum_{n=0}^{r-1} exp(-1j g (sqrt(n+1) - sqrt(n)) t) / (2 (r+1))

whose slowest phasor sets the dephasing clock

    tau_d = 2 pi / (g (sqrt(r) - sqrt(r-1)))  ~=  4 pi sqrt(r) / g .

Treating the phasor arguments as independent uniforms gives the long-time
statistics of |rho_eg|^2:

    mean = (r + 1/2) / (2 (r+1))^2
    std  = sqrt(r^2 + 1/8) / (2 (r+1))^2

random_phase_mc samples that model directly (counter-based generator, so a
fixed seed gives one reproducible stream that could be split across workers);
time_average_stats samples the actual dynamics at uniform random times.  The
two attack the same quantity through unrelated routes on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np

from .initial_states import ThermalSpec, thermal_weights
from .propagation import coherence_series_gt
from .states import JointPureState, ModelParams, WeightedEnsemble

_MC_CHUNK = 65_536  # frozen: resizing would reshuffle the sample stream


@dataclass(frozen=True)
class LongTimeStats:
    """Stationary-regime statistics of |rho_eg|^2 and the dephasing time."""

    mean_abs_sq: float
    std_abs_sq: float
    tau_d: float

    def __post_init__(self):
        for name in ("mean_abs_sq", "std_abs_sq", "tau_d"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")


class McStats(NamedTuple):
    mean: float
    std: float
    stderr: float


def _check_r(r: int, minimum: int = 1) -> int:
    if int(r) != r or r < minimum:
        raise ValueError(f"r must be an integer >= {minimum}, got {r!r}")
    return int(r)


def phase_state_coherence_gt(r: int, gt: Union[float, np.ndarray]):
    """rho_eg of the evolved phase state at dimensionless angle gt.

    Vectorized over gt; one sincos per summand, nothing clever.  Scalar in,
    scalar out.
    """
    r = _check_r(r, minimum=0)
    gts = np.asarray(gt, dtype=np.float64)
    scalar = gts.ndim == 0
    gts = np.atleast_1d(gts)
    if not np.all(np.isfinite(gts)) or np.any(gts < 0.0):
        raise ValueError("gt must be finite and >= 0")
    pref = 1.0 / (2.0 * (r + 1.0))
    n = np.arange(r, dtype=np.float64)
    freqs = np.sqrt(n + 1.0) - np.sqrt(n)
    out = np.empty(gts.size, dtype=np.complex128)
    step = max(1, 1_000_000 // max(r, 1))
    for lo in range(0, gts.size, step):
        hi = min(lo + step, gts.size)
        block = gts[lo:hi, None] * freqs[None, :]
        out[lo:hi] = np.exp(-1j * block).sum(axis=1)
    out += np.cos(np.sqrt(r + 1.0) * gts) * np.exp(1j * np.sqrt(float(r)) * gts)
    out *= pref
    return complex(out[0]) if scalar else out


def phase_state_coherence(r: int, g: float, t: Union[float, np.ndarray]):
    """rho_eg(t) for the phase state of index r (coupling g rad/s, t seconds)."""
    if not np.isfinite(g) or g <= 0.0:
        raise ValueError(f"g must be finite and > 0, got {g!r}")
    return phase_state_coherence_gt(r, np.asarray(t, dtype=np.float64) * g)


def decoherence_time_gt(r: int) -> float:
    """Dephasing time in gt units: 2 pi / (sqrt(r) - sqrt(r-1)).

    The difference is evaluated literally (not rationalized) so the product
    tau * (sqrt(r) - sqrt(r-1)) round-trips to 2 pi at machine precision.
    """
    r = _check_r(r)
    return 2.0 * np.pi / (np.sqrt(float(r)) - np.sqrt(float(r - 1)))


def decoherence_time(r: int, g: float) -> float:
    """Dephasing time in seconds for the phase state of index r >= 1."""
    if not np.isfinite(g) or g <= 0.0:
        raise ValueError(f"g must be finite and > 0, got {g!r}")
    return decoherence_time_gt(r) / g


def longtime_stats(r: int, g: float) -> LongTimeStats:
    """Random-phase-model mean/std of |rho_eg|^2 plus tau_d, for r >= 1."""
    r = _check_r(r)
    pref2 = 1.0 / (2.0 * (r + 1.0)) ** 2
    return LongTimeStats(mean_abs_sq=pref2 * (r + 0.5),
                         std_abs_sq=pref2 * np.sqrt(r * r + 0.125),
                         tau_d=decoherence_time(r, g))


def random_phase_mc(r: int, n_samples: int, seed: int) -> McStats:
    """Monte-Carlo estimate of the long-time |rho_eg|^2 statistics.

    Each sample draws r independent uniform phases for the summation terms
    and one independent uniform argument for the cosine term, every term of
    magnitude 1/(2(r+1)).  Philox keeps the stream reproducible and
    splittable for a fixed seed.
    """
    r = _check_r(r)
    if int(n_samples) != n_samples or n_samples < 1_000:
        raise ValueError(f"n_samples must be an integer >= 1000, got {n_samples!r}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    pref = 1.0 / (2.0 * (r + 1.0))
    total = 0.0
    total_sq = 0.0
    done = 0
    n_samples = int(n_samples)
    while done < n_samples:
        k = min(_MC_CHUNK, n_samples - done)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(k, r))
        cos_arg = rng.uniform(0.0, 2.0 * np.pi, size=k)
        z = np.exp(1j * phases).sum(axis=1) + np.cos(cos_arg)
        w = pref * pref * np.abs(z) ** 2
        total += float(w.sum())
        total_sq += float((w * w).sum())
        done += k
    mean = total / n_samples
    var = max(0.0, (total_sq - n_samples * mean * mean) / (n_samples - 1))
    std = float(np.sqrt(var))
    return McStats(mean=float(mean), std=std, stderr=std / float(np.sqrt(n_samples)))


def thermal_series_gt(weights: np.ndarray, atom_cross: complex,
                      gt: Union[float, np.ndarray]):
    """Atom coherence of a Fock-diagonal mixture, dimensionless time.

    weights[n] multiplies cos(sqrt(n+1) gt) cos(sqrt(n) gt); atom_cross is
    c_e * conj(c_g).  Unrenormalized, mirroring the kept thermal weights.
    """
    gts = np.asarray(gt, dtype=np.float64)
    scalar = gts.ndim == 0
    gts = np.atleast_1d(gts)
    acc = np.zeros(gts.size, dtype=np.float64)
    for n, w in enumerate(np.asarray(weights, dtype=np.float64)):
        acc += w * np.cos(np.sqrt(n + 1.0) * gts) * np.cos(np.sqrt(float(n)) * gts)
    out = atom_cross * acc
    return complex(out[0]) if scalar else out


def thermal_coherence_series(spec: ThermalSpec, params: ModelParams,
                             t: Union[float, np.ndarray]):
    """rho_eg(t) of the truncated thermal preparation, t in seconds.

    Closed form: c_e conj(c_g) sum_n p_n cos(g sqrt(n+1) t) cos(g sqrt(n) t)
    over the kept weights.  At t = 0 it equals c_e conj(c_g) times the kept
    mass (the deficit is not renormalized away here).
    """
    weights = thermal_weights(spec, params)
    cross = complex(spec.atom.c_e * np.conj(spec.atom.c_g))
    return thermal_series_gt(weights, cross, np.asarray(t, dtype=np.float64) * params.g)


def time_average_stats_gt(state0: Union[JointPureState, WeightedEnsemble],
                          gt_window: Tuple[float, float], n_samples: int,
                          seed: int, gtau_d: float | None = None
                          ) -> Tuple[float, float]:
    """Mean and std of |rho_eg|^2 at uniform random times in a gt window."""
    lo, hi = float(gt_window[0]), float(gt_window[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or not 0.0 <= lo < hi:
        raise ValueError(f"window must satisfy 0 <= lo < hi, got {gt_window!r}")
    if gtau_d is not None and lo < 10.0 * gtau_d:
        raise ValueError(f"window start {lo!r} below 10 * tau_d = {float(10 * gtau_d)!r}; "
                         "the stationary-regime statistics need a later window")
    if int(n_samples) != n_samples or n_samples < 1_000:
        raise ValueError(f"n_samples must be an integer >= 1000, got {n_samples!r}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    gts = np.sort(rng.uniform(lo, hi, size=int(n_samples)))
    _, _, eg = coherence_series_gt(state0, gts)
    vals = np.abs(eg) ** 2
    return float(vals.mean()), float(vals.std(ddof=1))


def time_average_stats(state0: Union[JointPureState, WeightedEnsemble],
                       params: ModelParams, window: Tuple[float, float],
                       n_samples: int, seed: int,
                       tau_d: float | None = None) -> Tuple[float, float]:
    """Same sampling with the window in seconds (tau_d gates the window start)."""
    gtau = None if tau_d is None else params.g * tau_d
    return time_average_stats_gt(state0,
                                 (params.g * window[0], params.g * window[1]),
                                 n_samples, seed, gtau_d=gtau)
