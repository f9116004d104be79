"""Command-line front end: figure reproductions and the statistics report.

Subcommands
-----------
fig1   thermal-field coherence decay/recurrence |rho_eg(gt)|^2 per temperature
fig2   coherent-field coherence decay |rho_eg(gt)|^2 per alpha
fig3   Ramsey interrogation: per-alpha coherence/population curves plus a
       crossing-time/contrast summary table for both crossing policies
fig4   phase-state |rho_eg|^2 against t/tau_d per r, with the stationary
       mean/std band
stats  dephasing statistics per r: closed-form mean/std, random-phase
       Monte-Carlo, and uniform-time sampling of the exact dynamics

All time columns are dimensionless gt, and every pipeline computes in gt
natively: changing --g-rad-s cannot move a dimensionless output by one bit.
Output is CSV with `# key=value` metadata lines; no timestamps, so a fixed
configuration reproduces the file byte for byte.

Exit codes: 0 success, 2 configuration error, 3 precondition/physics error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .analytics import (decoherence_time_gt, longtime_stats,
                        phase_state_coherence_gt, random_phase_mc,
                        thermal_series_gt, time_average_stats_gt)
from .initial_states import (CoherentSpec, PhaseStateSpec, ThermalSpec,
                             build_coherent, build_phase_state, build_thermal,
                             coherent_field_amps, coherent_truncation,
                             thermal_weights)
from .propagation import coherence_series_gt
from .ramsey import contrast_sweep_gt
from .states import AtomState, ModelParams

DAMPING_TIME_S = 0.130          # cavity energy lifetime used as sweep horizon
GT_MAX_LIMIT = 1.0e7
ALPHA_LIMIT = 6.0
R_LIMIT = 1_000_000
FIRST_GRID = (0.0, 4.0, 8001)   # gt search window for the first crossing
NEAR_HALFWIDTH = 10.0           # gt half-window around gt_ref, 4001 points
NEAR_POINTS = 4001


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs, after defaults/file/flag merging."""

    command: str
    g_rad_s: float = 2.0 * np.pi * 50e3
    frequency_ghz: float = 51.099
    angular_frequency: bool = False
    temps_kelvin: Tuple[float, ...] = (0.8,)
    alphas: Optional[Tuple[float, ...]] = None
    r_values: Optional[Tuple[int, ...]] = None
    gt_max: float = 40800.0
    points: int = 20001
    eps_tail: float = 1e-12
    seed: int = 20260817
    out: Optional[str] = None
    gt_ref: float = 70.0
    x_max: float = 100.0
    mc_samples: int = 1_000_000
    ta_samples: int = 10_000
    window_lo: float = 10.0
    window_hi: float = 1000.0


def damping_horizon_gt(g_rad_s: float) -> float:
    """Dimensionless horizon g * T_cavity; ~4.08e4 at the default coupling."""
    return g_rad_s * DAMPING_TIME_S


def make_params(cfg: RunConfig) -> ModelParams:
    """Interpret the configured frequency (ordinary by default) as omega."""
    f = cfg.frequency_ghz * 1e9
    omega = f if cfg.angular_frequency else 2.0 * np.pi * f
    return ModelParams(omega=omega, g=cfg.g_rad_s)


# --- configuration plumbing --------------------------------------------------

def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float_list(text: str) -> Tuple[float, ...]:
    items = [p for p in (s.strip() for s in text.split(",")) if p]
    if not items:
        raise ConfigError(f"expected a comma-separated list, got {text!r}")
    try:
        return tuple(float(p) for p in items)
    except ValueError as exc:
        raise ConfigError(f"bad list entry in {text!r}: {exc}") from exc


def _parse_int_list(text: str) -> Tuple[int, ...]:
    vals = _parse_float_list(text)
    out = []
    for v in vals:
        if int(v) != v:
            raise ConfigError(f"expected integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


_SCALARS = {
    "g_rad_s": float, "frequency_ghz": float, "gt_max": float,
    "eps_tail": float, "gt_ref": float, "x_max": float,
    "window_lo": float, "window_hi": float,
    "points": int, "seed": int, "mc_samples": int, "ta_samples": int,
}
_LISTS = {"temps_kelvin": _parse_float_list, "alphas": _parse_float_list,
          "r_values": _parse_int_list}


def parse_config_file(path: str) -> Dict[str, object]:
    """Flat key=value file; unknown keys are hard errors."""
    known = {f.name for f in fields(RunConfig)} - {"command"}
    out: Dict[str, object] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _LISTS:
                out[key] = _LISTS[key](value)
            elif key == "angular_frequency":
                out[key] = _parse_bool(value)
            elif key == "out":
                out[key] = value
            else:
                out[key] = _SCALARS[key](value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def _validate(cfg: RunConfig) -> RunConfig:
    if not np.isfinite(cfg.g_rad_s) or cfg.g_rad_s <= 0.0:
        raise ConfigError(f"g_rad_s must be > 0, got {cfg.g_rad_s!r}")
    if not np.isfinite(cfg.frequency_ghz) or cfg.frequency_ghz <= 0.0:
        raise ConfigError(f"frequency_ghz must be > 0, got {cfg.frequency_ghz!r}")
    if not (0.0 < cfg.gt_max <= GT_MAX_LIMIT):
        raise ConfigError(f"gt_max must lie in (0, {GT_MAX_LIMIT:g}], got {cfg.gt_max!r}")
    if cfg.points < 2:
        raise ConfigError(f"points must be >= 2, got {cfg.points!r}")
    if cfg.command == "fig1" and not cfg.temps_kelvin:
        raise ConfigError("fig1 needs a nonempty temps_kelvin list")
    if cfg.command in ("fig2", "fig3"):
        if not cfg.alphas:
            raise ConfigError(f"{cfg.command} needs an explicit alphas list")
        for a in cfg.alphas:
            if abs(a) > ALPHA_LIMIT:
                raise ConfigError(f"|alpha| capped at {ALPHA_LIMIT:g} "
                                  f"(truncation cost), got {a!r}")
    if cfg.command in ("fig4", "stats"):
        if not cfg.r_values:
            raise ConfigError(f"{cfg.command} needs an explicit r_values list")
        for r in cfg.r_values:
            if not 1 <= r <= R_LIMIT:
                raise ConfigError(f"r values must lie in [1, {R_LIMIT}], got {r!r}")
    if cfg.command == "fig4" and not (0.0 < cfg.x_max <= 1e6):
        raise ConfigError(f"x_max must lie in (0, 1e6], got {cfg.x_max!r}")
    if cfg.command == "fig3" and cfg.gt_ref < 0.0:
        raise ConfigError(f"gt_ref must be >= 0, got {cfg.gt_ref!r}")
    return cfg


def build_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < command-line flags."""
    merged: Dict[str, object] = {}
    if getattr(args, "config", None):
        merged.update(parse_config_file(args.config))
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        v = getattr(args, f.name, None)
        if v is not None:
            merged[f.name] = v
    try:
        cfg = RunConfig(command=args.command, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return _validate(cfg)


# --- CSV output ---------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, complex):
        return repr(complex(value))
    return str(value)


def write_csv(path: str, metadata: Dict[str, object], header: Sequence[str],
              rows) -> None:
    lines = [f"# {k}={_fmt(v)}" for k, v in metadata.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _echo(cfg: RunConfig, keys: Sequence[str]) -> Dict[str, object]:
    meta: Dict[str, object] = {"command": cfg.command, "version": __version__}
    for k in keys:
        v = getattr(cfg, k)
        if isinstance(v, tuple):
            v = ",".join(_fmt(x) for x in v)
        meta[k] = v
    return meta


def _out_path(cfg: RunConfig) -> str:
    return cfg.out if cfg.out else f"{cfg.command}.csv"


# --- subcommands ----------------------------------------------------------------

def cmd_fig1(cfg: RunConfig) -> int:
    """Thermal coherence curves via the closed-form series, spot-checked
    against brute-force ensemble propagation."""
    params = make_params(cfg)
    atom = AtomState.equal_superposition()
    cross = complex(atom.c_e * np.conj(atom.c_g))
    grid = np.linspace(0.0, cfg.gt_max, cfg.points)
    meta = _echo(cfg, ("g_rad_s", "frequency_ghz", "angular_frequency",
                       "temps_kelvin", "gt_max", "points", "eps_tail"))
    meta["omega_rad_s"] = params.omega
    meta["gt_damping_horizon"] = damping_horizon_gt(cfg.g_rad_s)
    header = ["gt"]
    cols = [grid]
    spots = np.unique(np.linspace(0, grid.size - 1, 5).astype(int))
    for temp in cfg.temps_kelvin:
        spec = ThermalSpec(temperature=temp, atom=atom, eps_tail=cfg.eps_tail)
        weights = thermal_weights(spec, params)
        curve = np.abs(thermal_series_gt(weights, cross, grid)) ** 2
        ens = build_thermal(spec, params)
        _, _, eg = coherence_series_gt(ens, grid[spots])
        mismatch = np.max(np.abs(eg * ens.weight_sum
                                 - thermal_series_gt(weights, cross, grid[spots])))
        if mismatch > 1e-10:
            raise ValueError(f"closed-form/ensemble cross-check failed at "
                             f"T={temp}: deviation {mismatch:.3e}")
        label = f"T{temp:g}K"
        meta[f"n_max_{label}"] = weights.size - 1
        meta[f"weight_deficit_{label}"] = ens.weight_deficit
        meta[f"spot_check_max_dev_{label}"] = float(mismatch)
        header.append(f"rho_eg_sq_{label}")
        cols.append(curve)
    write_csv(_out_path(cfg), meta, header, zip(*cols))
    return 0


def cmd_fig2(cfg: RunConfig) -> int:
    """Coherent-field coherence decay per alpha."""
    params = make_params(cfg)
    atom = AtomState.equal_superposition()
    grid = np.linspace(0.0, cfg.gt_max, cfg.points)
    meta = _echo(cfg, ("g_rad_s", "alphas", "gt_max", "points", "eps_tail"))
    meta["gt_damping_horizon"] = damping_horizon_gt(cfg.g_rad_s)
    header = ["gt"]
    cols = [grid]
    for alpha in cfg.alphas:
        state = build_coherent(CoherentSpec(alpha=alpha, atom=atom,
                                            eps_tail=cfg.eps_tail))
        _, _, eg = coherence_series_gt(state, grid)
        n_max = coherent_truncation(alpha, cfg.eps_tail)
        _, deficit = coherent_field_amps(alpha, n_max)
        label = f"a{alpha:g}"
        meta[f"n_max_{label}"] = n_max
        meta[f"tail_deficit_{label}"] = deficit
        header.append(f"rho_eg_sq_{label}")
        cols.append(np.abs(eg) ** 2)
    write_csv(_out_path(cfg), meta, header, zip(*cols))
    return 0


def cmd_fig3(cfg: RunConfig) -> int:
    """Ramsey curves per alpha plus crossing/contrast summary (both policies).

    The atom starts excited; the summary CSV lands next to the main one with
    an `_summary` suffix.
    """
    atom = AtomState.excited()
    grid = np.linspace(0.0, cfg.gt_max, cfg.points)
    meta = _echo(cfg, ("g_rad_s", "alphas", "gt_max", "points", "eps_tail",
                       "gt_ref"))
    header = ["gt"]
    cols = [grid]
    for alpha in cfg.alphas:
        state = build_coherent(CoherentSpec(alpha=alpha, atom=atom,
                                            eps_tail=cfg.eps_tail))
        ee, _, eg = coherence_series_gt(state, grid)
        label = f"a{alpha:g}"
        header.extend([f"abs_rho_ge_{label}", f"rho_ee_{label}"])
        cols.extend([np.abs(eg), ee])
    summary_rows: List[Tuple] = []
    first = contrast_sweep_gt(cfg.alphas, 0.5, *FIRST_GRID, which="first",
                              eps_tail=cfg.eps_tail)
    near = contrast_sweep_gt(cfg.alphas, 0.5,
                             max(0.0, cfg.gt_ref - NEAR_HALFWIDTH),
                             cfg.gt_ref + NEAR_HALFWIDTH, NEAR_POINTS,
                             which="nearest", gt_ref=cfg.gt_ref,
                             eps_tail=cfg.eps_tail)
    for (a, gt_a, c) in first:
        summary_rows.append((a, "first", gt_a, c))
    for (a, gt_a, c) in near:
        summary_rows.append((a, "nearest", gt_a, c))
    out = _out_path(cfg)
    write_csv(out, meta, header, zip(*cols))
    p = Path(out)
    summary_path = str(p.with_name(p.stem + "_summary" + (p.suffix or ".csv")))
    meta2 = dict(meta)
    meta2["summary_of"] = out
    write_csv(summary_path, meta2, ["alpha", "policy", "gt_alpha", "contrast"],
              summary_rows)
    return 0


def cmd_fig4(cfg: RunConfig) -> int:
    """Phase-state dephasing against t/tau_d per r, with the model band."""
    x = np.linspace(0.0, cfg.x_max, cfg.points)
    meta = _echo(cfg, ("g_rad_s", "r_values", "x_max", "points"))
    header = ["t_over_tau_d"]
    cols = [x]
    params = make_params(cfg)
    for r in cfg.r_values:
        gtau = decoherence_time_gt(r)
        st = longtime_stats(r, params.g)
        curve = np.abs(phase_state_coherence_gt(r, x * gtau)) ** 2
        label = f"r{r}"
        band = (x >= 2.0) & (x <= 100.0)
        if band.any():
            inside = ((curve[band] >= st.mean_abs_sq - st.std_abs_sq)
                      & (curve[band] <= st.mean_abs_sq + st.std_abs_sq))
            meta[f"band_occupancy_{label}"] = float(inside.mean())
        meta[f"gtau_d_{label}"] = gtau
        header.extend([f"rho_eg_sq_{label}", f"mean_{label}",
                       f"lo_{label}", f"hi_{label}"])
        cols.extend([curve,
                     np.full_like(x, st.mean_abs_sq),
                     np.full_like(x, st.mean_abs_sq - st.std_abs_sq),
                     np.full_like(x, st.mean_abs_sq + st.std_abs_sq)])
    write_csv(_out_path(cfg), meta, header, zip(*cols))
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    """Stationary statistics per r: closed form vs Monte-Carlo vs dynamics.

    Monte-Carlo uses seed + 2i, time sampling seed + 2i + 1 for the i-th r.
    A fixed seed reproduces the CSV byte for byte.
    """
    params = make_params(cfg)
    atom = AtomState.equal_superposition()
    meta = _echo(cfg, ("g_rad_s", "r_values", "seed", "mc_samples",
                       "ta_samples", "window_lo", "window_hi"))
    header = ["r", "gtau_d", "model_mean", "model_std",
              "mc_mean", "mc_std", "mc_stderr", "mc_mean_pull", "mc_std_rel_err",
              "ta_mean", "ta_std", "ta_mean_rel_err", "ta_std_rel_err"]
    rows = []
    report_lines = []
    for i, r in enumerate(cfg.r_values):
        st = longtime_stats(r, params.g)
        gtau = decoherence_time_gt(r)
        mc = random_phase_mc(r, cfg.mc_samples, cfg.seed + 2 * i)
        state = build_phase_state(PhaseStateSpec(r=r, atom=atom))
        ta_mean, ta_std = time_average_stats_gt(
            state, (cfg.window_lo * gtau, cfg.window_hi * gtau),
            cfg.ta_samples, cfg.seed + 2 * i + 1, gtau_d=gtau)
        rows.append((r, gtau, st.mean_abs_sq, st.std_abs_sq,
                     mc.mean, mc.std, mc.stderr,
                     (mc.mean - st.mean_abs_sq) / mc.stderr,
                     (mc.std - st.std_abs_sq) / st.std_abs_sq,
                     ta_mean, ta_std,
                     (ta_mean - st.mean_abs_sq) / st.mean_abs_sq,
                     (ta_std - st.std_abs_sq) / st.std_abs_sq))
        report_lines.append(
            f"r={r}: model mean={st.mean_abs_sq:.6e} std={st.std_abs_sq:.6e} | "
            f"mc mean={mc.mean:.6e} (pull {((mc.mean - st.mean_abs_sq) / mc.stderr):+.2f} se) "
            f"std={mc.std:.6e} ({((mc.std - st.std_abs_sq) / st.std_abs_sq):+.3%}) | "
            f"time-avg mean={ta_mean:.6e} ({((ta_mean - st.mean_abs_sq) / st.mean_abs_sq):+.3%}) "
            f"std={ta_std:.6e} ({((ta_std - st.std_abs_sq) / st.std_abs_sq):+.3%})")
    write_csv(_out_path(cfg), meta, header, rows)
    print("\n".join(report_lines))
    return 0


_COMMANDS = {"fig1": cmd_fig1, "fig2": cmd_fig2, "fig3": cmd_fig3,
             "fig4": cmd_fig4, "stats": cmd_stats}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key=value configuration file")
    sub.add_argument("--g-rad-s", dest="g_rad_s", type=float, default=None,
                     help="vacuum coupling rate in rad/s (default 2*pi*50 kHz)")
    sub.add_argument("--frequency-ghz", dest="frequency_ghz", type=float,
                     default=None,
                     help="shared atom/mode frequency in GHz (default 51.099)")
    sub.add_argument("--angular-frequency", dest="angular_frequency",
                     action=argparse.BooleanOptionalAction, default=None,
                     help="treat --frequency-ghz as angular (rad/s * 1e-9) "
                          "instead of ordinary frequency")
    sub.add_argument("--temps-kelvin", dest="temps_kelvin",
                     type=_parse_float_list, default=None,
                     help="comma-separated temperatures in kelvin")
    sub.add_argument("--alphas", type=_parse_float_list, default=None,
                     help="comma-separated coherent amplitudes")
    sub.add_argument("--r-values", dest="r_values", type=_parse_int_list,
                     default=None, help="comma-separated phase-state sizes")
    sub.add_argument("--gt-max", dest="gt_max", type=float, default=None,
                     help="end of the dimensionless time grid")
    sub.add_argument("--points", type=int, default=None,
                     help="number of grid points")
    sub.add_argument("--eps-tail", dest="eps_tail", type=float, default=None,
                     help="truncation tail bound for built states")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for every random stream")
    sub.add_argument("--out", default=None, help="output CSV path")
    sub.add_argument("--gt-ref", dest="gt_ref", type=float, default=None,
                     help="fig3: reference gt for the late-crossing policy")
    sub.add_argument("--x-max", dest="x_max", type=float, default=None,
                     help="fig4: end of the t/tau_d grid")
    sub.add_argument("--mc-samples", dest="mc_samples", type=int, default=None,
                     help="stats: random-phase Monte-Carlo sample count")
    sub.add_argument("--ta-samples", dest="ta_samples", type=int, default=None,
                     help="stats: uniform-time sample count")
    sub.add_argument("--window-lo", dest="window_lo", type=float, default=None,
                     help="stats: window start in units of tau_d (>= 10)")
    sub.add_argument("--window-hi", dest="window_hi", type=float, default=None,
                     help="stats: window end in units of tau_d")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcsim",
        description="Exact resonant atom-mode decoherence sweeps and statistics")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sub = subs.add_parser(name, help=fn.__doc__.splitlines()[0].lower())
        _add_common(sub)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code
    try:
        cfg = build_config(args)
        return _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
