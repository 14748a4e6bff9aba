"""Command-line interface.

Subcommands: simulate | sweep | fit-d | fit-rise | convert, with global
flags --config PATH, --out DIR, --quiet.

Exit codes: 0 success, 2 input/config error, 3 numerical failure,
4 non-identifiable fit.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import kinetics
from .config import RunConfig, load_config
from .dataio import (read_measured_csv, write_fit_report, write_table)
from .domain import DotGeometry, MaterialParams
from .errors import (ConfigError, FitDiverged, GeometryMismatch,
                     GridTooCoarse, InvariantViolation, MissingGFactor,
                     NotIdentifiable, NumericalBlowup, UnphysicalShift)
from .kinetics import (fit_diffusion_coefficient, fit_exponential_rise,
                       simulate_decay_curve)
from .observables import (exciton_zeeman_splitting, ohs_max,
                          overhauser_field, polarization_degree)
from .solver import (BoundaryMode, Grid, SolverConfig, _iterate_dark,
                     build_grid, dot_average, simulate_pump)
from .units import MU_B_UEV_PER_T, diffusion_cm2s_to_nm2s

_DEFAULT_D_BOUNDS = (1e-16, 1e-11)


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _require_config(args) -> RunConfig:
    if not args.config:
        raise ConfigError("this command requires --config PATH")
    return load_config(args.config)


def _out_dir(args, rc: RunConfig | None) -> str:
    out = args.out or (rc.out_dir if rc is not None else ".")
    os.makedirs(out, exist_ok=True)
    return out


def _grid_for(rc: RunConfig) -> Grid:
    return build_grid(rc.geometry, rc.dr_nm, rc.dz_nm, rc.extent_factor)


def _require(rc_value, section: str, key: str):
    if rc_value is None:
        raise ConfigError(f"missing required key '{key}' in [{section}]")
    return rc_value


def cmd_simulate(args) -> int:
    """Run the pump/dark preset at a single D; write decay.csv and
    field_snapshots.csv."""
    rc = _require_config(args)
    d_cm2s = _require(rc.d_cm2s, "solver", "d_cm2s")
    t_dark = _require(rc.t_dark_s, "protocol", "t_dark_s")
    out = _out_dir(args, rc)
    grid = _grid_for(rc)
    cfg = SolverConfig(d_qd=diffusion_cm2s_to_nm2s(d_cm2s),
                       t1_uniform=rc.t1_s, dt=rc.dt_s)
    field = simulate_pump(rc.geometry, cfg, rc.t_pump_s, grid)

    ts: list[float] = []
    ps: list[float] = []
    pending = sorted(rc.snapshot_times_s)
    snap_cols: dict[str, list[float]] = {"t_s": [], "r_nm": [], "z_nm": [],
                                         "s": []}
    for t, f in _iterate_dark(field, cfg, t_dark, rc.sample_every_s,
                              rc.geometry):
        ts.append(t)
        ps.append(dot_average(f, rc.geometry))
        while pending and t >= pending[0] - 1e-9:
            pending.pop(0)
            rr, zz = np.meshgrid(grid.r_centers, grid.z_centers,
                                 indexing="ij")
            snap_cols["t_s"].extend([t] * rr.size)
            snap_cols["r_nm"].extend(rr.ravel())
            snap_cols["z_nm"].extend(zz.ravel())
            snap_cols["s"].extend(f.values.ravel())

    p = np.array(ps)
    if p[0] != 0:
        p = p / p[0]
    columns: dict[str, np.ndarray] = {"t_s": np.array(ts), "dot_average": p}
    have_g = (rc.material.g_e_abs is not None
              and rc.material.g_h_abs is not None)
    if have_g:
        zeeman = [exciton_zeeman_splitting(
            rc.material, overhauser_field(pi, rc.material), rc.pump_helicity)
            for pi in p]
        columns["zeeman_uev"] = np.array(zeeman)
    meta = {"preset": rc.preset, "d_cm2s": repr(d_cm2s),
            "t_pump_s": repr(rc.t_pump_s), "t_dark_s": repr(t_dark),
            "helicity": rc.pump_helicity.value}
    decay_path = os.path.join(out, "decay.csv")
    write_table(decay_path, columns, meta)
    snap_path = os.path.join(out, "field_snapshots.csv")
    write_table(snap_path, snap_cols, {"d_cm2s": repr(d_cm2s)})
    _say(args, f"wrote {decay_path}")
    _say(args, f"wrote {snap_path}")
    return 0


def cmd_sweep(args) -> int:
    """Run the preset for each D in the list; write sweep.csv in long
    format (d_cm2s, t_s, p)."""
    rc = _require_config(args)
    if rc.d_list_cm2s is not None:
        d_values = rc.d_list_cm2s
    elif rc.d_cm2s is not None:
        d_values = (rc.d_cm2s,)
    else:
        raise ConfigError("missing required key 'd_list_cm2s' in [solver]")
    t_dark = _require(rc.t_dark_s, "protocol", "t_dark_s")
    out = _out_dir(args, rc)
    grid = _grid_for(rc)
    cols: dict[str, list[float]] = {"d_cm2s": [], "t_s": [], "p": []}
    for d in d_values:
        series = simulate_decay_curve(d, rc.t_pump_s, t_dark,
                                      rc.sample_every_s, rc.geometry, grid,
                                      dt=rc.dt_s, t1_uniform=rc.t1_s)
        cols["d_cm2s"].extend([d] * len(series))
        cols["t_s"].extend(series.t)
        cols["p"].extend(series.y)
    path = os.path.join(out, "sweep.csv")
    write_table(path, cols, {"preset": rc.preset,
                             "t_pump_s": repr(rc.t_pump_s)})
    _say(args, f"wrote {path}")
    return 0


def cmd_fit_d(args) -> int:
    """Fit the diffusion coefficient to a measured CSV; write fit.json
    and fit_overlay.csv, print the fitted D."""
    rc = _require_config(args)
    measured = read_measured_csv(args.measured)
    d_bounds = rc.d_bounds_cm2s or _DEFAULT_D_BOUNDS
    out = _out_dir(args, rc)
    grid = _grid_for(rc)
    fit = fit_diffusion_coefficient(measured, rc.t_pump_s, rc.geometry, grid,
                                    d_bounds, dt=rc.dt_s)
    report_path = os.path.join(out, "fit.json")
    write_fit_report(report_path, d_qd_cm2s=fit.d_qd, scale_uev=fit.scale,
                     offset_uev=fit.offset, sse=fit.sse,
                     warnings=fit.warnings, d_grid_cm2s=fit.d_grid)
    model = (fit.offset + fit.scale
             * kinetics._decay_samples(fit.d_qd, rc.t_pump_s,
                                       tuple(float(x) for x in measured.t),
                                       rc.geometry, grid, rc.dt_s,
                                       BoundaryMode.DIRICHLET_ZERO))
    overlay_path = os.path.join(out, "fit_overlay.csv")
    write_table(overlay_path, {"t_s": measured.t, "measured": measured.y,
                               "model": model},
                {"d_qd_cm2s": repr(fit.d_qd)})
    print(f"d_qd_cm2s = {fit.d_qd:.6g}")
    for warning in fit.warnings:
        _say(args, f"warning: {warning}")
    _say(args, f"wrote {report_path}")
    _say(args, f"wrote {overlay_path}")
    return 0


def cmd_fit_rise(args) -> int:
    """Fit offset + amplitude*(1 - exp(-t/tau)) to a measured CSV."""
    measured = read_measured_csv(args.measured)
    fit = fit_exponential_rise(measured)
    out = _out_dir(args, None)
    model = (fit.offset
             + fit.amplitude * (1.0 - np.exp(-measured.t / fit.tau)))
    overlay_path = os.path.join(out, "rise_overlay.csv")
    write_table(overlay_path, {"t_s": measured.t, "measured": measured.y,
                               "model": model}, {"tau_s": repr(fit.tau)})
    print(f"amplitude = {fit.amplitude:.6g}")
    print(f"tau_s = {fit.tau:.6g}")
    print(f"offset = {fit.offset:.6g}")
    print(f"residual_rms = {fit.residual_rms:.6g}")
    _say(args, f"wrote {overlay_path}")
    return 0


def cmd_convert(args) -> int:
    """Convert between OHS (µeV), polarization degree, and Overhauser
    field (T)."""
    material = (load_config(args.config).material if args.config
                else MaterialParams())
    full = ohs_max(material)
    if args.kind == "ohs_uev":
        degree = polarization_degree(args.value, material)
        print(f"polarization_degree = {degree:.6g}")
        if material.g_e_abs is not None:
            print(f"overhauser_field_t = "
                  f"{overhauser_field(degree, material):.6g}")
    elif args.kind == "degree":
        if abs(args.value) > 1:
            raise UnphysicalShift(
                f"polarization degree {args.value} outside [-1, 1]")
        print(f"ohs_uev = {args.value * full:.6g}")
        if material.g_e_abs is not None:
            print(f"overhauser_field_t = "
                  f"{overhauser_field(args.value, material):.6g}")
    else:  # field_t
        if material.g_e_abs is None:
            raise MissingGFactor(
                "converting a field requires g_e_abs (set it in [material])")
        degree = (args.value * material.g_e_abs * MU_B_UEV_PER_T) / full
        if abs(degree) > 1:
            raise UnphysicalShift(
                f"field {args.value} T exceeds the fully polarized value")
        print(f"polarization_degree = {degree:.6g}")
        print(f"ohs_uev = {degree * full:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="run configuration file")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (overrides [output] dir)")
    common.add_argument("--quiet", action="store_true",
                        help="suppress informational output")

    parser = argparse.ArgumentParser(
        prog="spindiff",
        description="Nuclear-spin diffusion out of an optically pumped "
                    "quantum dot: simulation and fitting tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common],
                       help="run the pump/dark preset at a single D")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common],
                       help="run the preset for a list of D values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit-d", parents=[common],
                       help="fit the diffusion coefficient to measured data")
    p.add_argument("measured", metavar="CSV", help="measured decay data")
    p.set_defaults(func=cmd_fit_d)

    p = sub.add_parser("fit-rise", parents=[common],
                       help="fit an exponential rise to measured data")
    p.add_argument("measured", metavar="CSV", help="measured rise data")
    p.set_defaults(func=cmd_fit_rise)

    p = sub.add_parser("convert", parents=[common],
                       help="convert between OHS, polarization degree, "
                            "and Overhauser field")
    p.add_argument("value", type=float, help="input value")
    p.add_argument("--kind", choices=["ohs_uev", "degree", "field_t"],
                   default="ohs_uev",
                   help="what the input value is (default: ohs_uev)")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MissingGFactor, UnphysicalShift, GeometryMismatch,
            GridTooCoarse, InvariantViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotIdentifiable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (NumericalBlowup, FitDiverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
