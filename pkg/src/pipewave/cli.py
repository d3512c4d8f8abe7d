"""Command-line surface tying the experiments together.

Subcommands: periodic, ibvp, stability, convergence, validate.  Exit codes:
0 success, 1 usage or configuration error, 2 mathematically meaningful
failure (regime violation, non-convergence).  All errors also appear on
stdout as structured lines `ERROR <code>: <message>`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fieldio
from .config import SimulationConfig, default_config, parse_config
from .errors import (CFLError, ConfigError, ConvergenceError, DomainError,
                     InsufficientDataError, PipewaveError, RegimeError, SonicError)
from .friction import validate_beta
from .ibvp import check_compatibility, run_ibvp
from .periodic import solve_periodic
from .stability import (closure_residual, equivalent_boundary_data,
                        run_stability_experiment)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="pipewave",
                     description="Time-periodic subsonic pipe flow experiments")
    sub = parser.add_subparsers(dest="command")
    for name, help_ in [
        ("periodic", "solve for the time-periodic field"),
        ("ibvp", "march the nonlinear IBVP from the periodic initial slice"),
        ("stability", "perturb the periodic orbit and fit the decay rate"),
        ("convergence", "closure-residual refinement ladder"),
        ("validate", "check friction, boundary, and compatibility data only"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, default=None, help="config file path")
        sp.add_argument("--out", type=Path, default=None, help="output directory override")
        sp.add_argument("--grid", type=str, default=None, help="NTxNX override, e.g. 128x128")
        sp.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _load_config(args) -> SimulationConfig:
    if args.config is None:
        cfg = default_config()
    else:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as err:
            raise ConfigError([f"cannot read config {args.config}: {err}"]) from err
        cfg = parse_config(text)
    if args.grid is not None:
        try:
            nt, nx = (int(v) for v in args.grid.lower().split("x"))
        except ValueError:
            raise UsageError(f"--grid expects NTxNX, got {args.grid!r}") from None
        if nt < 16 or nx < 16:
            raise ConfigError([f"--grid: both sizes must be at least 16 (got {args.grid})"])
        cfg.nt, cfg.nx = nt, nx
    if args.out is not None:
        cfg.out_dir = str(args.out)
    return cfg


def _outdir(cfg) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(quiet, *lines):
    if not quiet:
        for line in lines:
            print(line)


def _cmd_validate(cfg: SimulationConfig, quiet: bool) -> int:
    beta_rep = validate_beta(cfg.friction, cfg.gas)
    print(f"beta: {'PASS' if beta_rep.passed else 'FAIL'} "
          f"(C1 sample {beta_rep.c1_norm:.6g} vs claim {beta_rep.c0_claimed:.6g}, "
          f"periodicity residual {beta_rep.periodicity_residual:.3g})")
    c0 = cfg.boundary.c0_norm()
    c1 = cfg.boundary.c1_norm()
    print(f"boundary: amplitude {cfg.boundary.amplitude:.6g}, "
          f"sampled C0 {c0:.6g}, sampled C1 {c1:.6g}")
    zero_init = np.zeros((cfg.nx, 2))
    comp = check_compatibility(zero_init, cfg.boundary, cfg.friction, cfg.gas, cfg.mode)
    print(f"compatibility of zero initial data (informational): "
          f"{'PASS' if comp.passed else 'FAIL'} order0={comp.order0} order1={comp.order1}")
    if not beta_rep.passed:
        print("ERROR config: friction coefficient failed validation")
        return 1
    return 0


def _cmd_periodic(cfg: SimulationConfig, quiet: bool) -> int:
    field, report = solve_periodic(cfg.boundary, cfg.friction, cfg.gas, cfg.grid,
                                   cfg.tol_fp, cfg.max_iter)
    out = _outdir(cfg)
    fieldio.write_field_csv(field, out / "phiP.csv", cfg.gas)
    fieldio.write_iterations_csv(report, out / "iterations.csv")
    fieldio.write_summary([
        ("iterations", report.iterations),
        ("converged", report.converged),
        ("c0_norm", report.c0_norm),
        ("c1_norm_fd", report.c1_norm_fd),
        ("nu_max", report.nu_max),
        ("T0", report.T0),
        ("final_sup_diff", report.sup_diffs[-1]),
    ], out / "summary.txt")
    _emit(quiet,
          f"converged in {report.iterations} sweeps "
          f"(final diff {report.sup_diffs[-1]:.3e}, tol {report.tol_fp:g})",
          f"c0 norm {report.c0_norm:.6e}, c1 estimate {report.c1_norm_fd:.6e}, "
          f"T0 {report.T0:.6f}",
          f"wrote {out / 'phiP.csv'}")
    return 0


def _cmd_ibvp(cfg: SimulationConfig, quiet: bool) -> int:
    field, report = solve_periodic(cfg.boundary, cfg.friction, cfg.gas, cfg.grid,
                                   cfg.tol_fp, cfg.max_iter)
    bd_run = equivalent_boundary_data(field, cfg.boundary, cfg.mode)
    T = cfg.windows * report.T0
    traj = run_ibvp(field.data[0], bd_run, cfg.mode, cfg.friction, cfg.gas,
                    T=T, snapshot_every=cfg.snapshot_every, cfl=cfg.cfl)
    out = _outdir(cfg)
    fieldio.write_trajectory_csv(traj, out / "trajectory.csv", cfg.gas)
    fieldio.write_snapshot_csv(traj.x, traj.final, traj.times[-1],
                               out / "final_state.csv", cfg.gas)
    _emit(quiet,
          f"ran {cfg.windows} windows of T0={report.T0:.6f} "
          f"({len(traj.times)} snapshots), max C0 {traj.max_c0:.6e}",
          f"wrote {out / 'trajectory.csv'}")
    return 0


def _cmd_stability(cfg: SimulationConfig, quiet: bool) -> int:
    report, _traj = run_stability_experiment(
        cfg.boundary, cfg.friction, cfg.gas, cfg.grid, cfg.amplitude,
        K=cfg.windows, mode=cfg.mode, cfl=cfg.cfl,
        tol_fp=cfg.tol_fp, max_iter=cfg.max_iter)
    out = _outdir(cfg)
    fieldio.write_stability_csv(report, out / "stability.csv")
    fieldio.write_summary([
        ("T0", report.T0),
        ("amplitude", report.amplitude),
        ("xi_hat", "none" if report.xi_hat is None else report.xi_hat),
        ("monotone_fraction", report.monotone_fraction),
        ("noise_floor", report.noise_floor),
        ("closure_residual", report.closure_residual),
        ("usable_points", report.usable),
        ("status", report.status),
        ("pass", report.passed),
    ], out / "stability_summary.txt")
    xi = "n/a" if report.xi_hat is None else f"{report.xi_hat:.4f}"
    _emit(quiet,
          f"d_0={report.distances[0]:.3e} d_K={report.distances[-1]:.3e} "
          f"xi_hat={xi} monotone={report.monotone_fraction:.2f} status={report.status}",
          f"wrote {out / 'stability.csv'}")
    if not report.passed:
        print(f"ERROR regime: stability experiment did not pass (status {report.status})")
        return 2
    return 0


def _cmd_convergence(cfg: SimulationConfig, quiet: bool) -> int:
    ladder = []
    nt, nx = cfg.nt, cfg.nx
    for div in (4, 2, 1):
        if nt // div >= 16 and nx // div >= 16:
            ladder.append((nt // div, nx // div))
    rows = []
    residuals = []
    for gnt, gnx in ladder:
        field, _rep = solve_periodic(cfg.boundary, cfg.friction, cfg.gas, (gnt, gnx),
                                     cfg.tol_fp, cfg.max_iter)
        bd_run = equivalent_boundary_data(field, cfg.boundary, cfg.mode)
        res = closure_residual(field, bd_run, cfg.friction, cfg.gas,
                               cfg.mode, cfg.cfl)
        order = float("nan")
        if residuals and res > 0.0:
            order = float(np.log2(residuals[-1] / res))
        residuals.append(res)
        rows.append((gnt, gnx, res, order))
        _emit(quiet, f"grid {gnt}x{gnx}: closure residual {res:.6e}"
              + (f", observed order {order:.2f}" if order == order else ""))
    out = _outdir(cfg)
    fieldio.write_convergence_csv(rows, out / "convergence.csv")
    _emit(quiet, f"wrote {out / 'convergence.csv'}")
    return 0


_COMMANDS = {
    "periodic": _cmd_periodic,
    "ibvp": _cmd_ibvp,
    "stability": _cmd_stability,
    "convergence": _cmd_convergence,
    "validate": _cmd_validate,
}


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg, args.quiet)
    except UsageError as err:
        print(parser.format_usage(), end="")
        print(f"ERROR usage: {err}")
        return 1
    except ConfigError as err:
        for v in err.violations:
            print(f"ERROR config: {v}")
        return 1
    except (RegimeError, SonicError, CFLError, InsufficientDataError) as err:
        print(f"ERROR regime: {err}")
        return 2
    except ConvergenceError as err:
        if err.report is not None:
            print(f"ERROR convergence: {err} "
                  f"(last kappa {err.report.kappa_hats[-1]:.3f})"
                  if err.report.kappa_hats else f"ERROR convergence: {err}")
        else:
            print(f"ERROR convergence: {err}")
        return 2
    except DomainError as err:
        print(f"ERROR config: {err}")
        return 1
    except OSError as err:
        print(f"ERROR io: {err}")
        return 1
    except PipewaveError as err:
        print(f"ERROR regime: {err}")
        return 2


def main(argv=None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
