"""Deterministic CSV serialization of fields, snapshots, and reports.

All floats are written with 17 significant digits (lossless for doubles) so
identical inputs produce byte-identical files.  Every CSV starts with a
header row.  Field rows are row-major: t outer, x inner, with the physical
state and characteristic speeds recomputed per node.
"""

from __future__ import annotations

import numpy as np

from .errors import RegimeError
from .fields import PeriodicField
from .gas import GasParams, char_speeds_phi, primitive_from_invariants

FIELD_HEADER = "t,x,phi1,phi2,rho,u,lambda1,lambda2"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _rows_for(t, x, phi1, phi2, p: GasParams, check_subsonic: bool):
    lam1, lam2 = char_speeds_phi(phi1, phi2, p)
    if check_subsonic and (np.any(lam1 >= 0.0) or np.any(lam2 <= 0.0)):
        raise RegimeError("refusing to serialize a non-subsonic field "
                          "(pass check_subsonic=False to dump it anyway)")
    rho, u = primitive_from_invariants(phi1 + p.mbar, phi2 + p.nbar, p)
    cols = np.broadcast_arrays(t, x, phi1, phi2, rho, u, lam1, lam2)
    flat = [np.ravel(c) for c in cols]
    for row in zip(*flat):
        yield ",".join(_fmt(v) for v in row)


def write_field_csv(f: PeriodicField, path, p: GasParams,
                    check_subsonic: bool = True) -> None:
    t = f.t_nodes()[:, None]
    x = f.x_nodes()[None, :]
    _write(path, _rows_for(t, x, f.data[:, :, 0], f.data[:, :, 1], p, check_subsonic))


def write_snapshot_csv(x: np.ndarray, phi: np.ndarray, t: float, path,
                       p: GasParams, check_subsonic: bool = True) -> None:
    phi = np.asarray(phi, dtype=float)
    _write(path, _rows_for(np.full(len(x), t), np.asarray(x), phi[:, 0], phi[:, 1],
                           p, check_subsonic))


def write_trajectory_csv(traj, path, p: GasParams, check_subsonic: bool = True) -> None:
    def rows():
        for t, phi in zip(traj.times, traj.states):
            yield from _rows_for(np.full(len(traj.x), t), traj.x,
                                 phi[:, 0], phi[:, 1], p, check_subsonic)
    _write(path, rows())


def _write(path, rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(FIELD_HEADER + "\n")
            for row in rows:
                fh.write(row + "\n")
    except OSError as err:
        raise OSError(f"cannot write {path}: {err}") from err


def read_field_csv(path) -> dict[str, np.ndarray]:
    """Read any CSV written by this module into named column arrays."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def write_iterations_csv(report, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iteration,sup_diff,kappa_hat\n")
        for i, d in enumerate(report.sup_diffs, start=1):
            kap = report.kappa_hats[i - 2] if i >= 2 and i - 2 < len(report.kappa_hats) else float("nan")
            fh.write(f"{i},{_fmt(d)},{_fmt(kap)}\n")


def write_stability_csv(report, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("window,t,distance\n")
        for k, d in enumerate(report.distances):
            fh.write(f"{k},{_fmt(k * report.T0)},{_fmt(d)}\n")


def write_convergence_csv(rows, path) -> None:
    """rows: iterable of (nt, nx, closure_residual, observed_order or nan)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("nt,nx,closure_residual,observed_order\n")
        for nt, nx, res, order in rows:
            fh.write(f"{nt},{nx},{_fmt(res)},{_fmt(order)}\n")


def write_summary(pairs, path) -> None:
    """Stable `key = value` lines for human consumption."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, val in pairs:
            if isinstance(val, float):
                val = _fmt(val)
            fh.write(f"{key} = {val}\n")
