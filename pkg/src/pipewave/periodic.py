"""Time-periodic solution by iterated linearized sweeps.

Starting from the zero field, each sweep freezes the previous iterate in the
characteristic speeds and the friction source, traces every grid node of each
family to its data boundary, and rebuilds the field from boundary values plus
source integrals.  Iterates are exactly P-periodic by representation (one
period is stored; all time arithmetic wraps).  Successive sup-norm
differences contract geometrically in the small-amplitude regime and drive
the stopping rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryData
from .characteristics import march_family
from .errors import ConvergenceError, DomainError, RegimeError
from .fields import PeriodicField
from .friction import FrictionSpec
from .gas import GasParams, subsonic_check


@dataclass
class SolverReport:
    iterations: int
    sup_diffs: list[float]
    kappa_hats: list[float]
    c0_norm: float
    c1_norm_fd: float
    nu_max: float
    T0: float
    converged: bool
    tol_fp: float
    grid: tuple[int, int]

    def late_kappa(self, last: int = 3) -> float | None:
        """Median of the last few contraction ratios, None if there are none."""
        if not self.kappa_hats:
            return None
        tail = self.kappa_hats[-last:]
        return float(np.median(tail))


def linearized_sweep(prev: PeriodicField, bd: BoundaryData, spec: FrictionSpec,
                     p: GasParams) -> PeriodicField:
    """One linearized solve against the frozen background prev.

    For every node, family 1 is traced to x = L and set to
    phi1b(terminal t) + source integral; family 2 to x = 0 with phi2b.
    Boundary columns therefore reproduce the data at the nodes exactly.
    """
    rep = subsonic_check(prev, p)
    if not rep.ok:
        raise RegimeError("sweep aborted: background field is not subsonic", rep)
    T1, S1 = march_family(prev, spec, p, 1)
    T2, S2 = march_family(prev, spec, p, 2)
    new1 = bd.phi1b(T1) - S1
    new2 = bd.phi2b(T2) - S2
    data = np.stack([new1.T, new2.T], axis=-1)
    return PeriodicField(data, prev.period, prev.length)


def c1_norm_estimate(f: PeriodicField) -> float:
    """Discrete C1 norm: max of |phi_i| and finite-difference time/space slopes.

    Time differences are central with periodic wrap; space differences are
    central in the interior and one-sided at the pipe ends.
    """
    if f.nt < 3 or f.nx < 3:
        raise DomainError("c1 estimate needs at least 3 nodes per axis")
    d = f.data
    worst = float(np.max(np.abs(d)))
    dt = (np.roll(d, -1, axis=0) - np.roll(d, 1, axis=0)) / (2.0 * f.ht)
    worst = max(worst, float(np.max(np.abs(dt))))
    dx = np.empty_like(d)
    dx[:, 1:-1] = (d[:, 2:] - d[:, :-2]) / (2.0 * f.hx)
    dx[:, 0] = (d[:, 1] - d[:, 0]) / f.hx
    dx[:, -1] = (d[:, -1] - d[:, -2]) / f.hx
    return max(worst, float(np.max(np.abs(dx))))


def solve_periodic(bd: BoundaryData, spec: FrictionSpec, p: GasParams,
                   grid: tuple[int, int], tol_fp: float = 1e-10,
                   max_iter: int = 100) -> tuple[PeriodicField, SolverReport]:
    """Iterate linearized sweeps from the zero field until they stop moving.

    Returns the first iterate whose sup-norm distance to its predecessor is
    <= tol_fp, together with the full contraction history.  Raises
    ConvergenceError (carrying the partial report) when max_iter is exhausted,
    which usually means the boundary amplitude sits outside the small-data
    regime, and RegimeError if an iterate breaks subsonicity.
    """
    nt, nx = grid
    if nt < 16 or nx < 16:
        raise DomainError("grid must be at least 16x16")
    if tol_fp <= 0.0:
        raise DomainError("tol_fp must be positive")
    if max_iter < 1:
        raise DomainError("max_iter must be at least 1")

    field = PeriodicField.zeros(nt, nx, p.P, p.L)
    sup_diffs: list[float] = []
    converged = False
    for _ in range(max_iter):
        new = linearized_sweep(field, bd, spec, p)
        diff = float(np.max(np.abs(new.data - field.data)))
        sup_diffs.append(diff)
        field = new
        if diff <= tol_fp:
            converged = True
            break

    kappa_hats = [sup_diffs[i] / sup_diffs[i - 1]
                  for i in range(1, len(sup_diffs)) if sup_diffs[i - 1] > 0.0]
    final_rep = subsonic_check(field, p)
    if not final_rep.ok:
        raise RegimeError(
            "iterate left the subsonic regime (boundary amplitude too large?)",
            final_rep)
    report = SolverReport(
        iterations=len(sup_diffs),
        sup_diffs=sup_diffs,
        kappa_hats=kappa_hats,
        c0_norm=field.c0_norm(),
        c1_norm_fd=c1_norm_estimate(field),
        nu_max=final_rep.nu_max,
        T0=p.L * final_rep.nu_max,
        converged=converged,
        tol_fp=tol_fp,
        grid=(nt, nx),
    )
    if not converged:
        raise ConvergenceError(
            f"no convergence to {tol_fp:g} within {max_iter} sweeps "
            f"(last diff {sup_diffs[-1]:.3e})", report)
    return field, report
