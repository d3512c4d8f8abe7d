"""Characteristic curves of the frozen-coefficient linearized system.

With x as the evolution variable the curves satisfy dt/dx = nu_i(phi + base),
nu_i = 1/lambda_i, against an immutable background PeriodicField.  Family 1
(lambda1 < 0) is integrated from the query point up to x = L where its data
lives; family 2 (lambda2 > 0) down to x = 0.  Integration is classical RK4
with step size tied to the grid spacing, and the friction source integral is
accumulated by the trapezoidal rule on the integrator's own samples.

Two code paths share the same mathematics:

* trace_characteristic / integrate_source_along: scalar, bilinear field
  interpolation, used for tests and diagnostics;
* march_family: a numba kernel that advances one whole wavefront of grid
  nodes per family (every node of a column joins the front as it sweeps by),
  which is what linearized_sweep calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError, SonicError
from .fields import PeriodicField
from .friction import FrictionSpec, eval_beta
from .gas import GasParams, char_speeds_phi, signed_power

_trapz = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class CharPath:
    """Samples of one characteristic, ordered from the query point to the
    inflow boundary of its family (x = L for family 1, x = 0 for family 2)."""

    family: int
    xs: np.ndarray
    ts: np.ndarray

    @property
    def terminal_t(self) -> float:
        return float(self.ts[-1])

    def __len__(self) -> int:
        return len(self.xs)


def _nu_at(family: int, field: PeriodicField, p: GasParams, t, x):
    phi1, phi2 = field.interpolate(t, x)
    lam1, lam2 = char_speeds_phi(phi1, phi2, p)
    lam = lam1 if family == 1 else lam2
    if family == 1 and not np.all(lam < 0.0):
        raise SonicError("family-1 speed lost its negative sign along the trace")
    if family == 2 and not np.all(lam > 0.0):
        raise SonicError("family-2 speed lost its positive sign along the trace")
    return 1.0 / lam


def trace_characteristic(family: int, t0: float, x0: float, field: PeriodicField,
                         p: GasParams) -> CharPath:
    """Trace t = t_i(x; t0, x0) through the frozen field toward its data boundary.

    The initial time is reduced modulo P once and the resulting offset added
    back to every sample, so traces started a whole period apart are exact
    shifted copies of each other.
    """
    if family not in (1, 2):
        raise DomainError(f"family must be 1 or 2, got {family}")
    L = field.length
    if x0 < -1e-12 * L or x0 > L * (1.0 + 1e-12):
        raise DomainError(f"x0 outside [0, {L}]")
    x0 = min(max(x0, 0.0), L)
    per = field.period
    offset = math.floor(t0 / per) * per
    t = t0 - offset

    target = L if family == 1 else 0.0
    span = target - x0
    if span == 0.0:
        return CharPath(family, np.array([x0]), np.array([t + offset]))
    nsteps = max(1, int(math.ceil(abs(span) / field.hx - 1e-9)))
    xs = x0 + (span / nsteps) * np.arange(nsteps + 1)
    xs[-1] = target
    ts = np.empty(nsteps + 1)
    ts[0] = t
    for i in range(nsteps):
        xa, xb = xs[i], xs[i + 1]
        dx = xb - xa
        xm = 0.5 * (xa + xb)
        k1 = _nu_at(family, field, p, t, xa)
        k2 = _nu_at(family, field, p, t + 0.5 * dx * k1, xm)
        k3 = _nu_at(family, field, p, t + 0.5 * dx * k2, xm)
        k4 = _nu_at(family, field, p, t + dx * k3, xb)
        t = t + dx / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
        if not np.isfinite(t):
            raise DomainError("characteristic integration produced a non-finite time")
        ts[i + 1] = t
    return CharPath(family, xs, ts + offset)


def integrate_source_along(path: CharPath, field: PeriodicField, spec: FrictionSpec,
                           p: GasParams) -> float:
    """Source integral from the family's data boundary to the query point.

    Returns int_L^x (family 1) or int_0^x (family 2) of
    (beta/2) nu_i |phi1+phi2|^alpha (phi1+phi2) dy along the path, which is
    exactly the quantity added to the boundary value by one sweep.
    """
    phi1, phi2 = field.interpolate(path.ts, path.xs)
    lam1, lam2 = char_speeds_phi(phi1, phi2, p)
    lam = lam1 if path.family == 1 else lam2
    g = 0.5 * eval_beta(spec, path.ts, path.xs) / lam * signed_power(phi1 + phi2, p.alpha + 1.0)
    # path order runs from the query point to the boundary; flip the sign.
    return float(-_trapz(np.atleast_1d(g), np.atleast_1d(path.xs)))


# ---------------------------------------------------------------------------
# numba wavefront march


@njit(cache=True, inline="always")
def _lerp_periodic(line, tau, nt):
    jf = math.floor(tau)
    w = tau - jf
    j = int(jf)
    if w < 1e-12:
        w = 0.0
    elif w > 1.0 - 1e-12:
        j += 1
        w = 0.0
    # marched times stay within one period plus a small excursion, so the
    # generic modulo almost never runs
    if j < 0 or j >= nt:
        j = j % nt
    j1 = j + 1
    if j1 == nt:
        j1 = 0
    return (1.0 - w) * line[j] + w * line[j1]


@njit(cache=True, inline="always")
def _beta_nb(t, x, acoef, bcoef, period):
    if acoef.shape[0] == 1:
        # no time dependence: constant-in-t polynomial in x
        return acoef[0, 0] + (acoef[0, 1] + acoef[0, 2] * x) * x
    tw = t - math.floor(t / period) * period
    base = 2.0 * math.pi / period * tw
    acc = acoef[0, 0] + (acoef[0, 1] + acoef[0, 2] * x) * x
    for j in range(1, acoef.shape[0]):
        cj = math.cos(j * base)
        sj = math.sin(j * base)
        xk = 1.0
        for k in range(acoef.shape[1]):
            a = acoef[j, k]
            b = bcoef[j, k]
            if a != 0.0 or b != 0.0:
                acc += (a * cj + b * sj) * xk
            xk *= x
    return acc


@njit(cache=True, inline="always")
def _spow_nb(s, expo):
    if s == 0.0:
        return 0.0
    if expo == 2.0:
        return s * abs(s)
    v = abs(s) ** expo
    return v if s > 0.0 else -v


@njit(cache=True)
def _march_kernel(d1, d2, tnodes, xcols, ht, bperiod, lam0, pc, qc, alphap1,
                  acoef, bcoef, ascending):
    # d1, d2 hold phi1, phi2 transposed to (nx, nt) so column lines are rows.
    # Marched times are kept wrapped into [0, P); everything downstream
    # (field lerp, friction, boundary series) is periodic, so only cheap
    # branch wrapping remains on the hot path.
    nt = tnodes.shape[0]
    nx = xcols.shape[0]
    inv_ht = 1.0 / ht
    T = np.empty((nx, nt))
    S = np.zeros((nx, nt))
    G = np.empty((nx, nt))
    NU = np.empty((nx, nt))
    mid1 = np.empty(nt)
    mid2 = np.empty(nt)
    step = 1 if ascending else -1
    cstart = 0 if ascending else nx - 1
    for ci in range(nx - 1):
        c = cstart + step * ci
        cn = c + step
        xc = xcols[c]
        xn = xcols[cn]
        dx = xn - xc
        line1 = d1[c]
        line2 = d2[c]
        for j in range(nt):
            t = tnodes[j]
            T[c, j] = t
            f1 = _lerp_periodic(line1, t * inv_ht, nt)
            f2 = _lerp_periodic(line2, t * inv_ht, nt)
            nu = 1.0 / (lam0 + pc * f1 + qc * f2)
            NU[c, j] = nu
            G[c, j] = 0.5 * _beta_nb(t, xc, acoef, bcoef, bperiod) * nu \
                * _spow_nb(f1 + f2, alphap1)
        next1 = d1[cn]
        next2 = d2[cn]
        for j in range(nt):
            mid1[j] = 0.5 * (line1[j] + next1[j])
            mid2[j] = 0.5 * (line2[j] + next2[j])
        lo = 0 if ascending else c
        hi = c + 1 if ascending else nx
        for r in range(lo, hi):
            for j in range(nt):
                t = T[r, j]
                k1 = NU[r, j]
                t2 = t + 0.5 * dx * k1
                f1 = _lerp_periodic(mid1, t2 * inv_ht, nt)
                f2 = _lerp_periodic(mid2, t2 * inv_ht, nt)
                k2 = 1.0 / (lam0 + pc * f1 + qc * f2)
                t3 = t + 0.5 * dx * k2
                f1 = _lerp_periodic(mid1, t3 * inv_ht, nt)
                f2 = _lerp_periodic(mid2, t3 * inv_ht, nt)
                k3 = 1.0 / (lam0 + pc * f1 + qc * f2)
                t4 = t + dx * k3
                f1 = _lerp_periodic(next1, t4 * inv_ht, nt)
                f2 = _lerp_periodic(next2, t4 * inv_ht, nt)
                k4 = 1.0 / (lam0 + pc * f1 + qc * f2)
                tn = t + dx / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
                while tn >= bperiod:
                    tn -= bperiod
                while tn < 0.0:
                    tn += bperiod
                T[r, j] = tn
                f1 = _lerp_periodic(next1, tn * inv_ht, nt)
                f2 = _lerp_periodic(next2, tn * inv_ht, nt)
                nu = 1.0 / (lam0 + pc * f1 + qc * f2)
                NU[r, j] = nu
                g = 0.5 * _beta_nb(tn, xn, acoef, bcoef, bperiod) * nu \
                    * _spow_nb(f1 + f2, alphap1)
                S[r, j] += 0.5 * (G[r, j] + g) * dx
                G[r, j] = g
    cb = nx - 1 if ascending else 0
    for j in range(nt):
        T[cb, j] = tnodes[j]
    return T, S


def march_family(field: PeriodicField, spec: FrictionSpec, p: GasParams, family: int):
    """March every grid node of one family to its data boundary.

    Returns (T, S) of shape (nx, nt): T[k, j] is the terminal time of the
    trace started at node (t_j, x_k) and S[k, j] the trapezoidal source
    integral accumulated in path order, so the swept value at the node is
    boundary(T) - S.
    """
    if family not in (1, 2):
        raise DomainError(f"family must be 1 or 2, got {family}")
    d1 = np.ascontiguousarray(field.data[:, :, 0].T)
    d2 = np.ascontiguousarray(field.data[:, :, 1].T)
    acoef, bcoef = spec.coefficient_arrays()
    a = 0.5 * (p.gamma + 1.0)
    b = 0.5 * (3.0 - p.gamma)
    if family == 1:
        lam0, pc, qc, ascending = -p.cbar, a, b, True
    else:
        lam0, pc, qc, ascending = p.cbar, b, a, False
    return _march_kernel(d1, d2, field.t_nodes(), field.x_nodes(), field.ht,
                         spec.period, lam0, pc, qc, p.alpha + 1.0,
                         acoef, bcoef, ascending)
