"""Nonlinear initial-boundary value problem, marched forward in time.

First-order CIR upwind on the diagonal invariant form: family 1 travels left
(lambda1 < 0) so its stencil leans right (forward in x) and its data enters
at x = L; family 2 mirrors this.  Outflow nodes need no extrapolation, the
outgoing family's stencil already points into the domain.  The friction
source is applied with a two-stage (Heun) predictor-corrector on the source
alone.  Speeds in the stencil are frozen at the current node per step.

Boundary closures: plain Dirichlet data, or the dissipative reflective form
phi2(t,0) = phi2b(t) + K1 phi1(t,0), phi1(t,L) = phi1b(t) + K2 phi2(t,L)
with |K1|, |K2| < 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .boundary import BoundaryData
from .errors import CFLError, DomainError, RegimeError
from .friction import FrictionSpec, eval_beta
from .gas import GasParams, char_speeds_phi, source_term, subsonic_check


@dataclass(frozen=True)
class BoundaryMode:
    mode: str = "dirichlet"  # "dirichlet" | "reflective"
    K1: float = 0.0
    K2: float = 0.0

    def __post_init__(self):
        if self.mode not in ("dirichlet", "reflective"):
            raise DomainError(f"unknown boundary mode {self.mode!r}")
        if self.mode == "reflective" and not (abs(self.K1) < 1.0 and abs(self.K2) < 1.0):
            raise DomainError("reflective closure needs |K1| < 1 and |K2| < 1")


DIRICHLET = BoundaryMode()


@dataclass
class IbvpState:
    t: float
    phi: np.ndarray  # (nx, 2)


@dataclass
class Trajectory:
    x: np.ndarray
    times: list[float] = dc_field(default_factory=list)
    states: list[np.ndarray] = dc_field(default_factory=list)
    max_c0: float = 0.0

    def append(self, t: float, phi: np.ndarray):
        self.times.append(float(t))
        self.states.append(phi.copy())

    def at_time(self, t: float, tol: float = 1e-9) -> np.ndarray:
        err = [abs(s - t) for s in self.times]
        i = int(np.argmin(err))
        if err[i] > tol * max(1.0, abs(t)):
            raise DomainError(f"trajectory has no snapshot at t={t}")
        return self.states[i]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True)
class CompatibilityReport:
    """Corner compatibility residuals between initial and boundary data.

    order0 holds |phi_ib(0) - trace of init| at the two corners, order1 the
    residuals of the differentiated corner relations (init slopes by one-sided
    differences).  Passing means order0 <= 1e-12 and order1 <= 10 * h_x; in
    reflective mode only order0 is checked (the closure gives no clean
    first-order corner relation).
    """

    order0: tuple[float, float]
    order1: tuple[float, float]
    hx: float
    mode: str
    passed: bool


def check_compatibility(init: np.ndarray, bd: BoundaryData, spec: FrictionSpec,
                        p: GasParams, mode: BoundaryMode = DIRICHLET) -> CompatibilityReport:
    init = np.asarray(init, dtype=float)
    nx = init.shape[0]
    hx = p.L / (nx - 1)
    phi1_0 = init[:, 0]
    phi2_0 = init[:, 1]
    b1_0 = float(bd.phi1b(0.0))
    b2_0 = float(bd.phi2b(0.0))
    if mode.mode == "reflective":
        r0_L = abs(b1_0 + mode.K2 * phi2_0[-1] - phi1_0[-1])
        r0_0 = abs(b2_0 + mode.K1 * phi1_0[0] - phi2_0[0])
        rep = CompatibilityReport((r0_L, r0_0), (0.0, 0.0), hx, mode.mode,
                                  r0_L <= 1e-12 and r0_0 <= 1e-12)
        return rep
    r0_L = abs(b1_0 - phi1_0[-1])
    r0_0 = abs(b2_0 - phi2_0[0])

    lam1_L, _ = char_speeds_phi(phi1_0[-1], phi2_0[-1], p)
    _, lam2_0 = char_speeds_phi(phi1_0[0], phi2_0[0], p)
    dphi1_L = (phi1_0[-1] - phi1_0[-2]) / hx
    dphi2_0 = (phi2_0[1] - phi2_0[0]) / hx
    src_L = source_term(b1_0, phi2_0[-1], eval_beta(spec, 0.0, p.L), p)
    src_0 = source_term(phi1_0[0], b2_0, eval_beta(spec, 0.0, 0.0), p)
    r1_L = abs(float(bd.phi1b.derivative(0.0)) + float(lam1_L) * dphi1_L - float(src_L))
    r1_0 = abs(float(bd.phi2b.derivative(0.0)) + float(lam2_0) * dphi2_0 - float(src_0))

    passed = r0_L <= 1e-12 and r0_0 <= 1e-12 and r1_L <= 10.0 * hx and r1_0 <= 10.0 * hx
    return CompatibilityReport((r0_L, r0_0), (r1_L, r1_0), hx, mode.mode, passed)


def make_compatible_perturbation(base: np.ndarray, amplitude: float,
                                 p: GasParams) -> np.ndarray:
    """base + amplitude * sin^2(pi x / L) on both components.

    The bump and its slope vanish at both pipe ends, so corner compatibility
    residuals of the result match those of base to roundoff.
    """
    base = np.asarray(base, dtype=float)
    x = np.linspace(0.0, p.L, base.shape[0])
    bump = amplitude * np.sin(np.pi * x / p.L) ** 2
    bump[0] = 0.0
    bump[-1] = 0.0  # sin(pi) is only ~1e-16 in floats; the contract is exact
    out = base.copy()
    out[:, 0] += bump
    out[:, 1] += bump
    return out


def apply_boundary(phi1: np.ndarray, phi2: np.ndarray, t: float, bd: BoundaryData,
                   mode: BoundaryMode) -> None:
    """Fill the inflow nodes in place; outflow entries must already be final."""
    if mode.mode == "dirichlet":
        phi1[-1] = bd.phi1b(t)
        phi2[0] = bd.phi2b(t)
    else:
        phi2[0] = bd.phi2b(t) + mode.K1 * phi1[0]
        phi1[-1] = bd.phi1b(t) + mode.K2 * phi2[-1]


def step_ibvp(s: IbvpState, dt: float, bd: BoundaryData, mode: BoundaryMode,
              spec: FrictionSpec, p: GasParams, cfl: float = 0.9) -> IbvpState:
    """One upwind step of size dt; dt must satisfy the CFL precondition."""
    phi = s.phi
    nx = phi.shape[0]
    hx = p.L / (nx - 1)
    phi1 = phi[:, 0]
    phi2 = phi[:, 1]
    lam1, lam2 = char_speeds_phi(phi1, phi2, p)
    smax = max(float(np.max(np.abs(lam1))), float(np.max(np.abs(lam2))))
    if dt > cfl * hx / smax * (1.0 + 1e-9):
        raise CFLError(f"dt={dt:.3e} exceeds cfl*hx/max|lambda|={cfl * hx / smax:.3e}")

    t0 = s.t
    t1 = t0 + dt
    x = np.linspace(0.0, p.L, nx)
    r = dt / hx

    # transport: family 1 leans forward (lambda1 < 0), family 2 backward
    tr1 = phi1.copy()
    tr1[:-1] -= r * lam1[:-1] * (phi1[1:] - phi1[:-1])
    tr2 = phi2.copy()
    tr2[1:] -= r * lam2[1:] * (phi2[1:] - phi2[:-1])

    src0 = source_term(phi1, phi2, eval_beta(spec, t0, x), p)
    pred1 = tr1 + dt * src0
    pred2 = tr2 + dt * src0
    apply_boundary(pred1, pred2, t1, bd, mode)
    src1 = source_term(pred1, pred2, eval_beta(spec, t1, x), p)
    new1 = tr1 + 0.5 * dt * (src0 + src1)
    new2 = tr2 + 0.5 * dt * (src0 + src1)
    apply_boundary(new1, new2, t1, bd, mode)

    new = np.stack([new1, new2], axis=-1)
    rep = subsonic_check(new, p)
    if not rep.ok:
        raise RegimeError(f"state left the subsonic regime at t={t1:.6g}",
                          IbvpState(t1, new))
    return IbvpState(t1, new)


def run_ibvp(init: np.ndarray, bd: BoundaryData, mode: BoundaryMode,
             spec: FrictionSpec, p: GasParams, T: float,
             snapshot_every: float | None = None, cfl: float = 0.9,
             require_compatible: bool = True) -> Trajectory:
    """March from init over [0, T], catching snapshots at the requested cadence.

    Snapshot times are k * snapshot_every plus T itself; values between steps
    are linearly interpolated in t across the step that crosses them.  Raises
    RegimeError mid-run with the partial trajectory attached as diagnostics.
    """
    if T <= 0.0:
        raise DomainError("T must be positive")
    init = np.asarray(init, dtype=float)
    if require_compatible:
        comp = check_compatibility(init, bd, spec, p, mode)
        if not comp.passed:
            raise DomainError(
                f"initial data incompatible with boundary data: order0={comp.order0}, "
                f"order1={comp.order1} (h_x={comp.hx:.3e})")
    if snapshot_every is not None and snapshot_every <= 0.0:
        raise DomainError("snapshot_every must be positive")

    pending: list[float] = []
    if snapshot_every is not None:
        k = 1
        while k * snapshot_every < T * (1.0 - 1e-12):
            pending.append(k * snapshot_every)
            k += 1
    pending.append(T)

    nx = init.shape[0]
    hx = p.L / (nx - 1)
    traj = Trajectory(x=np.linspace(0.0, p.L, nx))
    state = IbvpState(0.0, init.copy())
    traj.append(0.0, state.phi)
    traj.max_c0 = float(np.max(np.abs(init)))

    next_i = 0
    while state.t < T:
        lam1, lam2 = char_speeds_phi(state.phi[:, 0], state.phi[:, 1], p)
        smax = max(float(np.max(np.abs(lam1))), float(np.max(np.abs(lam2))))
        dt = cfl * hx / smax
        try:
            new = step_ibvp(state, dt, bd, mode, spec, p, cfl)
        except RegimeError as err:
            err.diagnostics = (traj, err.diagnostics)
            raise
        traj.max_c0 = max(traj.max_c0, float(np.max(np.abs(new.phi))))
        while next_i < len(pending) and pending[next_i] <= new.t * (1.0 + 1e-14):
            ts = pending[next_i]
            w = (ts - state.t) / (new.t - state.t)
            traj.append(ts, (1.0 - w) * state.phi + w * new.phi)
            next_i += 1
        state = new
    return traj
