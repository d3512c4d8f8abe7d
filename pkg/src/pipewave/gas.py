"""Gas model: parameters, Riemann-invariant transforms, wave speeds, friction source.

Physical variables are density rho > 0 and velocity u, with pressure rho**gamma
(gamma > 1) and sound speed c = sqrt(gamma) * rho**((gamma-1)/2).  The working
variables everywhere else in the package are the Riemann invariants

    m = (u - 2*c/(gamma-1)) / 2,      n = (u + 2*c/(gamma-1)) / 2,

which diagonalize the system with characteristic speeds

    lambda1 = (gamma+1)/2 * m + (3-gamma)/2 * n   (= u - c),
    lambda2 = (3-gamma)/2 * m + (gamma+1)/2 * n   (= u + c),

and their perturbations phi = (m - mbar, n - nbar) about the rest state
(rho_bar, u=0).  Subsonic means lambda1 < 0 < lambda2.  All functions here are
pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SonicError


@dataclass(frozen=True)
class GasParams:
    """Problem instance: gas law, friction exponent, pipe length, period."""

    gamma: float = 2.0
    alpha: float = 1.0
    rho_bar: float = 1.0
    L: float = 1.0
    P: float = 1.0

    def __post_init__(self):
        bad = []
        if not self.gamma > 1.0:
            bad.append(f"gamma must exceed 1 (got {self.gamma})")
        if not self.alpha > 0.0:
            bad.append(f"alpha must be positive (got {self.alpha})")
        if not self.rho_bar > 0.0:
            bad.append(f"rho_bar must be positive (got {self.rho_bar})")
        if not self.L > 0.0:
            bad.append(f"L must be positive (got {self.L})")
        if not self.P > 0.0:
            bad.append(f"P must be positive (got {self.P})")
        if bad:
            raise DomainError("; ".join(bad))

    @property
    def cbar(self) -> float:
        """Sound speed of the rest state."""
        return np.sqrt(self.gamma) * self.rho_bar ** ((self.gamma - 1.0) / 2.0)

    @property
    def mbar(self) -> float:
        return -self.cbar / (self.gamma - 1.0)

    @property
    def nbar(self) -> float:
        return self.cbar / (self.gamma - 1.0)

    def sound_speed(self, rho):
        return np.sqrt(self.gamma) * np.asarray(rho) ** ((self.gamma - 1.0) / 2.0)


@dataclass(frozen=True)
class PhysState:
    rho: float
    u: float


@dataclass(frozen=True)
class RiemannState:
    m: float
    n: float


@dataclass(frozen=True)
class Perturbation:
    phi1: float
    phi2: float


@dataclass(frozen=True)
class EigenSpeeds:
    lambda1: float
    lambda2: float
    nu1: float
    nu2: float


def invariants_from_primitive(rho, u, p: GasParams):
    """(rho, u) -> (m, n).  Accepts arrays; rho must be positive."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0):
        raise DomainError("density must be positive")
    c = p.sound_speed(rho)
    u = np.asarray(u, dtype=float)
    m = 0.5 * (u - 2.0 * c / (p.gamma - 1.0))
    n = 0.5 * (u + 2.0 * c / (p.gamma - 1.0))
    return m, n


def primitive_from_invariants(m, n, p: GasParams):
    """(m, n) -> (rho, u).  Requires n > m (positive sound speed)."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    if np.any(n <= m):
        raise DomainError("need n > m: state is at or beyond vacuum")
    c = 0.5 * (p.gamma - 1.0) * (n - m)
    rho = (c * c / p.gamma) ** (1.0 / (p.gamma - 1.0))
    u = m + n
    return rho, u


def to_riemann(s: PhysState, p: GasParams) -> RiemannState:
    m, n = invariants_from_primitive(s.rho, s.u, p)
    return RiemannState(float(m), float(n))


def from_riemann(r: RiemannState, p: GasParams) -> PhysState:
    rho, u = primitive_from_invariants(r.m, r.n, p)
    return PhysState(float(rho), float(u))


def char_speeds(m, n, p: GasParams):
    """Raw characteristic speeds (lambda1, lambda2) of a state in invariants."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    a = 0.5 * (p.gamma + 1.0)
    b = 0.5 * (3.0 - p.gamma)
    return a * m + b * n, b * m + a * n


def char_speeds_phi(phi1, phi2, p: GasParams):
    """Characteristic speeds of the perturbed state (mbar+phi1, nbar+phi2)."""
    a = 0.5 * (p.gamma + 1.0)
    b = 0.5 * (3.0 - p.gamma)
    lam1 = -p.cbar + a * np.asarray(phi1, dtype=float) + b * np.asarray(phi2, dtype=float)
    lam2 = p.cbar + b * np.asarray(phi1, dtype=float) + a * np.asarray(phi2, dtype=float)
    return lam1, lam2


def eigenvalues(r: RiemannState, p: GasParams) -> EigenSpeeds:
    """Characteristic speeds and their reciprocals for a valid state.

    Raises SonicError when the state is degenerate (n <= m, vacuum collapse)
    or when either speed vanishes, since the reciprocal slopes nu_i = 1/lambda_i
    stop being meaningful there.
    """
    lam1, lam2 = char_speeds(r.m, r.n, p)
    lam1 = float(lam1)
    lam2 = float(lam2)
    if r.n <= r.m:
        raise SonicError(f"degenerate state m={r.m}, n={r.n}: sound speed <= 0")
    if lam1 == 0.0 or lam2 == 0.0:
        raise SonicError("sonic state: a characteristic speed vanished")
    return EigenSpeeds(lam1, lam2, 1.0 / lam1, 1.0 / lam2)


def signed_power(s, expo):
    """sign(s) * |s|**expo, exactly zero at s = 0."""
    s = np.asarray(s, dtype=float)
    return np.sign(s) * np.abs(s) ** expo


def source_term(phi1, phi2, beta_val, p: GasParams):
    """Friction source (beta/2) * |phi1+phi2|**alpha * (phi1+phi2).

    Evaluated as sign(s)*|s|**(alpha+1) so there is no 0**alpha ambiguity for
    alpha < 1; same value feeds both invariant equations.
    """
    s = np.asarray(phi1, dtype=float) + np.asarray(phi2, dtype=float)
    return 0.5 * np.asarray(beta_val, dtype=float) * signed_power(s, p.alpha + 1.0)


@dataclass(frozen=True)
class SubsonicReport:
    """Node-wise hyperbolic directionality check.

    ok requires min(-lambda1) > 0 and min(lambda2) > 0 over all nodes.
    nu_max is max |1/lambda_i| (inf when a speed vanished), and degenerate is
    set when some node has non-positive sound speed (vacuum/sonic collapse).
    """

    min_neg_lambda1: float
    min_lambda2: float
    nu_max: float
    ok: bool
    degenerate: bool

    @property
    def T0(self) -> float:
        """Longest transit time over a pipe of unit length; multiply by L."""
        return self.nu_max


def _extract_phi(field_or_phi):
    data = getattr(field_or_phi, "data", field_or_phi)
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise DomainError("expected trailing axis of size 2 holding (phi1, phi2)")
    return arr[..., 0], arr[..., 1]


def subsonic_check(field_or_phi, p: GasParams) -> SubsonicReport:
    """Check lambda1 < 0 < lambda2 at every node of a field or snapshot.

    Accepts a PeriodicField (anything with a .data array) or a bare array with
    trailing (phi1, phi2) axis.  Report-style: never raises on failure.
    """
    phi1, phi2 = _extract_phi(field_or_phi)
    if not (np.all(np.isfinite(phi1)) and np.all(np.isfinite(phi2))):
        raise DomainError("field contains non-finite values")
    lam1, lam2 = char_speeds_phi(phi1, phi2, p)
    min_neg_l1 = float(np.min(-lam1))
    min_l2 = float(np.min(lam2))
    ok = min_neg_l1 > 0.0 and min_l2 > 0.0
    degenerate = bool(np.any(phi2 - phi1 + (p.nbar - p.mbar) <= 0.0))
    with np.errstate(divide="ignore"):
        nu = np.maximum(np.abs(1.0 / lam1), np.abs(1.0 / lam2))
    if np.any(lam1 == 0.0) or np.any(lam2 == 0.0):
        nu_max = float("inf")
    else:
        nu_max = float(np.max(nu))
    return SubsonicReport(min_neg_l1, min_l2, nu_max, ok, degenerate)
