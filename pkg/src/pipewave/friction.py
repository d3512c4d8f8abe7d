"""Friction coefficient beta(t, x): time-periodic, C1-bounded.

Two shapes are supported: a constant, and a closed family of
trigonometric-in-t times polynomial-in-x terms

    beta(t, x) = sum_{j,k} (a_{jk} cos(2 pi j t / P) + b_{jk} sin(2 pi j t / P)) x**k

with k <= 2.  Both are exactly P-periodic by construction (t is wrapped
modulo P before evaluation) and their C1 norm is validated by dense sampling
against the claimed bound c0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .gas import GasParams

MAX_HARMONIC = 32
MAX_XPOWER = 2


@dataclass(frozen=True)
class FrictionSpec:
    """Friction coefficient description plus its claimed C1 bound."""

    kind: str  # "constant" | "trig_series"
    c0_claimed: float
    period: float
    length: float
    b0: float = 0.0
    # each term is (harmonic j, x power k, cos coef a, sin coef b)
    terms: tuple[tuple[int, int, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("constant", "trig_series"):
            raise DomainError(f"unknown friction kind {self.kind!r}")
        if self.period <= 0.0 or self.length <= 0.0:
            raise DomainError("friction spec needs positive period and length")
        for j, k, _, _ in self.terms:
            if not (0 <= j <= MAX_HARMONIC):
                raise DomainError(f"friction harmonic {j} outside [0, {MAX_HARMONIC}]")
            if not (0 <= k <= MAX_XPOWER):
                raise DomainError(f"friction x power {k} outside [0, {MAX_XPOWER}]")

    @classmethod
    def constant(cls, b0: float, p: GasParams, c0: float | None = None) -> "FrictionSpec":
        return cls("constant", abs(b0) if c0 is None else c0, p.P, p.L, b0=b0)

    @classmethod
    def series(cls, terms, c0: float, p: GasParams) -> "FrictionSpec":
        terms = tuple((int(j), int(k), float(a), float(b)) for j, k, a, b in terms)
        return cls("trig_series", c0, p.P, p.L, terms=terms)

    def __call__(self, t, x):
        return eval_beta(self, t, x)

    def coefficient_arrays(self):
        """Dense (J+1, 3) cos/sin coefficient matrices for the march kernels."""
        if self.kind == "constant":
            a = np.zeros((1, MAX_XPOWER + 1))
            a[0, 0] = self.b0
            return a, np.zeros_like(a)
        jmax = max((j for j, _, _, _ in self.terms), default=0)
        a = np.zeros((jmax + 1, MAX_XPOWER + 1))
        b = np.zeros_like(a)
        for j, k, aj, bj in self.terms:
            a[j, k] += aj
            b[j, k] += bj
        return a, b


def _wrap(t, period):
    t = np.asarray(t, dtype=float)
    return t - np.floor(t / period) * period


def eval_beta(spec: FrictionSpec, t, x):
    """Evaluate beta at (t, x); x must lie in [0, L], t is wrapped mod P."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > spec.length * (1.0 + 1e-12)):
        raise DomainError(f"x outside [0, {spec.length}]")
    if spec.kind == "constant":
        return np.broadcast_arrays(np.full_like(np.asarray(t, dtype=float), spec.b0), x)[0]
    tw = _wrap(t, spec.period)
    acc = np.zeros(np.broadcast_shapes(tw.shape, x.shape))
    omega = 2.0 * np.pi / spec.period
    for j, k, a, b in spec.terms:
        osc = a * np.cos(omega * j * tw) + b * np.sin(omega * j * tw)
        acc = acc + osc * x**k
    return acc


@dataclass(frozen=True)
class BetaReport:
    max_abs: float
    max_dt: float
    max_dx: float
    periodicity_residual: float
    c0_claimed: float
    passed: bool

    @property
    def c1_norm(self) -> float:
        return max(self.max_abs, self.max_dt, self.max_dx)


def validate_beta(spec: FrictionSpec, p: GasParams, n_samples: int = 64) -> BetaReport:
    """Sample |beta|, |dbeta/dt|, |dbeta/dx| and the periodicity residual.

    Passes when the periodicity residual is <= 1e-12 and the sampled C1 norm
    stays within the claimed bound.  Derivatives use central differences with
    step P/4096 in t and L/4096 in x.
    """
    if n_samples < 16:
        raise DomainError("need at least 16 samples per axis")
    ts = np.arange(n_samples) * (spec.period / n_samples)
    xs = np.linspace(0.0, spec.length, n_samples)
    T, X = np.meshgrid(ts, xs, indexing="ij")
    vals = eval_beta(spec, T, X)
    ht = spec.period / 4096.0
    hx = spec.length / 4096.0
    dbdt = (eval_beta(spec, T + ht, X) - eval_beta(spec, T - ht, X)) / (2.0 * ht)
    xp = np.clip(X + hx, 0.0, spec.length)
    xm = np.clip(X - hx, 0.0, spec.length)
    dbdx = (eval_beta(spec, T, xp) - eval_beta(spec, T, xm)) / (xp - xm)
    residual = float(np.max(np.abs(eval_beta(spec, T + spec.period, X) - vals)))
    max_abs = float(np.max(np.abs(vals)))
    max_dt = float(np.max(np.abs(dbdt)))
    max_dx = float(np.max(np.abs(dbdx)))
    passed = residual <= 1e-12 and max(max_abs, max_dt, max_dx) <= spec.c0_claimed
    return BetaReport(max_abs, max_dt, max_dx, residual, spec.c0_claimed, passed)
