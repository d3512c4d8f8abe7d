"""Periodic boundary data for the two Riemann-invariant perturbations.

phi1 is prescribed at x = L (left-going family), phi2 at x = 0 (right-going
family).  Each is a truncated trigonometric series with the flow period P,
so the periodic extension to negative times is the series itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class HarmonicSeries:
    """value(t) = sum_j a_j cos(2 pi j t / P) + b_j sin(2 pi j t / P)."""

    period: float
    cos_coef: tuple[float, ...]
    sin_coef: tuple[float, ...]

    def __post_init__(self):
        if self.period <= 0.0:
            raise DomainError("series period must be positive")
        if len(self.cos_coef) != len(self.sin_coef):
            raise DomainError("cos/sin coefficient tables must have equal length")

    def _phases(self, t):
        tw = np.asarray(t, dtype=float)
        tw = tw - np.floor(tw / self.period) * self.period
        return 2.0 * np.pi / self.period * tw

    def __call__(self, t):
        th = self._phases(t)
        js = np.arange(len(self.cos_coef), dtype=float)
        jth = np.multiply.outer(js, th)
        acc = np.tensordot(self.cos_coef, np.cos(jth), 1)
        acc += np.tensordot(self.sin_coef, np.sin(jth), 1)
        return acc

    def derivative(self, t):
        th = self._phases(t)
        omega = 2.0 * np.pi / self.period
        js = np.arange(len(self.cos_coef), dtype=float)
        jth = np.multiply.outer(js, th)
        acc = np.tensordot(-js * omega * np.array(self.cos_coef), np.sin(jth), 1)
        acc += np.tensordot(js * omega * np.array(self.sin_coef), np.cos(jth), 1)
        return acc

    @classmethod
    def from_samples(cls, values, period: float, rel_tol: float = 1e-14) -> "HarmonicSeries":
        """Trigonometric interpolant of uniform periodic samples (via rFFT).

        Reconstructs the samples at their own nodes to roundoff; coefficients
        below rel_tol of the largest are dropped to keep evaluation cheap.
        """
        values = np.asarray(values, dtype=float)
        n = len(values)
        spec = np.fft.rfft(values)
        a = 2.0 * spec.real / n
        b = -2.0 * spec.imag / n
        a[0] /= 2.0
        if n % 2 == 0:
            a[-1] /= 2.0
            b[-1] = 0.0
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        keep = (np.abs(a) > rel_tol * scale) | (np.abs(b) > rel_tol * scale)
        a[~keep] = 0.0
        b[~keep] = 0.0
        last = int(np.max(np.nonzero(keep)[0])) if np.any(keep) else 0
        return cls(period, tuple(a[: last + 1]), tuple(b[: last + 1]))

    def c0_norm_sampled(self, n: int = 4096) -> float:
        t = np.arange(n) * (self.period / n)
        return float(np.max(np.abs(self(t))))

    def c1_norm_sampled(self, n: int = 4096) -> float:
        t = np.arange(n) * (self.period / n)
        return float(max(np.max(np.abs(self(t))), np.max(np.abs(self.derivative(t)))))


@dataclass(frozen=True)
class BoundaryData:
    """Pair of periodic boundary series plus the amplitude knob they scale with.

    amplitude is the configuration-level scale (the coefficient tables already
    include it); the C1 norm relevant to the smallness assumptions is sampled,
    not assumed, via c1_norm().
    """

    phi1b: HarmonicSeries
    phi2b: HarmonicSeries
    amplitude: float

    @classmethod
    def from_terms(cls, eps: float, phi1_terms, phi2_terms, period: float) -> "BoundaryData":
        """Build from relative harmonic terms (j, a, b), scaled by eps."""

        def build(terms):
            jmax = max((j for j, _, _ in terms), default=0)
            a = [0.0] * (jmax + 1)
            b = [0.0] * (jmax + 1)
            for j, aj, bj in terms:
                a[j] += eps * aj
                b[j] += eps * bj
            return HarmonicSeries(period, tuple(a), tuple(b))

        return cls(build(phi1_terms), build(phi2_terms), eps)

    @classmethod
    def zero(cls, period: float) -> "BoundaryData":
        z = HarmonicSeries(period, (0.0,), (0.0,))
        return cls(z, z, 0.0)

    @property
    def period(self) -> float:
        return self.phi1b.period

    def c1_norm(self) -> float:
        return max(self.phi1b.c1_norm_sampled(), self.phi2b.c1_norm_sampled())

    def c0_norm(self) -> float:
        return max(self.phi1b.c0_norm_sampled(), self.phi2b.c0_norm_sampled())
