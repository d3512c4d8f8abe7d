"""Periodic space-time grid fields of the invariant perturbations.

A PeriodicField stores (phi1, phi2) on nt x nx nodes covering one period:
t_j = j P / nt for j < nt (periodic, no duplicate endpoint) and
x_k = k L / (nx - 1) including both pipe ends.  Interpolation is bilinear
with periodic wrap in t and clamped endpoints in x; weights within 1e-12 of
a node snap to it so node queries reproduce stored values exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_SNAP = 1e-12


@dataclass
class PeriodicField:
    data: np.ndarray  # (nt, nx, 2), [..., 0] = phi1, [..., 1] = phi2
    period: float
    length: float

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 3 or self.data.shape[2] != 2:
            raise DomainError("field data must have shape (nt, nx, 2)")
        if self.nt < 2 or self.nx < 2:
            raise DomainError("field needs at least 2 nodes per axis")

    @property
    def nt(self) -> int:
        return self.data.shape[0]

    @property
    def nx(self) -> int:
        return self.data.shape[1]

    @property
    def ht(self) -> float:
        return self.period / self.nt

    @property
    def hx(self) -> float:
        return self.length / (self.nx - 1)

    def t_nodes(self) -> np.ndarray:
        return np.arange(self.nt) * self.ht

    def x_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.nx)

    @classmethod
    def zeros(cls, nt: int, nx: int, period: float, length: float) -> "PeriodicField":
        return cls(np.zeros((nt, nx, 2)), period, length)

    @classmethod
    def from_function(cls, fn1, fn2, nt, nx, period, length) -> "PeriodicField":
        t = np.arange(nt) * (period / nt)
        x = np.linspace(0.0, length, nx)
        T, X = np.meshgrid(t, x, indexing="ij")
        data = np.stack([fn1(T, X), fn2(T, X)], axis=-1)
        return cls(data, period, length)

    def copy(self) -> "PeriodicField":
        return PeriodicField(self.data.copy(), self.period, self.length)

    def c0_norm(self) -> float:
        return float(np.max(np.abs(self.data)))

    def interpolate(self, t, x):
        """Bilinear sample of (phi1, phi2) at arbitrary (t, x), t wrapped mod P."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        if np.any(x < -1e-12 * self.length) or np.any(x > self.length * (1.0 + 1e-12)):
            raise DomainError(f"x outside [0, {self.length}]")
        tau = t / self.ht
        jf = np.floor(tau)
        wt = tau - jf
        j0 = jf.astype(np.int64)
        snap_hi = wt > 1.0 - _SNAP
        j0 = np.where(snap_hi, j0 + 1, j0)
        wt = np.where(snap_hi | (wt < _SNAP), 0.0, wt)
        j0 = np.mod(j0, self.nt)
        j1 = np.mod(j0 + 1, self.nt)

        xi = x / self.hx
        kf = np.floor(xi)
        wx = xi - kf
        k0 = kf.astype(np.int64)
        snap_hi = wx > 1.0 - _SNAP
        k0 = np.where(snap_hi, k0 + 1, k0)
        wx = np.where(snap_hi | (wx < _SNAP), 0.0, wx)
        k0 = np.clip(k0, 0, self.nx - 1)
        k1 = np.minimum(k0 + 1, self.nx - 1)

        j0, j1, k0, k1, wt, wx = np.broadcast_arrays(j0, j1, k0, k1, wt, wx)
        d = self.data
        f00 = d[j0, k0]
        f01 = d[j0, k1]
        f10 = d[j1, k0]
        f11 = d[j1, k1]
        wt_ = wt[..., None]
        wx_ = wx[..., None]
        out = (
            (1.0 - wt_) * ((1.0 - wx_) * f00 + wx_ * f01)
            + wt_ * ((1.0 - wx_) * f10 + wx_ * f11)
        )
        return out[..., 0], out[..., 1]


def interpolate_field(f: PeriodicField, t, x):
    return f.interpolate(t, x)
