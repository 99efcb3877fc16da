"""Analytic Helmholtz solutions used as targets and boundary data.

Three families, each exposing vectorized value / gradient evaluators (and,
for plane waves, the even x-derivatives needed by the nodal collocation
operator):

* plane waves exp(i kappa d . x), d complex with d . d = 1 (propagative for
  real d, evanescent otherwise);
* fractional Bessel solutions J_nu(kappa r) exp(i nu theta), singular at the
  expansion center for non-integer nu;
* the outgoing fundamental solution (i/4) H0^(1)(kappa |x - x0|).

Special functions come from scipy.special; the test suite validates them
against independent series/asymptotic oracles before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special as _sp

__all__ = ["PlaneWave", "CornerSingularity", "FundamentalSolution",
           "plane_wave", "corner_singularity", "fundamental_solution",
           "impedance_data", "impedance_trace", "EPWSum"]


class SingularEvaluation(Exception):
    """Raised when a gradient is requested at (or too close to) a singular point."""


@dataclass(frozen=True)
class PlaneWave:
    """u(x) = exp(i kappa d . x) with complex direction d, d . d = 1."""

    direction: tuple
    kappa: float
    singular_point = None

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=complex)
        if abs(d @ d - 1.0) > 1e-12:
            raise ValueError("direction must satisfy d . d = 1")
        object.__setattr__(self, "direction", (complex(d[0]), complex(d[1])))

    def _d(self):
        return np.asarray(self.direction, dtype=complex)

    def value(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = self._d()
        return np.exp(1j * self.kappa * (pts[:, 0] * d[0] + pts[:, 1] * d[1]))

    def gradient(self, pts):
        d = self._d()
        v = self.value(pts)
        return np.stack([1j * self.kappa * d[0] * v, 1j * self.kappa * d[1] * v], axis=-1)

    def dx_even(self, pts, order: int):
        """(d/dx)^(2*order) u, scaled by kappa^(-2*order)."""
        d = self._d()
        return (-(d[0] ** 2)) ** order * self.value(pts)

    def h_norm_sq(self, M: int, area: float) -> float:
        """Squared kappa-weighted H^M norm over a region of given area.

        Closed form for real directions: the multi-indices of each derivative
        order sum to (|d1|^2 + |d2|^2)^order by the multinomial theorem.
        """
        d = self._d()
        if abs(d[0].imag) > 1e-14 or abs(d[1].imag) > 1e-14:
            raise NotImplementedError("closed-form norm only for real directions")
        p = abs(d[0]) ** 2 + abs(d[1]) ** 2
        return area * sum(p ** ell for ell in range(M + 1))


def plane_wave(direction, kappa: float) -> PlaneWave:
    return PlaneWave(tuple(direction), kappa)


@dataclass(frozen=True)
class EPWSum:
    """Finite combination sum_t a_t exp(i kappa d_t . (x - x0_t)), d_t . d_t = 1."""

    directions: np.ndarray
    amplitudes: np.ndarray
    anchors: np.ndarray
    kappa: float
    singular_point = None

    def value(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        D, A, X0 = self.directions, self.amplitudes, self.anchors
        phase = 1j * self.kappa * ((pts[:, None, 0] - X0[None, :, 0]) * D[None, :, 0]
                                   + (pts[:, None, 1] - X0[None, :, 1]) * D[None, :, 1])
        return np.exp(phase) @ A

    def _deriv(self, pts, a1, a2):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        D, A, X0 = self.directions, self.amplitudes, self.anchors
        phase = 1j * self.kappa * ((pts[:, None, 0] - X0[None, :, 0]) * D[None, :, 0]
                                   + (pts[:, None, 1] - X0[None, :, 1]) * D[None, :, 1])
        fac = (1j * self.kappa * D[:, 0]) ** a1 * (1j * self.kappa * D[:, 1]) ** a2
        return np.exp(phase) @ (A * fac)

    def gradient(self, pts):
        return np.stack([self._deriv(pts, 1, 0), self._deriv(pts, 0, 1)], axis=-1)

    def dx_even(self, pts, order: int):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        D, A, X0 = self.directions, self.amplitudes, self.anchors
        phase = 1j * self.kappa * ((pts[:, None, 0] - X0[None, :, 0]) * D[None, :, 0]
                                   + (pts[:, None, 1] - X0[None, :, 1]) * D[None, :, 1])
        fac = (-(D[:, 0] ** 2)) ** order
        return np.exp(phase) @ (A * fac)


@dataclass(frozen=True)
class CornerSingularity:
    """u = J_nu(kappa r) exp(i nu theta) about ``center``; nu > 0 non-integer.

    theta follows the atan2 convention, with the branch cut along
    theta = +-pi; place the cut outside the domain of interest.
    """

    nu: float
    kappa: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.nu <= 0 or float(self.nu).is_integer():
            raise ValueError("order must be positive and non-integer")

    @property
    def singular_point(self):
        return self.center

    def _polar(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        dx = pts[:, 0] - self.center[0]
        dy = pts[:, 1] - self.center[1]
        return np.hypot(dx, dy), np.arctan2(dy, dx)

    def value(self, pts):
        r, th = self._polar(pts)
        return _sp.jv(self.nu, self.kappa * r) * np.exp(1j * self.nu * th)

    def gradient(self, pts):
        r, th = self._polar(pts)
        if self.nu < 1.0 and np.any(r == 0.0):
            raise SingularEvaluation("gradient unbounded at the singular point")
        z = self.kappa * r
        jp = 0.5 * (_sp.jv(self.nu - 1, z) - _sp.jv(self.nu + 1, z))
        phase = np.exp(1j * self.nu * th)
        u_r = self.kappa * jp * phase
        with np.errstate(divide="ignore", invalid="ignore"):
            u_th_over_r = np.where(r > 0, 1j * self.nu * _sp.jv(self.nu, z) / r, 0.0) * phase
        cos, sin = np.cos(th), np.sin(th)
        return np.stack([u_r * cos - u_th_over_r * sin,
                         u_r * sin + u_th_over_r * cos], axis=-1)


def corner_singularity(nu: float, kappa: float, center=(0.0, 0.0)) -> CornerSingularity:
    return CornerSingularity(nu, kappa, tuple(center))


@dataclass(frozen=True)
class FundamentalSolution:
    """u = (i/4) H0^(1)(kappa |x - x0|), the outgoing point-source field."""

    x0: tuple
    kappa: float

    @property
    def singular_point(self):
        return self.x0

    def _r(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.hypot(pts[:, 0] - self.x0[0], pts[:, 1] - self.x0[1]), pts

    def value(self, pts):
        r, _ = self._r(pts)
        if np.any(r == 0.0):
            raise SingularEvaluation("evaluation at the source point")
        return 0.25j * _sp.hankel1(0, self.kappa * r)

    def gradient(self, pts):
        r, p = self._r(pts)
        if np.any(r == 0.0):
            raise SingularEvaluation("evaluation at the source point")
        dr = -0.25j * self.kappa * _sp.hankel1(1, self.kappa * r)
        return np.stack([dr * (p[:, 0] - self.x0[0]) / r,
                         dr * (p[:, 1] - self.x0[1]) / r], axis=-1)


def fundamental_solution(x0, kappa: float) -> FundamentalSolution:
    return FundamentalSolution(tuple(x0), kappa)


def impedance_data(u, kappa: float) -> Callable:
    """Boundary datum g(x) = n . grad u - i kappa u as a (points, normals) callable."""

    def g(points, normals):
        grad = u.gradient(points)
        return (normals[:, 0] * grad[:, 0] + normals[:, 1] * grad[:, 1]
                - 1j * kappa * u.value(points))

    return g


def impedance_trace(u, kappa: float, p0, p1, normal=None) -> Callable:
    """g restricted to the segment p0 -> p1 as a function of arclength."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    L = float(np.hypot(*(p1 - p0)))
    t = (p1 - p0) / L
    n = np.array([t[1], -t[0]]) if normal is None else np.asarray(normal, dtype=float)
    sp = getattr(u, "singular_point", None)
    if sp is not None:
        sp = np.asarray(sp, dtype=float)
        # distance from the singular point to the segment
        tt = float(np.clip((sp - p0) @ t, 0.0, L))
        if np.hypot(*(p0 + tt * t - sp)) < 1e-12:
            raise SingularEvaluation("singular point lies on the segment")
    datum = impedance_data(u, kappa)

    def g(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        pts = p0[None, :] + s[:, None] * t[None, :]
        return datum(pts, np.broadcast_to(n, pts.shape))

    return g
