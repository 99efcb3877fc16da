"""Closed-form integrals of exponentials over segments, rectangles, polygons.

Every Galerkin entry of the method reduces to integrals of exp(i g . x) with
a complex frequency vector g over a (clipped) cell or a boundary segment.
These are evaluated exactly:

* 1D kernel: integral of exp(a t) over [0, L], with a Taylor branch for
  small |a L| to avoid cancellation;
* rectangles: tensor product of two 1D kernels;
* simple polygons: divergence-theorem reduction to boundary edges, with a
  quadrature fallback for |g| ~ 0 where the reduction would amplify noise.

All routines accept an optional complex shift c and compute the integral of
exp(i g . x - c).  Callers use the shift to keep every intermediate factor
bounded by one in magnitude when g has a large imaginary part (evanescent
wave products): choosing c so that Re(i g . x - c) <= 0 on the region makes
the evaluation overflow-free.
"""

from __future__ import annotations

import numpy as np

SMALL_EXPONENT_TOL = 1e-4

__all__ = ["line_exp_integral", "segment_exp_integral", "rect_exp_integral",
           "polygon_exp_integral"]


def line_exp_integral(a, L):
    """integral_0^L exp(a t) dt = (exp(aL) - 1)/a, Taylor branch for small |aL|.

    Vectorized over ``a``; ``L`` may be scalar or matching array.  For
    Re(a) L > 0 the equivalent form exp(aL) (1 - exp(-aL))/a is used so no
    intermediate exceeds |exp(aL)|.
    """
    a = np.asarray(a, dtype=complex)
    L = np.asarray(L, dtype=float)
    z = a * L
    small = np.abs(z) <= SMALL_EXPONENT_TOL
    zs = np.where(small, z, 0.0)
    # 8-term Taylor of (e^z - 1)/z
    series = np.ones_like(zs)
    term = np.ones_like(zs)
    for k in range(2, 10):
        term = term * zs / k
        series = series + term
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.exp(z) - 1.0) / np.where(small, 1.0, a)
    return np.where(small, L * series, direct)


def _line_exp_shifted(a, L):
    """(integral_0^L exp(a t) dt) * exp(-max(Re a, 0) L), overflow-free.

    Returns (value, re_shift) with value = integral * exp(-re_shift) and
    re_shift = max(Re a, 0) * L, so integral = value * exp(re_shift).
    """
    a = np.asarray(a, dtype=complex)
    L = np.asarray(L, dtype=float)
    grow = a.real > 0
    a_eff = np.where(grow, -np.conj(a), a)  # reuse decaying branch: |e^{a_eff L}|<=1
    z = a_eff * L
    small = np.abs(z) <= SMALL_EXPONENT_TOL
    zs = np.where(small, z, 0.0)
    series = np.ones_like(zs)
    term = np.ones_like(zs)
    for k in range(2, 10):
        term = term * zs / k
        series = series + term
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.exp(z) - 1.0) / np.where(small, 1.0, a_eff)
    dec = np.where(small, L * series, direct)
    # integral for growing a: e^{Re(a)L} * conj(decaying integral of conj(a))
    val = np.where(grow, np.conj(dec) * np.exp(1j * a.imag * L), dec)
    shift = np.where(grow, a.real * L, 0.0)
    return val, shift


def segment_exp_integral(g, p0, p1, c=0.0):
    """integral over the segment p0 -> p1 of exp(i g . x - c) ds.

    ``g`` has shape (..., 2) complex; p0, p1 are 2-vectors; c broadcasts with
    the leading shape of g.  Intermediates stay bounded whenever
    Re(i g . x - c) <= 0 on the segment.
    """
    g = np.asarray(g, dtype=complex)
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    L = float(np.hypot(*(p1 - p0)))
    if L == 0.0:
        return np.zeros(g.shape[:-1], dtype=complex)
    u = (p1 - p0) / L
    a = 1j * (g[..., 0] * u[0] + g[..., 1] * u[1])
    base0 = 1j * (g[..., 0] * p0[0] + g[..., 1] * p0[1]) - c
    val, shift = _line_exp_shifted(a, L)
    return np.exp(base0 + shift) * val


def rect_exp_integral(g, rect, c=0.0):
    """integral over an axis-aligned rectangle of exp(i g . x - c) dA.

    ``rect = (x0, y0, x1, y1)``; tensor product of two 1D kernels.  With c
    chosen so the integrand is bounded on the rectangle, no intermediate
    overflows: each axis factor is anchored at its own growth corner.
    """
    g = np.asarray(g, dtype=complex)
    x0, y0, x1, y1 = (float(v) for v in rect)
    ax = 1j * g[..., 0]
    ay = 1j * g[..., 1]
    vx, sx = _line_exp_shifted(ax, x1 - x0)
    vy, sy = _line_exp_shifted(ay, y1 - y0)
    base = 1j * (g[..., 0] * x0 + g[..., 1] * y0) - c
    return np.exp(base + sx + sy) * vx * vy


def _polygon_small_g(g, vertices, c, tris=None):
    """Quadrature fallback for |g| diam <~ 1e-4: integrand is near-constant."""
    from ._gauss import polygon_rule

    pts, w = polygon_rule(vertices, 6, tris=tris)
    phase = 1j * (g[..., 0, None] * pts[:, 0] + g[..., 1, None] * pts[:, 1])
    return np.exp(phase - np.asarray(c, dtype=complex)[..., None]) @ w


def polygon_exp_integral(g, vertices, c=0.0, tris=None):
    """integral over a simple CCW polygon of exp(i g . x - c) dA.

    Uses div(w exp(i g.x)) = i (g.w) exp(i g.x) with the unit vector w
    maximizing |g.w| to reduce the area integral to boundary-edge kernels;
    for |g| diam below 1e-4 the reduction loses accuracy to cancellation and
    a fixed-order quadrature (exact to machine precision there) is used.
    """
    vertices = np.asarray(vertices, dtype=float)
    g = np.asarray(g, dtype=complex)
    scalar_in = g.ndim == 1
    g2 = np.atleast_2d(g.reshape(-1, 2))
    c2 = np.broadcast_to(np.asarray(c, dtype=complex), g.shape[:-1]).reshape(-1).copy() \
        if not np.isscalar(c) else np.full(g2.shape[0], c, dtype=complex)

    n = len(vertices)
    if n < 3:
        out = np.zeros(g2.shape[0], dtype=complex)
        return out[0] if scalar_in else out.reshape(g.shape[:-1])
    diam = max(np.ptp(vertices[:, 0]), np.ptp(vertices[:, 1]))
    gnorm = np.sqrt(np.abs(g2[:, 0]) ** 2 + np.abs(g2[:, 1]) ** 2)
    out = np.zeros(g2.shape[0], dtype=complex)

    small = gnorm * diam <= SMALL_EXPONENT_TOL
    if np.any(small):
        out[small] = _polygon_small_g(g2[small], vertices, c2[small], tris=tris)
    big = ~small
    if np.any(big):
        gb = g2[big]
        cb = c2[big]
        # unit w maximizing |g.w|^2 = w^T (Re g Re g^T + Im g Im g^T) w:
        # leading eigenvector of the 2x2 Gram matrix, in closed form.
        a = np.abs(gb[:, 0]) ** 2
        d = np.abs(gb[:, 1]) ** 2
        b = (gb[:, 0].real * gb[:, 1].real + gb[:, 0].imag * gb[:, 1].imag)
        theta = 0.5 * np.arctan2(2.0 * b, a - d)
        w = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        gw = gb[:, 0] * w[:, 0] + gb[:, 1] * w[:, 1]
        # fall back to the best axis if the eigenvector choice degenerates
        ax_best = np.where(np.abs(gb[:, 0]) >= np.abs(gb[:, 1]), 0, 1)
        gw_ax = np.take_along_axis(gb, ax_best[:, None], axis=1)[:, 0]
        use_ax = np.abs(gw) < np.abs(gw_ax)
        gw = np.where(use_ax, gw_ax, gw)
        w[use_ax] = np.eye(2)[ax_best[use_ax]]

        acc = np.zeros(gb.shape[0], dtype=complex)
        for k in range(n):
            p0 = vertices[k]
            p1 = vertices[(k + 1) % n]
            e = p1 - p0
            L = np.hypot(*e)
            if L == 0.0:
                continue
            nrm = np.array([e[1], -e[0]]) / L  # outward for CCW
            wn = w[:, 0] * nrm[0] + w[:, 1] * nrm[1]
            seg = segment_exp_integral(gb, p0, p1, cb)
            acc += wn * seg
        out[big] = acc / (1j * gw)
    return out[0] if scalar_in else out.reshape(g.shape[:-1])
