"""Gauss-Legendre quadrature rules on segments, rectangles and polygons."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .geometry import polygon_area

__all__ = ["gauss_1d", "segment_rule", "rect_rule", "triangle_rule",
           "polygon_rule", "cell_rule", "ear_clip", "quad_order"]


@lru_cache(maxsize=None)
def gauss_1d(n: int):
    x, w = np.polynomial.legendre.leggauss(int(n))
    return x, w


def quad_order(kappa: float, length: float, extra: int = 12) -> int:
    """Points per direction resolving exp(i kappa x) over the given length."""
    return int(np.ceil(kappa * length / 2.0)) + extra


def segment_rule(p0, p1, n: int):
    """Gauss points/weights on the segment p0 -> p1 (weights sum to length)."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    x, w = gauss_1d(n)
    t = 0.5 * (x + 1.0)
    pts = p0[None, :] + t[:, None] * (p1 - p0)[None, :]
    L = np.hypot(*(p1 - p0))
    return pts, 0.5 * L * w


def rect_rule(rect, nx: int, ny: int):
    x0, y0, x1, y1 = rect
    gx, wx = gauss_1d(nx)
    gy, wy = gauss_1d(ny)
    xs = x0 + 0.5 * (gx + 1.0) * (x1 - x0)
    ys = y0 + 0.5 * (gy + 1.0) * (y1 - y0)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    W = np.outer(wx, wy) * (0.25 * (x1 - x0) * (y1 - y0))
    return np.stack([X.ravel(), Y.ravel()], axis=-1), W.ravel()


def triangle_rule(a, b, c, n: int):
    """Tensor Gauss rule mapped to the triangle (Duffy transform)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    g, w = gauss_1d(n)
    u = 0.5 * (g + 1.0)
    wu = 0.5 * w
    U, V = np.meshgrid(u, u, indexing="ij")
    WU = np.outer(wu, wu)
    # x = a + v (b - a) + v u (c - b); jacobian = 2 area v
    pts = a[None, :] + V.ravel()[:, None] * (b - a)[None, :] \
        + (V * U).ravel()[:, None] * (c - b)[None, :]
    area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    wts = WU.ravel() * V.ravel() * area2
    return pts, wts


def _is_convex(v: np.ndarray) -> bool:
    n = len(v)
    sign = 0
    for k in range(n):
        a, b, c = v[k], v[(k + 1) % n], v[(k + 2) % n]
        cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cr) < 1e-14:
            continue
        s = 1 if cr > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def ear_clip(vertices: np.ndarray) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Triangulate a simple CCW polygon.

    Convex polygons are fanned from the centroid; otherwise standard ear
    clipping (O(n^2), fine for the small clipped-cell polygons here).
    """
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    if n < 3:
        return []
    if n == 3:
        return [(v[0], v[1], v[2])]
    if _is_convex(v):
        cen = v.mean(axis=0)
        return [(cen, v[k], v[(k + 1) % n]) for k in range(n)]

    idx = list(range(n))
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * n * n:
        guard += 1
        m = len(idx)
        clipped = False
        for kk in range(m):
            i0, i1, i2 = idx[kk - 1], idx[kk], idx[(kk + 1) % m]
            a, b, c = v[i0], v[i1], v[i2]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross <= 1e-15:
                continue
            # no remaining vertex strictly inside the candidate ear
            ok = True
            for jj in idx:
                if jj in (i0, i1, i2):
                    continue
                p = v[jj]
                w0 = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
                w1 = (c[0] - b[0]) * (p[1] - b[1]) - (c[1] - b[1]) * (p[0] - b[0])
                w2 = (a[0] - c[0]) * (p[1] - c[1]) - (a[1] - c[1]) * (p[0] - c[0])
                if w0 > 0 and w1 > 0 and w2 > 0:
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                idx.pop(kk)
                clipped = True
                break
        if not clipped:
            break  # degenerate input: fall through to centroid fan
    if len(idx) == 3:
        tris.append((v[idx[0]], v[idx[1]], v[idx[2]]))
    elif len(idx) > 3:
        cen = v.mean(axis=0)
        tris = [(cen, v[k], v[(k + 1) % n]) for k in range(n)]
    return tris


def polygon_rule(vertices, n: int, tris=None):
    """Quadrature on a simple CCW polygon via triangulation + Duffy rules."""
    if tris is None:
        tris = ear_clip(np.asarray(vertices, dtype=float))
    pts_all, w_all = [], []
    for a, b, c in tris:
        p, w = triangle_rule(a, b, c, n)
        pts_all.append(p)
        w_all.append(w)
    if not pts_all:
        return np.zeros((0, 2)), np.zeros(0)
    return np.concatenate(pts_all), np.concatenate(w_all)


def cell_rule(mesh, k: int, n: int):
    """Quadrature over the clipped cell k of the mesh."""
    if mesh.full[k]:
        return rect_rule(mesh.cell_rect(k), n, n)
    return polygon_rule(mesh.clipped[k], n)


def refined_corner_rect_rule(rect, corner, n: int, levels: int = 18):
    """Tensor rule on a rectangle, geometrically refined toward one corner.

    Used to integrate functions with an algebraic point singularity at a cell
    corner (e.g. fractional-order Bessel solutions) to near machine accuracy.
    """
    x0, y0, x1, y1 = rect
    cx = min(max(corner[0], x0), x1)
    cy = min(max(corner[1], y0), y1)

    def graded(lo, hi, away_from):
        # panel breakpoints accumulating at `away_from` (= singular coordinate)
        L = hi - lo
        fracs = [0.0] + [2.0 ** (-levels + k) for k in range(levels + 1)]
        if away_from <= lo + 1e-14 * L:
            return [lo + f * L for f in fracs]
        return [hi - f * L for f in fracs][::-1]

    xs = graded(x0, x1, cx)
    ys = graded(y0, y1, cy)
    pts_all, w_all = [], []
    for ax, bx in zip(xs[:-1], xs[1:]):
        for ay, by in zip(ys[:-1], ys[1:]):
            p, w = rect_rule((ax, ay, bx, by), n, n)
            pts_all.append(p)
            w_all.append(w)
    return np.concatenate(pts_all), np.concatenate(w_all)
