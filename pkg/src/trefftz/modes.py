"""Single-edge Helmholtz modes and the global edge/node wave bases.

The reference mode of index n on the rectangle (0, w) x (0, h) is the
separable Helmholtz solution

    sin(kappa nu x) * sin(kappa sqrt(1 - nu^2) y) / sin(kappa sqrt(1 - nu^2) h),
    nu = n pi / (kappa w),

whose Dirichlet trace is a sine on the top edge and zero on the other three.
For nu < 1 the mode is propagative, for nu > 1 evanescent, with the branch
sqrt(1 - nu^2) = i sqrt(nu^2 - 1).  Evanescent vertical factors are computed
from scaled exponential ratios, never from raw sinh quotients, so arbitrarily
deep decay evaluates without overflow.

Global basis functions are supported on the mesh cells adjacent to an edge
(or surrounding a node, with horizontally doubled base), extended by zero,
and expand on each cell into exactly four anchored plane waves
amp * exp(i kappa d . (x - x_a)) with d . d = 1.  Anchors are placed at the
cell corner where the wave is largest, so every stored amplitude is O(1) and
every exponential evaluated on the cell has non-positive real exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CartesianMesh, ResonanceError

GRAZING_TOL = 1e-12
RESONANCE_TOL = 1e-10

__all__ = [
    "ReferenceMode",
    "AnchoredEPW",
    "PiecewiseEPWMode",
    "reference_mode",
    "reference_mode_eval",
    "reference_mode_norm",
    "edge_basis",
    "node_basis",
    "epw_decompose",
    "evaluate",
    "evaluate_in_cell",
]


# ---------------------------------------------------------------------------
# Reference single-edge mode
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceMode:
    """Single-edge mode on the reference rectangle (0, h1_ref) x (0, h2_ref)."""

    n: int
    h1_ref: float
    h2_ref: float
    kappa: float
    nu: float
    s: float      # sqrt(|1 - nu^2|)
    kind: str     # "propagative" | "evanescent"

    @property
    def sin_denominator(self) -> complex:
        z = self.kappa * self.h2_ref * self.s
        if self.kind == "propagative":
            return complex(math.sin(z))
        return 1j * math.sinh(z) if z < 350 else 1j * math.inf


def reference_mode(n: int, h1_ref: float, h2_ref: float, kappa: float) -> ReferenceMode:
    """Construct the mode, rejecting resonant or grazing indices.

    Raises ResonanceError when the vertical denominator vanishes within
    tolerance (kappa^2 on the cell eigenvalue lattice) or when nu is within
    tolerance of 1 (degenerate square root).
    """
    if n < 1:
        raise ValueError("mode index must be >= 1")
    nu = n * math.pi / (kappa * h1_ref)
    if abs(nu - 1.0) <= GRAZING_TOL * max(1.0, kappa):
        raise ResonanceError(
            f"grazing mode: nu_{n} = {nu:.15g} within tolerance of 1 "
            f"(kappa^2 ~ ({n} pi/h1)^2)", family="grazing", n=n, nearest_m=0)
    if nu < 1.0:
        s = math.sqrt(1.0 - nu * nu)
        z = kappa * h2_ref * s
        m_near = round(z / math.pi)
        if abs(math.sin(z)) <= RESONANCE_TOL * max(1.0, kappa):
            raise ResonanceError(
                f"resonant propagative mode n={n}: sin(kappa h2 sqrt(1-nu^2)) ~ 0, "
                f"nearest lattice pair (n, m) = ({n}, {m_near})",
                family="propagative", n=n, nearest_m=m_near)
        kind = "propagative"
    else:
        s = math.sqrt(nu * nu - 1.0)
        z = kappa * h2_ref * s
        if abs(math.sinh(min(z, 50.0))) <= RESONANCE_TOL * max(1.0, kappa):
            raise ResonanceError(
                f"degenerate evanescent mode n={n}: sinh(kappa h2 sqrt(nu^2-1)) ~ 0",
                family="evanescent", n=n, nearest_m=0)
        kind = "evanescent"
    return ReferenceMode(n, h1_ref, h2_ref, kappa, nu, s, kind)


def _vertical_factor(mode: ReferenceMode, y, order: int):
    """d^order/dy^order of sin(kappa sqrt(1-nu^2) y)/sin(kappa sqrt(1-nu^2) h2).

    Evanescent ratios sinh/sinh and cosh/sinh are evaluated as
    exp(a (y - h2)) (1 -+ exp(-2 a y)) / (1 - exp(-2 a h2)),  a = kappa s,
    which stays in range for arbitrarily large a.
    """
    y = np.asarray(y, dtype=float)
    k, s, h2 = mode.kappa, mode.s, mode.h2_ref
    if mode.kind == "propagative":
        return (k * s) ** order * np.sin(k * s * y + order * math.pi / 2) / math.sin(k * s * h2)
    a = k * s
    den = -np.expm1(-2.0 * a * h2)  # 1 - exp(-2 a h2)
    sign = -np.expm1(-2.0 * a * y) if order % 2 == 0 else 1.0 + np.exp(-2.0 * a * y)
    return (a ** order) * np.exp(a * (y - h2)) * sign / den


def reference_mode_eval(mode: ReferenceMode, x, y, dx: int = 0, dy: int = 0):
    """Partial derivative d^dx_x d^dy_y of the reference mode at (x, y)."""
    x = np.asarray(x, dtype=float)
    k, nu = mode.kappa, mode.nu
    horiz = (k * nu) ** dx * np.sin(k * nu * x + dx * math.pi / 2)
    return horiz * _vertical_factor(mode, y, dy)


def _dist_to_pi_lattice(z: float) -> float:
    m = max(round(z / math.pi), 0)
    return min(abs(z - mm * math.pi) for mm in (max(m - 1, 0), m, m + 1))


def reference_mode_norm(mode: ReferenceMode, M: int) -> tuple[float, float]:
    """Exact squared H^M_kappa(K) norm of the mode, and its a-priori bound.

    The exact value is the closed double sum over derivative orders
    (l, j), 0 <= j <= l <= M, of the separable factors

        (h1 h2 / 4) nu^{2j} |1 - nu^2|^{l-j} T_{l-j},

    with T_k = |cot(z)/z - (-1)^k / sin^2(z)| at z = kappa h2 sqrt(1-nu^2)
    (hyperbolic counterparts for evanescent modes).  The second return value
    is the corresponding closed-form upper bound, whose propagative branch
    uses the distance from sqrt(1-nu_n^2) to the m pi/(kappa h2) lattice over
    all propagative n of this reference cell.
    """
    k, h1, h2, nu, s = mode.kappa, mode.h1_ref, mode.h2_ref, mode.nu, mode.s
    T = np.empty(M + 1)
    if mode.kind == "propagative":
        z = k * h2 * s
        cot = math.cos(z) / math.sin(z)
        inv_sin2 = 1.0 / math.sin(z) ** 2
        for kk in range(M + 1):
            T[kk] = abs(cot / z - (-1) ** kk * inv_sin2)
    else:
        a = k * h2 * s
        e = math.exp(-2.0 * a)
        coth = (1.0 + e) / (1.0 - e)
        inv_sinh2 = 4.0 * e / (1.0 - e) ** 2
        for kk in range(M + 1):
            T[kk] = abs(coth / a - (-1) ** kk * inv_sinh2)
    total = 0.0
    w = abs(1.0 - nu * nu)
    for ell in range(M + 1):
        for j in range(ell + 1):
            total += nu ** (2 * j) * w ** (ell - j) * T[ell - j]
    exact = (h1 * h2 / 4.0) * total

    if mode.kind == "propagative":
        d_hat = math.inf
        n = 1
        while n * math.pi / (k * h1) < 1.0:
            sn = math.sqrt(1.0 - (n * math.pi / (k * h1)) ** 2)
            d_hat = min(d_hat, _dist_to_pi_lattice(k * h2 * sn) / (k * h2))
            n += 1
        bound = h1 * math.pi ** 2 * (M + 1) ** 2 / (8.0 * k ** 2 * h2 * d_hat ** 2)
    else:
        bound = h1 * (M + 1) ** 2 * nu ** (2 * M) / (2.0 * k * math.tanh(k * h2) * s)
    return exact, bound


# ---------------------------------------------------------------------------
# Anchored plane-wave expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnchoredEPW:
    """amp * exp(i kappa d . (x - anchor)) with complex direction d, d.d = 1."""

    direction: tuple
    amplitude: complex
    anchor: tuple


@dataclass
class PiecewiseEPWMode:
    """Cell-wise finite sums of anchored plane waves, zero off their support.

    ``terms[k] = (D, A, X0)`` holds per-cell arrays of directions (T, 2)
    complex, amplitudes (T,) complex, and anchors (T, 2); the function is
    sum_t A[t] exp(i kappa D[t] . (x - X0[t])) on cell k and 0 elsewhere.
    """

    mesh: CartesianMesh
    kappa: float
    terms: dict

    @property
    def support(self):
        return frozenset(self.terms)


def _mode_cell_terms(kappa: float, nu: float, kind: str, s: float,
                     edge_anchor, height: float, upper: bool, cell_rect):
    """Four-term plane-wave expansion of a horizontally traced mode on a cell.

    The mode has trace sin(kappa nu (x - xs)) on the line y = ys
    (``edge_anchor = (xs, ys)``) and vanishes at depth ``height`` on the other
    side; ``upper`` selects the cell above or below the line.  Anchors are
    the corners of ``cell_rect`` maximizing each wave's magnitude.
    """
    xs, ys = edge_anchor
    x0, y0, x1, y1 = cell_rect
    sgn = 1.0 if upper else -1.0
    ref = np.array([xs, ys + sgn * height])
    if kind == "propagative":
        S = complex(s)
        inv_sin = 1.0 / math.sin(kappa * height * s)
    else:
        S = 1j * s

    D = np.empty((4, 2), dtype=complex)
    A = np.empty(4, dtype=complex)
    X0 = np.empty((4, 2))
    t = 0
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            d = np.array([s1 * nu, s2 * S], dtype=complex)
            # anchor at the cell corner maximizing Re(i kappa d . x)
            ax = x1 if (1j * kappa * d[0]).real > 0 else x0
            ay = y1 if (1j * kappa * d[1]).real > 0 else y0
            xa = np.array([ax, ay])
            phase = 1j * kappa * (d[0] * (xa[0] - ref[0]) + d[1] * (xa[1] - ref[1]))
            if kind == "propagative":
                amp = sgn * s1 * s2 * 0.25 * inv_sin * np.exp(phase)
            else:
                a = kappa * height * s
                # 1/sin(i a) = -i / sinh(a); fold exp(-a) into the phase
                amp = sgn * s1 * s2 * 0.25 * (-1j) * 2.0 \
                    * np.exp(phase - a) / -np.expm1(-2.0 * a)
            D[t] = d
            A[t] = amp
            X0[t] = xa
            t += 1
    return D, A, X0


def _swap_xy_terms(D, A, X0):
    return D[:, ::-1].copy(), A.copy(), X0[:, ::-1].copy()


def edge_basis(mesh: CartesianMesh, edge_idx: int, n: int, kappa: float) -> PiecewiseEPWMode:
    """Basis function of index n attached to a skeleton edge.

    Supported on the (up to two) cells adjacent to the edge; its trace on the
    edge is sin(n pi t / len) in arclength t, and it vanishes on the rest of
    the support boundary and at every mesh node.
    """
    edge = mesh.edges[edge_idx]
    h1, h2 = mesh.h1, mesh.h2
    if edge.orientation == "horizontal":
        m = reference_mode(n, h1, h2, kappa)  # resonance check
        terms = {}
        for cell, upper in ((edge.cell_plus, True), (edge.cell_minus, False)):
            if cell is None:
                continue
            terms[cell] = _mode_cell_terms(kappa, m.nu, m.kind, m.s, edge.anchor,
                                           h2, upper, mesh.cell_rect(cell))
    else:
        m = reference_mode(n, h2, h1, kappa)
        terms = {}
        for cell, upper in ((edge.cell_plus, True), (edge.cell_minus, False)):
            if cell is None:
                continue
            x0, y0, x1, y1 = mesh.cell_rect(cell)
            D, A, X0 = _mode_cell_terms(kappa, m.nu, m.kind, m.s,
                                        (edge.anchor[1], edge.anchor[0]),
                                        h1, upper, (y0, x0, y1, x1))
            terms[cell] = _swap_xy_terms(D, A, X0)
    return PiecewiseEPWMode(mesh, kappa, terms)


def node_basis(mesh: CartesianMesh, node_idx: int, m: int, kappa: float) -> PiecewiseEPWMode:
    """Basis function of index m attached to a mesh node.

    Same construction as a horizontal edge function with doubled base 2*h1
    and odd index 2m-1, centered at the node: supported on the up-to-four
    surrounding cells, value (-1)^(m-1) at the node, zero at all other nodes.
    """
    node = mesh.nodes[node_idx]
    h1, h2 = mesh.h1, mesh.h2
    ref = reference_mode(2 * m - 1, 2 * h1, h2, kappa)
    xs = node.coords[0] - h1
    ys = node.coords[1]
    terms = {}
    for cell in node.cells:
        ci, cj = mesh.cells[cell]
        upper = cj >= node.j  # cells above the node line use the upper branch
        terms[cell] = _mode_cell_terms(kappa, ref.nu, ref.kind, ref.s, (xs, ys),
                                       h2, upper, mesh.cell_rect(cell))
    return PiecewiseEPWMode(mesh, kappa, terms)


def epw_decompose(mode: PiecewiseEPWMode, cell: int) -> list[AnchoredEPW]:
    """The four anchored plane waves representing the mode on one cell."""
    D, A, X0 = mode.terms[cell]
    return [AnchoredEPW(tuple(D[t]), complex(A[t]), tuple(X0[t]))
            for t in range(len(A))]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

MAX_DERIVATIVE_ORDER = 8


def _eval_terms(kappa, D, A, X0, pts, alpha=(0, 0), weights=None):
    """sum_t w_t A_t (i k d1)^a1 (i k d2)^a2 exp(i k d . (x - x0_t)) at pts."""
    phase = 1j * kappa * ((pts[:, None, 0] - X0[None, :, 0]) * D[None, :, 0]
                          + (pts[:, None, 1] - X0[None, :, 1]) * D[None, :, 1])
    vals = np.exp(phase)
    fac = (1j * kappa * D[:, 0]) ** alpha[0] * (1j * kappa * D[:, 1]) ** alpha[1]
    amp = A * fac if weights is None else A * fac * weights
    return vals @ amp


def evaluate_in_cell(f: PiecewiseEPWMode, cell: int, points, alpha=(0, 0)):
    """One-sided evaluation using the expansion of a specific support cell."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    D, A, X0 = f.terms[cell]
    return _eval_terms(f.kappa, D, A, X0, pts, alpha)


def evaluate(f: PiecewiseEPWMode, points, alpha=(0, 0)):
    """Evaluate d^alpha f at points; zero outside the support.

    Points on shared interfaces of the support may be evaluated from either
    side (the modes are continuous); the first support cell whose closure
    contains the point is used.
    """
    if sum(alpha) > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order capped at {MAX_DERIVATIVE_ORDER}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.zeros(len(pts), dtype=complex)
    by_cell: dict[int, list[int]] = {}
    for idx, (x, y) in enumerate(pts):
        for c in f.mesh.cells_at_point(x, y):
            if c in f.terms:
                by_cell.setdefault(c, []).append(idx)
                break
    for c, idxs in by_cell.items():
        D, A, X0 = f.terms[c]
        out[idxs] = _eval_terms(f.kappa, D, A, X0, pts[idxs], alpha)
    if np.isscalar(points[0]) and np.asarray(points).ndim == 1:
        return out[0]
    return out
