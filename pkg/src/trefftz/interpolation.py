"""Interpolation operators and explicit constants of the error analysis.

Four operators act on Helmholtz solutions supplied through a small oracle
protocol (``value``/``gradient`` everywhere, plus ``dx_even`` for the even
x-derivatives the nodal collocation needs):

* local projection onto the first Ne single-edge modes of a reference cell,
  in the kappa-weighted H^1 inner product (quadrature-based);
* global edge interpolant: per-edge L^2 trace coefficients against the sine
  traces, which are orthogonal with squared norm len/2;
* nodal collocation: per node, an N x N shifted-Vandermonde system matching
  the even x-derivatives of the target; solved through the diagonal scaling
  that reduces it to the fixed unit-parameter matrix;
* combined interpolant: collocation first, edge interpolation of the
  remainder.

The explicit inverse-norm formula for the collocation matrix and the
constants entering the a-priori error bound are also provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._gauss import gauss_1d, quad_order, segment_rule
from .assembly import DiscreteSpace
from .geometry import CartesianMesh, node_lattice_distances
from .modes import (PiecewiseEPWMode, evaluate, reference_mode,
                    reference_mode_eval, reference_mode_norm)

__all__ = ["LocalProjection", "local_projection", "edge_interpolant",
           "collocation_matrix", "collocation_solve", "vandermonde_inverse_norm",
           "binomial_transfer_matrix", "combined_interpolant", "interpolant_function",
           "TheoryConstants", "theory_constants", "PreAsymptoticError", "chi_bound"]


class PreAsymptoticError(Exception):
    """Requested bound outside the asymptotic regime nu_Ne >= sqrt(2)."""


# ---------------------------------------------------------------------------
# Local projection on the reference cell
# ---------------------------------------------------------------------------


@dataclass
class LocalProjection:
    """Projection of a field onto span of the first Ne reference modes."""

    modes: list
    coefficients: np.ndarray
    kappa: float

    def value(self, x, y, dx: int = 0, dy: int = 0):
        x = np.asarray(x, dtype=float)
        out = np.zeros(np.broadcast(x, np.asarray(y)).shape, dtype=complex)
        for c, m in zip(self.coefficients, self.modes):
            out = out + c * reference_mode_eval(m, x, y, dx, dy)
        return out


def local_projection(u, kappa: float, h1_ref: float, h2_ref: float,
                     Ne: int) -> LocalProjection:
    """H^1_kappa-orthogonal projection onto the first Ne single-edge modes.

    Coefficients are (u, phi_n)_{H^1_kappa} / ||phi_n||^2_{H^1_kappa}; the
    modes are orthogonal, so the projection is diagonal.  Inner products are
    computed by tensor Gauss quadrature with composite panels in the vertical
    direction (evanescent modes concentrate in a boundary layer at the top).
    """
    modes = [reference_mode(n, h1_ref, h2_ref, kappa) for n in range(1, Ne + 1)]
    freq = max(kappa, math.pi * Ne / h1_ref)
    xs, wxs, ys_pan, wys_pan = _composite_vertical_rule(h1_ref, h2_ref, freq)
    X, Y = np.meshgrid(xs, ys_pan, indexing="ij")
    W = np.outer(wxs, wys_pan)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    uv = u.value(pts).reshape(X.shape)
    ug = u.gradient(pts)
    ux = ug[:, 0].reshape(X.shape)
    uy = ug[:, 1].reshape(X.shape)
    coeffs = np.empty(Ne, dtype=complex)
    for i, m in enumerate(modes):
        pv = reference_mode_eval(m, X, Y)
        px = reference_mode_eval(m, X, Y, 1, 0)
        py = reference_mode_eval(m, X, Y, 0, 1)
        num = np.sum(W * (uv * pv + (ux * px + uy * py) / kappa ** 2))
        norm_sq, _ = reference_mode_norm(m, 1)
        coeffs[i] = num / norm_sq
    return LocalProjection(modes, coeffs, kappa)


def _composite_vertical_rule(h1_ref, h2_ref, freq, panels=8, n_extra=12):
    """Tensor rule with geometric vertical panels toward the traced edge."""
    nx = quad_order(freq, h1_ref, n_extra)
    gx, wx = gauss_1d(nx)
    xs = 0.5 * (gx + 1.0) * h1_ref
    wxs = 0.5 * h1_ref * wx
    breaks = [h2_ref]
    for _ in range(panels):
        breaks.append(breaks[-1] / 2.0)
    breaks.append(0.0)
    breaks = breaks[::-1]
    ny = max(quad_order(freq, h2_ref, n_extra) // 2, 16)
    gy, wy = gauss_1d(ny)
    ys, wys = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        ys.append(a + 0.5 * (gy + 1.0) * (b - a))
        wys.append(0.5 * (b - a) * wy)
    return xs, wxs, np.concatenate(ys), np.concatenate(wys)


# ---------------------------------------------------------------------------
# Edge interpolant
# ---------------------------------------------------------------------------


def edge_interpolant(u, space: DiscreteSpace) -> np.ndarray:
    """Per-edge trace coefficients (u, phi_{s,n})_{L2(s)} / (len(s)/2).

    Returns the edge-dof part of the coefficient vector (node dofs, if any,
    are untouched by this operator and set to zero).
    """
    mesh = space.mesh
    kappa = space.kappa
    alpha = np.zeros(space.n_dofs, dtype=complex)
    for e_idx, edge in enumerate(mesh.edges):
        if edge.orientation == "horizontal":
            p0 = np.array(edge.anchor)
            p1 = p0 + np.array([mesh.h1, 0.0])
        else:
            p0 = np.array(edge.anchor)
            p1 = p0 + np.array([0.0, mesh.h2])
        L = float(np.hypot(*(p1 - p0)))
        freq = max(kappa, math.pi * space.Ne / L)
        pts, w = segment_rule(p0, p1, quad_order(freq, L))
        s = np.hypot(pts[:, 0] - p0[0], pts[:, 1] - p0[1])
        uv = u.value(pts)
        for n in range(1, space.Ne + 1):
            nu = n * math.pi / (kappa * L)
            trace = np.sin(kappa * nu * s)
            alpha[space.dof_index("edge", e_idx, n)] = (w * uv) @ trace / (L / 2.0)
    return alpha


# ---------------------------------------------------------------------------
# Nodal collocation
# ---------------------------------------------------------------------------


def _nu_tilde(m: np.ndarray, kappa_h1: float) -> np.ndarray:
    return (2 * m - 1) * math.pi / (2.0 * kappa_h1)


def collocation_matrix(N: int, kappa_h1: float) -> np.ndarray:
    """N x N matrix A_{nm} = (-1)^{n+m} nu_m^{2(n-1)}, nu_m = (2m-1)pi/(2 kappa h1)."""
    n = np.arange(1, N + 1)[:, None]
    m = np.arange(1, N + 1)[None, :]
    nu = _nu_tilde(m, kappa_h1)
    return (-1.0) ** (n + m) * nu ** (2 * (n - 1))


def _vandermonde_like_inverse(nodes: np.ndarray) -> np.ndarray:
    """Inverse of V_{nm} = x_m^{n-1} via Lagrange interpolation coefficients."""
    N = len(nodes)
    inv = np.zeros((N, N))
    for mth in range(N):
        # coefficients of prod_{k != m} (t - x_k) / (x_m - x_k) in powers of t
        c = np.array([1.0])
        denom = 1.0
        for k in range(N):
            if k == mth:
                continue
            c = np.convolve(c, np.array([-nodes[k], 1.0]))
            denom *= nodes[mth] - nodes[k]
        inv[mth, :] = c / denom
    return inv


def collocation_solve(u, mesh: CartesianMesh, N: int, kappa: float) -> np.ndarray:
    """Coefficients beta matching the even x-derivatives of u at every node.

    Per node q the system A beta_q = b_q holds with
    b_q[n] = (kappa^{-1} d/dx)^{2(n-1)} u(q).  It is solved in the diagonally
    scaled form: scaling row n by (kappa h1)^{2(n-1)} turns A into the fixed
    unit-parameter matrix, whose conditioning is controlled.  For N <= 4 the
    scaled matrix is inverted explicitly through Lagrange coefficients,
    otherwise a pivoted dense solve is used.

    Returns beta with shape (n_nodes, N).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    kh1 = kappa * mesh.h1
    nodes_sq = _nu_tilde(np.arange(1, N + 1), 1.0) ** 2  # (kappa h1 = 1 scaling)
    if np.max(nodes_sq) ** max(N - 1, 1) > 1e300:
        raise ValueError("collocation order too large: scaled nodes overflow")
    KA = collocation_matrix(N, 1.0)
    if N <= 4:
        signs_n = (-1.0) ** np.arange(1, N + 1)
        V_inv = _vandermonde_like_inverse(nodes_sq)
        KA_inv = np.diag(signs_n) @ V_inv.T @ np.diag(signs_n)
        solve = lambda rhs: KA_inv @ rhs
    else:
        solve = lambda rhs: np.linalg.solve(KA, rhs)
    scale = kh1 ** (2 * np.arange(N))
    coords = np.array([nd.coords for nd in mesh.nodes])
    b = np.stack([u.dx_even(coords, n) for n in range(N)], axis=-1)  # (nodes, N)
    beta = np.empty_like(b)
    for q in range(len(coords)):
        beta[q] = solve(scale * b[q])
    return beta


def vandermonde_inverse_norm(N: int, kappa_h1: float) -> float:
    """Closed-form infinity norm of the inverse collocation matrix.

    max over n of prod_{m != n} (1 + nu_m^2) / |nu_n^2 - nu_m^2|, evaluated
    exactly as written.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    nu2 = _nu_tilde(np.arange(1, N + 1), kappa_h1) ** 2
    best = 0.0
    for n in range(N):
        prod = 1.0
        for m in range(N):
            if m == n:
                continue
            prod *= (1.0 + nu2[m]) / abs(nu2[n] - nu2[m])
        best = max(best, prod)
    return best


def binomial_transfer_matrix(N: int) -> np.ndarray:
    """Lower-triangular L with L[n, m] = (-1)^n C(n, m), 0 <= m <= n < N.

    For any Helmholtz solution the stacks of even x- and y-derivatives
    (scaled by kappa^{-2n}) satisfy b_x = L b_y.
    """
    L = np.zeros((N, N))
    for n in range(N):
        for m in range(n + 1):
            L[n, m] = (-1.0) ** n * math.comb(n, m)
    return L


# ---------------------------------------------------------------------------
# Combined interpolant
# ---------------------------------------------------------------------------


def interpolant_function(space: DiscreteSpace, alpha: np.ndarray,
                         beta: np.ndarray) -> PiecewiseEPWMode:
    """Assemble the discrete function with edge part alpha and node part beta."""
    xi = np.array(alpha, dtype=complex)
    Nn_used = beta.shape[1] if beta.size else 0
    for p in range(space.mesh.n_nodes):
        for m in range(1, Nn_used + 1):
            xi[space.dof_index("node", p, m)] = beta[p, m - 1]
    return space.solution(xi)


class _ShiftedField:
    """value/gradient of u minus a piecewise plane-wave function."""

    def __init__(self, u, v: PiecewiseEPWMode):
        self.u = u
        self.v = v

    def value(self, pts):
        return self.u.value(pts) - evaluate(self.v, pts)

    def gradient(self, pts):
        g = self.u.gradient(pts)
        gx = evaluate(self.v, pts, (1, 0))
        gy = evaluate(self.v, pts, (0, 1))
        return np.stack([g[:, 0] - gx, g[:, 1] - gy], axis=-1)


def combined_interpolant(u, space: DiscreteSpace, N: int):
    """Collocation followed by edge interpolation of the remainder.

    Returns (alpha, beta): beta solves the nodal collocation system of order
    N (which must not exceed the space's node count), and alpha carries the
    edge trace coefficients of u minus the collocated part.
    """
    if N > space.Nn:
        raise ValueError("collocation order exceeds the node parameter")
    mesh = space.mesh
    beta = collocation_solve(u, mesh, N, space.kappa) if N >= 1 \
        else np.zeros((mesh.n_nodes, 0), dtype=complex)
    if N >= 1:
        node_part = interpolant_function(space, np.zeros(space.n_dofs), beta)
        remainder = _ShiftedField(u, node_part)
    else:
        remainder = u
    alpha = edge_interpolant(remainder, space)
    return alpha, beta


# ---------------------------------------------------------------------------
# Explicit constants of the error bound
# ---------------------------------------------------------------------------


def chi_bound(N: int, kappa_h: float, rho: float) -> float:
    """min(rho e^{kappa h}/(kappa h), e max(1, kappa h)^{2(N-1)})."""
    first = rho * math.exp(min(kappa_h, 700.0)) / kappa_h
    second = math.e * max(1.0, kappa_h) ** (2 * (N - 1))
    return min(first, second)


@dataclass(frozen=True)
class TheoryConstants:
    """Explicit constants entering the a-priori interpolation bound."""

    C1: float
    C2: float
    C3: float
    chi_N: float
    nu_Ne: float
    mu: int
    N: int
    d_tilde: float
    d_tilde0: float


def theory_constants(kappa: float, mesh: CartesianMesh, Ne: int, Nn: int,
                     M: int) -> tuple[TheoryConstants, dict]:
    """Constants and the full right-hand-side factor of the error bound.

    The bound reads, for r in {0, 1} and mu = min(2 Nn, M), N = ceil(mu/2):

        C1 [1 + C2 chi_N (mu+2) (N + C3 N^{3/2} (pi rho N / (kappa h))^{mu+1/2})]
           * nu_Ne^{r - (mu + 1/2)}  * ||u||_{H^{mu+1}_kappa}.

    The returned dict maps r to the factor multiplying the Sobolev norm.
    Raises PreAsymptoticError when nu_Ne = Ne pi/(kappa h) < sqrt(2): the
    estimate only holds past the onset of the asymptotic regime.
    """
    h, rho = mesh.h, mesh.rho
    kh = kappa * h
    nu_Ne = Ne * math.pi / kh
    if nu_Ne < math.sqrt(2.0):
        raise PreAsymptoticError(
            f"nu_Ne = {nu_Ne:.3f} < sqrt(2): pre-asymptotic regime, "
            f"increase Ne beyond {math.sqrt(2.0) * kh / math.pi:.1f}")
    mu = min(2 * Nn, M)
    N = (mu + 1) // 2 if mu % 2 else mu // 2
    d_t, d_t0 = node_lattice_distances(kappa, mesh.h1, mesh.h2)
    C1 = 8.0 * math.sqrt(rho) * max(1.0, kh) / math.sqrt(kh * math.tanh(kh / rho))
    C2 = 2.0 * math.pi * mesh.n_nodes * rho ** 1.5 * max(1.0, kh) ** 2 \
        / (math.sqrt(2.0) * kh * d_t)
    C3 = 2.0 * d_t / math.sqrt(math.pi * rho * math.tanh(kh / rho) * d_t0)
    chi = chi_bound(N, kh, rho)
    bracket = 1.0 + C2 * chi * (mu + 2) * (N + C3 * N ** 1.5
                                           * (math.pi * rho * N / kh) ** (mu + 0.5))
    factors = {r: C1 * bracket * nu_Ne ** (r - (mu + 0.5)) for r in (0, 1)}
    tc = TheoryConstants(C1, C2, C3, chi, nu_Ne, mu, N, d_t, d_t0)
    return tc, factors
