"""Discrete spaces and closed-form assembly of the Galerkin system.

The variational problem is: find u with

    a(u, v) = integral_Omega (grad u . grad conj(v) - kappa^2 u conj(v))
              - i kappa integral_dOmega u conj(v)
            = integral_dOmega g conj(v)   for all test v,

discretized with the edge/node wave basis as trial space and the same family
with doubled parameters as (oversampled) test space.  Because every basis
function is a four-term sum of anchored plane waves on each cell, every
matrix entry reduces to closed-form exponential integrals over the clipped
cells and over the boundary pieces inside them; no quadrature is involved in
the matrix.  The right-hand side integrates the boundary data by Gauss
quadrature (scaled with kappa times the segment length) and adds optional
point sources evaluated against the conjugated test functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import modes as _modes
from ._gauss import quad_order, segment_rule
from .geometry import CartesianMesh
from .integrals import polygon_exp_integral, rect_exp_integral, segment_exp_integral
from .modes import PiecewiseEPWMode

__all__ = ["DiscreteSpace", "GalerkinSystem", "build_space", "assemble",
           "assemble_h1_gram", "h1_projection_rhs", "sesquilinear_entry"]


@dataclass
class DiscreteSpace:
    """Enumerated edge/node basis for parameters (Ne, Nn) over a mesh.

    Degrees of freedom are ordered edge-major: for each skeleton edge (in
    mesh order) the indices n = 1..Ne, then for each node m = 1..Nn.
    ``cell_terms[k]`` packs, for every dof supported on cell k, its four
    plane-wave terms: (dof ids (T,), directions (T, 2), amplitudes (T,),
    anchors (T, 2)) with T = 4 * (#dofs on the cell).
    """

    mesh: CartesianMesh
    kappa: float
    Ne: int
    Nn: int
    dofs: list = field(default_factory=list)
    cell_terms: dict = field(default_factory=dict)

    @property
    def n_dofs(self) -> int:
        return len(self.dofs)

    @property
    def n_edge_dofs(self) -> int:
        return self.Ne * self.mesh.n_edges

    def dof_index(self, kind: str, entity: int, n: int) -> int:
        if kind == "edge":
            return entity * self.Ne + (n - 1)
        return self.n_edge_dofs + entity * self.Nn + (n - 1)

    def basis_function(self, dof: int) -> PiecewiseEPWMode:
        kind, entity, n = self.dofs[dof]
        if kind == "edge":
            return _modes.edge_basis(self.mesh, entity, n, self.kappa)
        return _modes.node_basis(self.mesh, entity, n, self.kappa)

    def solution(self, coefficients: np.ndarray) -> PiecewiseEPWMode:
        """The member of the space with the given coefficient vector."""
        xi = np.asarray(coefficients, dtype=complex)
        if len(xi) != self.n_dofs:
            raise ValueError("coefficient length does not match dof count")
        terms = {}
        for k, (ids, D, A, X0) in self.cell_terms.items():
            w = xi[ids] * A
            keep = slice(None)
            terms[k] = (D[keep].copy(), w, X0[keep].copy())
        return PiecewiseEPWMode(self.mesh, self.kappa, terms)


def build_space(mesh: CartesianMesh, kappa: float, Ne: int, Nn: int) -> DiscreteSpace:
    """Enumerate the basis and precompute per-cell plane-wave term tables.

    Raises ResonanceError (from the mode constructors) when any requested
    family hits an eigenvalue of its reference cell: the assembler refuses to
    build a degenerate basis rather than silently perturbing the mesh.
    """
    if Ne < 0 or Nn < 0 or (Ne == 0 and Nn == 0):
        raise ValueError("need Ne >= 1 or Nn >= 1")
    space = DiscreteSpace(mesh, kappa, Ne, Nn)
    per_cell: dict[int, list] = {k: [] for k in range(mesh.n_cells)}
    for e_idx in range(mesh.n_edges):
        for n in range(1, Ne + 1):
            space.dofs.append(("edge", e_idx, n))
    for p_idx in range(mesh.n_nodes):
        for m in range(1, Nn + 1):
            space.dofs.append(("node", p_idx, m))
    for dof, (kind, entity, n) in enumerate(space.dofs):
        f = (_modes.edge_basis(mesh, entity, n, kappa) if kind == "edge"
             else _modes.node_basis(mesh, entity, n, kappa))
        for c, (D, A, X0) in f.terms.items():
            per_cell[c].append((dof, D, A, X0))
    for c, items in per_cell.items():
        if not items:
            continue
        ids = np.repeat([it[0] for it in items], 4)
        D = np.concatenate([it[1] for it in items])
        A = np.concatenate([it[2] for it in items])
        X0 = np.concatenate([it[3] for it in items])
        space.cell_terms[c] = (ids, D, A, X0)
    return space


@dataclass
class GalerkinSystem:
    """Dense rectangular system: rows = test dofs, columns = trial dofs."""

    matrix: np.ndarray
    rhs: np.ndarray
    trial: DiscreteSpace
    test: DiscreteSpace


def space_frequency(space: DiscreteSpace) -> float:
    """Largest spatial frequency (rad/length) carried by the basis.

    Edge traces oscillate at n pi / len and evanescent modes decay at rates
    bounded by the same quantity, so quadrature orders must scale with this
    rather than with kappa alone.
    """
    mesh = space.mesh
    freq = space.kappa
    if space.Ne >= 1:
        freq = max(freq, math.pi * space.Ne / min(mesh.h1, mesh.h2))
    if space.Nn >= 1:
        freq = max(freq, math.pi * (2 * space.Nn - 1) / (2 * mesh.h1))
    return freq


# ---------------------------------------------------------------------------
# Pairwise closed-form blocks
# ---------------------------------------------------------------------------


def _pair_block(kappa, Dt, At, Xt, Ds, As, Xs, volume_kind, rect, full, poly,
                segments, tris=None):
    """(S, T) matrix of a(t_j, s_i) contributions from one cell.

    volume_kind selects the integrand factor: "helmholtz" uses
    kappa^2 (d_t . conj(d_s) - 1) and adds the -i kappa boundary term over
    ``segments``; "h1" uses (1 + d_t . conj(d_s)) with no boundary term (the
    kappa-weighted H^1 inner product).
    """
    g = kappa * (Dt[None, :, :] - np.conj(Ds)[:, None, :])
    # shift c makes exp(i g . x - c) the exact (bounded) product of the two
    # anchored waves divided by their amplitudes
    c = 1j * kappa * (Dt[:, 0] * Xt[:, 0] + Dt[:, 1] * Xt[:, 1])[None, :] \
        - 1j * kappa * np.conj(Ds[:, 0] * Xs[:, 0] + Ds[:, 1] * Xs[:, 1])[:, None]
    dot = (np.conj(Ds[:, 0])[:, None] * Dt[None, :, 0]
           + np.conj(Ds[:, 1])[:, None] * Dt[None, :, 1])
    amp = np.conj(As)[:, None] * At[None, :]
    if full:
        vol = rect_exp_integral(g, rect, c)
    else:
        vol = polygon_exp_integral(g, poly, c, tris=tris)
    if volume_kind == "helmholtz":
        block = (kappa ** 2) * (dot - 1.0) * amp * vol
        for p0, p1 in segments:
            block = block - 1j * kappa * amp * segment_exp_integral(g, p0, p1, c)
    else:
        block = (1.0 + dot) * amp * vol
    return block


def _assemble_bilinear(trial: DiscreteSpace, test: DiscreteSpace, volume_kind: str):
    mesh = trial.mesh
    kappa = trial.kappa
    A = np.zeros((test.n_dofs, trial.n_dofs), dtype=complex)
    for k in range(mesh.n_cells):
        if k not in trial.cell_terms or k not in test.cell_terms:
            continue
        ids_t, Dt, At, Xt = trial.cell_terms[k]
        ids_s, Ds, As, Xs = test.cell_terms[k]
        block = _pair_block(kappa, Dt, At, Xt, Ds, As, Xs, volume_kind,
                            mesh.cell_rect(k), mesh.full[k], mesh.clipped[k],
                            mesh.boundary_segments[k])
        nt = len(ids_t) // 4
        ns = len(ids_s) // 4
        dof_block = block.reshape(ns, 4, nt, 4).sum(axis=(1, 3))
        rows = ids_s.reshape(ns, 4)[:, 0]
        cols = ids_t.reshape(nt, 4)[:, 0]
        A[np.ix_(rows, cols)] += dof_block
    return A


def _eval_space_at(space: DiscreteSpace, cell: int, pts: np.ndarray,
                   alpha=(0, 0)) -> tuple[np.ndarray, np.ndarray]:
    """Values of every dof supported on a cell at given points.

    Returns (dof ids (n,), values (npts, n)).
    """
    ids, D, A, X0 = space.cell_terms[cell]
    kappa = space.kappa
    phase = 1j * kappa * ((pts[:, None, 0] - X0[None, :, 0]) * D[None, :, 0]
                          + (pts[:, None, 1] - X0[None, :, 1]) * D[None, :, 1])
    fac = (1j * kappa * D[:, 0]) ** alpha[0] * (1j * kappa * D[:, 1]) ** alpha[1]
    vals = np.exp(phase) * (A * fac)[None, :]
    n = len(ids) // 4
    return ids.reshape(n, 4)[:, 0], vals.reshape(len(pts), n, 4).sum(axis=2)


def assemble(trial: DiscreteSpace, test: DiscreteSpace,
             boundary_data: Optional[Callable] = None,
             sources: Sequence[tuple] = ()) -> GalerkinSystem:
    """Assemble the oversampled Petrov-Galerkin matrix and right-hand side.

    ``boundary_data(points, normals)`` supplies the impedance datum g on the
    domain boundary; ``sources`` is a sequence of ((x, y), weight) pairs
    added to the functional as weight * conj(v(x, y)).
    """
    mesh = trial.mesh
    kappa = trial.kappa
    A = _assemble_bilinear(trial, test, "helmholtz")
    F = np.zeros(test.n_dofs, dtype=complex)
    freq = space_frequency(test)
    if boundary_data is not None:
        for k in range(mesh.n_cells):
            if k not in test.cell_terms:
                continue
            for p0, p1 in mesh.boundary_segments[k]:
                L = float(np.hypot(*(np.asarray(p1) - np.asarray(p0))))
                pts, w = segment_rule(p0, p1, quad_order(freq, L))
                t = np.asarray(p1, dtype=float) - np.asarray(p0, dtype=float)
                nrm = np.array([t[1], -t[0]]) / L
                gvals = boundary_data(pts, np.broadcast_to(nrm, pts.shape))
                ids, vals = _eval_space_at(test, k, pts)
                F[ids] += (w * gvals) @ np.conj(vals)
    for (pt, weight) in sources:
        pt = np.asarray(pt, dtype=float)
        for k in mesh.cells_at_point(pt[0], pt[1]):
            if k in test.cell_terms:
                ids, vals = _eval_space_at(test, k, pt[None, :])
                F[ids] += weight * np.conj(vals[0])
                break
    return GalerkinSystem(A, F, trial, test)


def manufactured_rhs(test: DiscreteSpace, u0: PiecewiseEPWMode,
                     extra_frequency: float = 0.0) -> np.ndarray:
    """Consistent functional F(v) = a(u0, v) for a discrete u0, by quadrature.

    Members of the trial space solve the Helmholtz equation only element-wise
    (their normal derivative jumps across interior edges), so the impedance
    trace alone is not consistent data for them.  The consistent functional
    adds the interior jump terms:

        F(v) = int_dOmega (d_n u0 - i kappa u0) conj(v)
             + sum over interior edges of int_s [d_n u0] conj(v).

    Everything is integrated by Gauss quadrature on one-sided evaluations, a
    code path fully independent of the closed-form matrix; solving with this
    right-hand side must reproduce u0 (Galerkin consistency).  Assumes
    interior grid edges lie inside the domain (grid-aligned domains).
    """
    from .modes import evaluate_in_cell

    mesh = test.mesh
    kappa = test.kappa
    freq = max(space_frequency(test), extra_frequency)
    F = np.zeros(test.n_dofs, dtype=complex)
    for k in range(mesh.n_cells):
        if k not in test.cell_terms:
            continue
        for p0, p1 in mesh.boundary_segments[k]:
            L = float(np.hypot(*(np.asarray(p1) - np.asarray(p0))))
            pts, w = segment_rule(p0, p1, quad_order(freq, L))
            t = np.asarray(p1, dtype=float) - np.asarray(p0, dtype=float)
            nrm = np.array([t[1], -t[0]]) / L
            if k in u0.terms:
                uv = evaluate_in_cell(u0, k, pts)
                ux = evaluate_in_cell(u0, k, pts, (1, 0))
                uy = evaluate_in_cell(u0, k, pts, (0, 1))
                gv = nrm[0] * ux + nrm[1] * uy - 1j * kappa * uv
            else:
                gv = np.zeros(len(pts), dtype=complex)
            ids, vals = _eval_space_at(test, k, pts)
            F[ids] += (w * gv) @ np.conj(vals)
    for edge in mesh.edges:
        kp, km = edge.cell_plus, edge.cell_minus
        if kp is None or km is None:
            continue
        if edge.orientation == "horizontal":
            p0 = np.array(edge.anchor)
            p1 = p0 + np.array([mesh.h1, 0.0])
            nrm = np.array([0.0, 1.0])  # from minus (below) into plus (above)
        else:
            p0 = np.array(edge.anchor)
            p1 = p0 + np.array([0.0, mesh.h2])
            nrm = np.array([1.0, 0.0])  # from minus (left) into plus (right)
        L = float(np.hypot(*(p1 - p0)))
        pts, w = segment_rule(p0, p1, quad_order(freq, L))

        def one_sided_normal(cell):
            if cell not in u0.terms:
                return np.zeros(len(pts), dtype=complex)
            gx = evaluate_in_cell(u0, cell, pts, (1, 0))
            gy = evaluate_in_cell(u0, cell, pts, (0, 1))
            return nrm[0] * gx + nrm[1] * gy

        jump = one_sided_normal(km) - one_sided_normal(kp)
        side = kp if kp in test.cell_terms else km
        ids, vals = _eval_space_at(test, side, pts)
        F[ids] += (w * jump) @ np.conj(vals)
    return F


def assemble_h1_gram(space: DiscreteSpace) -> np.ndarray:
    """Gram matrix of the basis in the kappa-weighted H^1 inner product."""
    return _assemble_bilinear(space, space, "h1")


def h1_projection_rhs(space: DiscreteSpace, u, quad_extra: int = 12) -> np.ndarray:
    """(u, phi_i) in the kappa-weighted H^1 inner product, by cell quadrature.

    ``u`` provides value(points) and gradient(points).
    """
    from ._gauss import cell_rule

    mesh = space.mesh
    kappa = space.kappa
    F = np.zeros(space.n_dofs, dtype=complex)
    n = quad_order(space_frequency(space), max(mesh.h1, mesh.h2), quad_extra)
    for k in range(mesh.n_cells):
        if k not in space.cell_terms:
            continue
        pts, w = cell_rule(mesh, k, n)
        uv = u.value(pts)
        ug = u.gradient(pts)
        ids, v = _eval_space_at(space, k, pts)
        _, vx = _eval_space_at(space, k, pts, (1, 0))
        _, vy = _eval_space_at(space, k, pts, (0, 1))
        contrib = (w * uv) @ np.conj(v) \
            + ((w * ug[:, 0]) @ np.conj(vx) + (w * ug[:, 1]) @ np.conj(vy)) / kappa ** 2
        F[ids] += contrib
    return F


def sesquilinear_entry(trial_mode: PiecewiseEPWMode, test_mode: PiecewiseEPWMode,
                       mesh: CartesianMesh, kappa: float) -> complex:
    """a(trial, test) for two individual piecewise plane-wave functions."""
    total = 0.0 + 0.0j
    shared = set(trial_mode.terms) & set(test_mode.terms)
    for k in shared:
        Dt, At, Xt = trial_mode.terms[k]
        Ds, As, Xs = test_mode.terms[k]
        block = _pair_block(kappa, Dt, At, Xt, Ds, As, Xs, "helmholtz",
                            mesh.cell_rect(k), mesh.full[k], mesh.clipped[k],
                            mesh.boundary_segments[k])
        total += block.sum()
    return complex(total)
