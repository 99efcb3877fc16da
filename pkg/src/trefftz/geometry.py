"""Cartesian cut-cell meshes over polygonal domains and resonance diagnostics.

A domain is covered by an axis-aligned grid of uniform rectangular cells of
size ``h1 x h2``.  Cells whose intersection with the domain has positive area
are retained; the intersection polygons, the skeleton of grid edges and the
grid nodes incident to retained cells are enumerated in a deterministic
(lexicographic) order so that degree-of-freedom numbering is reproducible.

The module also provides the Neumann eigenvalue lattice of a rectangle and
distance-to-resonance diagnostics for a given wavenumber: the discrete bases
built on the mesh degenerate when ``kappa^2`` hits an eigenvalue of the cell
(or of the horizontally doubled cell used by the node family).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

AREA_TOL = 1e-12  # cells with area(K .. Omega) <= AREA_TOL*h1*h2 are dropped

__all__ = [
    "MeshError",
    "ResonanceError",
    "DomainPolygon",
    "CellListDomain",
    "CartesianMesh",
    "Edge",
    "Node",
    "ResonanceReport",
    "build_mesh",
    "clip_cell",
    "neumann_eigenvalues",
    "check_assumptions",
    "resonance_report",
    "node_lattice_distances",
    "edge_lattice_distance",
    "named_domain",
    "load_polygon",
    "polygon_area",
]


class MeshError(Exception):
    """Raised when a mesh cannot be built (e.g. the grid misses the domain)."""


class ResonanceError(Exception):
    """A basis-function denominator vanishes: kappa^2 sits on an eigenvalue.

    Attributes identify the offending mode family and lattice indices so the
    caller can adjust the mesh.
    """

    def __init__(self, message, family=None, n=None, nearest_m=None):
        super().__init__(message)
        self.family = family
        self.n = n
        self.nearest_m = nearest_m


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


def polygon_area(vertices: np.ndarray) -> float:
    """Signed (shoelace) area of a polygon; positive for CCW orientation."""
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_intersect(p1, p2, q1, q2) -> bool:
    """Proper intersection test for open segments (shared endpoints ignored)."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


@dataclass(frozen=True)
class DomainPolygon:
    """Simple polygon with counterclockwise-ordered vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", v)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise ValueError("polygon needs at least 3 planar vertices")
        if polygon_area(v) <= 0:
            raise ValueError("polygon must be counterclockwise (positive area)")
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(i - j) in (0, 1, n - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise ValueError("polygon is self-intersecting")

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)

    def bounds(self) -> tuple[float, float, float, float]:
        v = self.vertices
        return v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Winding-number inside test, vectorized over an (n, 2) array."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        v = self.vertices
        x, y = pts[:, 0][:, None], pts[:, 1][:, None]
        x0, y0 = v[:, 0][None, :], v[:, 1][None, :]
        x1 = np.roll(v[:, 0], -1)[None, :]
        y1 = np.roll(v[:, 1], -1)[None, :]
        upward = (y0 <= y) & (y1 > y)
        downward = (y0 > y) & (y1 <= y)
        cross = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0)
        wn = np.sum(upward * (cross > 0), axis=1) - np.sum(downward * (cross < 0), axis=1)
        return wn != 0

    def boundary_segments(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


@dataclass(frozen=True)
class CellListDomain:
    """Union of unit grid cells (a polyomino), possibly with interior holes.

    ``cells`` holds integer (i, j) lattice coordinates; the cell (i, j) covers
    ``origin + [i*w, (i+1)*w] x [j*h, (j+1)*h]``.  Meshing such a domain
    requires a grid aligned with this lattice.
    """

    cells: frozenset
    cell_w: float = 1.0
    cell_h: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    @property
    def area(self) -> float:
        return len(self.cells) * self.cell_w * self.cell_h

    def bounds(self) -> tuple[float, float, float, float]:
        ii = np.array([c[0] for c in self.cells])
        jj = np.array([c[1] for c in self.cells])
        ox, oy = self.origin
        return (
            ox + ii.min() * self.cell_w,
            oy + jj.min() * self.cell_h,
            ox + (ii.max() + 1) * self.cell_w,
            oy + (jj.max() + 1) * self.cell_h,
        )

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        i = np.floor((pts[:, 0] - self.origin[0]) / self.cell_w).astype(int)
        j = np.floor((pts[:, 1] - self.origin[1]) / self.cell_h).astype(int)
        return np.array([(a, b) in self.cells for a, b in zip(i, j)])


Domain = Union[DomainPolygon, CellListDomain]


# ---------------------------------------------------------------------------
# Clipping
# ---------------------------------------------------------------------------


def clip_cell(rect: Sequence[float], domain: Domain) -> np.ndarray:
    """Intersection polygon of an axis-aligned rectangle with the domain.

    ``rect = (x0, y0, x1, y1)``.  Returns CCW vertices; an empty array when
    the intersection is (numerically) empty.  The cell is convex, so clipping
    the domain polygon against its four half-planes is exact even when the
    domain itself is non-convex (the result may be degenerate for multiply
    connected intersections, which do not occur on the shipped domains).
    """
    x0, y0, x1, y1 = rect
    if isinstance(domain, CellListDomain):
        # aligned lattice: the intersection is either the full cell or empty
        i = round((x0 - domain.origin[0]) / domain.cell_w)
        j = round((y0 - domain.origin[1]) / domain.cell_h)
        if (i, j) in domain.cells:
            return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)
        return np.zeros((0, 2))

    poly = [tuple(p) for p in domain.vertices]
    # half-planes: inside(x) >= 0
    planes = [
        lambda p: p[0] - x0,
        lambda p: x1 - p[0],
        lambda p: p[1] - y0,
        lambda p: y1 - p[1],
    ]
    for inside in planes:
        if not poly:
            break
        out = []
        n = len(poly)
        for k in range(n):
            a, b = poly[k], poly[(k + 1) % n]
            fa, fb = inside(a), inside(b)
            if fa >= 0:
                out.append(a)
                if fb < 0:
                    t = fa / (fa - fb)
                    out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
            elif fb >= 0:
                t = fa / (fa - fb)
                out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
        poly = out
    if not poly:
        return np.zeros((0, 2))
    v = np.array(poly, dtype=float)
    # drop duplicate consecutive vertices
    keep = np.ones(len(v), dtype=bool)
    for k in range(len(v)):
        if np.allclose(v[k], v[(k + 1) % len(v)], atol=1e-14 * max(x1 - x0, y1 - y0)):
            keep[(k + 1) % len(v)] = False
    v = v[keep]
    if len(v) < 3 or polygon_area(v) <= 0:
        return np.zeros((0, 2))
    return v


def _clip_segment_to_rect(p0, p1, rect):
    """Liang-Barsky clip of segment p0->p1 against a closed rectangle."""
    x0, y0, x1, y1 = rect
    d = (p1[0] - p0[0], p1[1] - p0[1])
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-d[0], p0[0] - x0),
        (d[0], x1 - p0[0]),
        (-d[1], p0[1] - y0),
        (d[1], y1 - p0[1]),
    ):
        if p == 0.0:
            if q < 0:
                return None
        else:
            t = q / p
            if p < 0:
                if t > t1:
                    return None
                t0 = max(t0, t)
            else:
                if t < t0:
                    return None
                t1 = min(t1, t)
    if t1 <= t0:
        return None
    a = np.array([p0[0] + t0 * d[0], p0[1] + t0 * d[1]])
    b = np.array([p0[0] + t1 * d[0], p0[1] + t1 * d[1]])
    return a, b


# ---------------------------------------------------------------------------
# Mesh
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Grid edge of the skeleton.

    ``anchor`` is the grid point (x_s, y_s): a horizontal edge spans
    ``[x_s, x_s+h1] x {y_s}``, a vertical one ``{x_s} x [y_s, y_s+h2]``.
    ``cell_plus``/``cell_minus`` are retained-cell indices (or None): for a
    horizontal edge the cells above/below, for a vertical edge right/left.
    """

    orientation: str  # "horizontal" | "vertical"
    i: int
    j: int
    anchor: tuple[float, float]
    cell_plus: Optional[int]
    cell_minus: Optional[int]

    @property
    def adjacent_cells(self):
        return tuple(c for c in (self.cell_plus, self.cell_minus) if c is not None)


@dataclass(frozen=True)
class Node:
    """Grid vertex with the (up to four) retained cells around it."""

    i: int
    j: int
    coords: tuple[float, float]
    cells: tuple  # retained cell indices around the node


@dataclass
class CartesianMesh:
    """Cartesian grid restricted to a domain.

    ``cells`` lists retained (i, j) indices sorted lexicographically by
    (j, i); ``clipped[k]`` is the CCW intersection polygon of cell k with the
    domain (``full[k]`` when it equals the whole rectangle), and
    ``boundary_segments[k]`` the pieces of the domain boundary inside cell k.
    """

    domain: Domain
    origin: tuple[float, float]
    h1: float
    h2: float
    cells: list
    clipped: list
    full: list
    boundary_segments: list
    edges: list
    nodes: list
    cell_index: dict = field(default_factory=dict)
    node_index: dict = field(default_factory=dict)

    @property
    def h(self) -> float:
        return max(self.h1, self.h2)

    @property
    def rho(self) -> float:
        return max(self.h1, self.h2) / min(self.h1, self.h2)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def cell_rect(self, k: int) -> tuple[float, float, float, float]:
        i, j = self.cells[k]
        x0 = self.origin[0] + i * self.h1
        y0 = self.origin[1] + j * self.h2
        return (x0, y0, x0 + self.h1, y0 + self.h2)

    def area(self) -> float:
        return float(sum(abs(polygon_area(p)) for p in self.clipped))

    def cells_at_point(self, x: float, y: float) -> list[int]:
        """Retained cells whose closure contains (x, y)."""
        tol = 1e-12 * max(self.h1, self.h2)
        fi = (x - self.origin[0]) / self.h1
        fj = (y - self.origin[1]) / self.h2
        out = []
        for i in {math.floor(fi + tol / self.h1), math.ceil(fi - tol / self.h1) - 1,
                  math.floor(fi - tol / self.h1), math.ceil(fi + tol / self.h1) - 1}:
            for j in {math.floor(fj + tol / self.h2), math.ceil(fj - tol / self.h2) - 1,
                      math.floor(fj - tol / self.h2), math.ceil(fj + tol / self.h2) - 1}:
                k = self.cell_index.get((i, j))
                if k is None or k in out:
                    continue
                x0, y0, x1, y1 = self.cell_rect(k)
                if x0 - tol <= x <= x1 + tol and y0 - tol <= y <= y1 + tol:
                    out.append(k)
        return out


def build_mesh(domain: Domain, h1: float, h2: float,
               origin: Optional[tuple[float, float]] = None) -> CartesianMesh:
    """Cover the domain with an h1 x h2 grid and enumerate the cut-cell mesh.

    Cells are retained iff area(cell .. domain) > 1e-12 * h1 * h2.  Edges and
    nodes are exactly the grid edges/vertices incident to retained cells,
    enumerated lexicographically by (j, i) with horizontal edges first.
    """
    if h1 <= 0 or h2 <= 0:
        raise ValueError("cell sizes must be positive")
    if isinstance(domain, CellListDomain):
        if origin is None:
            origin = domain.origin
        rw = h1 / domain.cell_w
        rh = h2 / domain.cell_h
        ax = (origin[0] - domain.origin[0]) / domain.cell_w
        ay = (origin[1] - domain.origin[1]) / domain.cell_h
        if any(abs(v - round(v)) > 1e-9 for v in (rw, rh, ax, ay)) or round(rw) != 1 or round(rh) != 1:
            raise MeshError("cell-list domains require a grid aligned with their lattice")
    if origin is None:
        origin = (0.0, 0.0)

    xmin, ymin, xmax, ymax = domain.bounds()
    i0 = math.floor((xmin - origin[0]) / h1 - 1e-9)
    i1 = math.ceil((xmax - origin[0]) / h1 + 1e-9)
    j0 = math.floor((ymin - origin[1]) / h2 - 1e-9)
    j1 = math.ceil((ymax - origin[1]) / h2 + 1e-9)

    cells, clipped, full = [], [], []
    for j in range(j0, j1):
        for i in range(i0, i1):
            x0 = origin[0] + i * h1
            y0 = origin[1] + j * h2
            poly = clip_cell((x0, y0, x0 + h1, y0 + h2), domain)
            if len(poly) >= 3 and polygon_area(poly) > AREA_TOL * h1 * h2:
                cells.append((i, j))
                clipped.append(poly)
                full.append(abs(polygon_area(poly) - h1 * h2) <= 1e-10 * h1 * h2)
    if not cells:
        raise MeshError("the grid does not intersect the domain")
    cell_index = {c: k for k, c in enumerate(cells)}
    cell_set = set(cells)

    # skeleton: grid edges incident to retained cells, horizontal then vertical
    edges = []
    hor = sorted({(i, j) for (i, j) in cells} | {(i, j + 1) for (i, j) in cells},
                 key=lambda t: (t[1], t[0]))
    for (i, j) in hor:
        up = cell_index.get((i, j))
        dn = cell_index.get((i, j - 1))
        if up is None and dn is None:
            continue
        anchor = (origin[0] + i * h1, origin[1] + j * h2)
        edges.append(Edge("horizontal", i, j, anchor, up, dn))
    ver = sorted({(i, j) for (i, j) in cells} | {(i + 1, j) for (i, j) in cells},
                 key=lambda t: (t[1], t[0]))
    for (i, j) in ver:
        rt = cell_index.get((i, j))
        lt = cell_index.get((i - 1, j))
        if rt is None and lt is None:
            continue
        anchor = (origin[0] + i * h1, origin[1] + j * h2)
        edges.append(Edge("vertical", i, j, anchor, rt, lt))

    node_keys = set()
    for (i, j) in cells:
        node_keys.update([(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)])
    nodes = []
    for (i, j) in sorted(node_keys, key=lambda t: (t[1], t[0])):
        around = tuple(
            cell_index[c]
            for c in ((i - 1, j - 1), (i, j - 1), (i - 1, j), (i, j))
            if c in cell_set
        )
        nodes.append(Node(i, j, (origin[0] + i * h1, origin[1] + j * h2), around))
    node_index = {(n.i, n.j): k for k, n in enumerate(nodes)}

    boundary = _boundary_segments_per_cell(domain, cells, cell_set, origin, h1, h2)

    return CartesianMesh(domain, origin, h1, h2, cells, clipped, full, boundary,
                         edges, nodes, cell_index, node_index)


def _boundary_segments_per_cell(domain, cells, cell_set, origin, h1, h2):
    """Pieces of the domain boundary inside each retained cell.

    Segments lying on a grid line shared by two retained cells are attributed
    to the cell on the domain-interior side only.
    """
    tol = 1e-12 * max(h1, h2)
    out = [[] for _ in cells]
    if isinstance(domain, CellListDomain):
        for k, (i, j) in enumerate(cells):
            x0 = origin[0] + i * h1
            y0 = origin[1] + j * h2
            if (i, j - 1) not in domain.cells:
                out[k].append((np.array([x0, y0]), np.array([x0 + h1, y0])))
            if (i + 1, j) not in domain.cells:
                out[k].append((np.array([x0 + h1, y0]), np.array([x0 + h1, y0 + h2])))
            if (i, j + 1) not in domain.cells:
                out[k].append((np.array([x0 + h1, y0 + h2]), np.array([x0, y0 + h2])))
            if (i - 1, j) not in domain.cells:
                out[k].append((np.array([x0, y0 + h2]), np.array([x0, y0])))
        return out

    for k, (i, j) in enumerate(cells):
        x0 = origin[0] + i * h1
        y0 = origin[1] + j * h2
        rect = (x0, y0, x0 + h1, y0 + h2)
        for p0, p1 in domain.boundary_segments():
            seg = _clip_segment_to_rect(p0, p1, rect)
            if seg is None:
                continue
            a, b = seg
            if np.hypot(*(b - a)) <= tol:
                continue
            # on a shared interior grid line: keep only on the interior side
            mid = 0.5 * (a + b)
            on_vert = abs(a[0] - b[0]) <= tol and (abs(a[0] - x0) <= tol or abs(a[0] - x0 - h1) <= tol)
            on_hor = abs(a[1] - b[1]) <= tol and (abs(a[1] - y0) <= tol or abs(a[1] - y0 - h2) <= tol)
            if on_vert or on_hor:
                eps = 1e-7 * min(h1, h2)
                inward = np.array([x0 + 0.5 * h1 - mid[0], y0 + 0.5 * h2 - mid[1]])
                inward /= max(np.hypot(*inward), 1e-300)
                if not bool(domain.contains((mid + eps * inward)[None, :])[0]):
                    continue
            out[k].append((a, b))
    return out


# ---------------------------------------------------------------------------
# Eigenvalue lattices and resonance distances
# ---------------------------------------------------------------------------


def neumann_eigenvalues(a: float, b: float, cutoff: float) -> list[tuple[float, int, int]]:
    """All Laplace-Neumann eigenvalues (n pi/a)^2 + (m pi/b)^2 <= cutoff.

    Returned sorted ascending, with multiplicity, as (value, n, m) triples
    with n, m >= 0.
    """
    if a <= 0 or b <= 0 or cutoff <= 0:
        raise ValueError("lengths and cutoff must be positive")
    nmax = int(math.floor(a * math.sqrt(cutoff) / math.pi))
    out = []
    for n in range(nmax + 1):
        lam_n = (n * math.pi / a) ** 2
        if lam_n > cutoff:
            break
        mmax = int(math.floor(b * math.sqrt(cutoff - lam_n) / math.pi))
        for m in range(mmax + 1):
            lam = lam_n + (m * math.pi / b) ** 2
            if lam <= cutoff:
                out.append((lam, n, m))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return out


def _dist_to_axis_lattice(value: float, step: float) -> float:
    """Distance from value >= 0 to {m*step : m in N}."""
    m = max(round(value / step), 0)
    return min(abs(value - m * step), abs(value - max(m - 1, 0) * step),
               abs(value - (m + 1) * step))


def edge_lattice_distance(kappa: float, h1: float, h2: float) -> float:
    """inf over propagative n of |sqrt(1 - (n pi/(kappa h1))^2) - m pi/(kappa h2)|.

    The infimum runs over n >= 1 with n pi/(kappa h1) < 1 and m >= 0; it is
    +inf when no propagative index exists.
    """
    best = math.inf
    n = 1
    while n * math.pi / (kappa * h1) < 1.0:
        s = math.sqrt(1.0 - (n * math.pi / (kappa * h1)) ** 2)
        best = min(best, _dist_to_axis_lattice(s, math.pi / (kappa * h2)))
        n += 1
    return best


def node_lattice_distances(kappa: float, h1: float, h2: float) -> tuple[float, float]:
    """Distances for the half-integer (node) lattice with doubled base 2*h1.

    Returns (d_tilde, d_tilde0) where, with nu_n = (2n-1) pi / (2 kappa h1),

    * d_tilde  = inf over nu_n < 1, m >= 0 of |sqrt(1-nu_n^2) - m pi/(kappa h2)|
    * d_tilde0 = inf over nu_n > 1 of sqrt(nu_n^2 - 1)
    """
    d_t = math.inf
    n = 1
    while (2 * n - 1) * math.pi / (2 * kappa * h1) < 1.0:
        nu = (2 * n - 1) * math.pi / (2 * kappa * h1)
        s = math.sqrt(1.0 - nu * nu)
        d_t = min(d_t, _dist_to_axis_lattice(s, math.pi / (kappa * h2)))
        n += 1
    nu = (2 * n - 1) * math.pi / (2 * kappa * h1)
    d_t0 = math.sqrt(nu * nu - 1.0) if nu > 1.0 else math.inf
    return d_t, d_t0


@dataclass(frozen=True)
class ResonanceReport:
    """Distances from kappa^2 to the relevant eigenvalue lattices.

    ``d_hat`` is the edge-family distance (minimum over both edge
    orientations), ``d_tilde``/``d_tilde0`` the node-family distances for the
    doubled-base lattice, and ``D_tilde = 1 + 1/d_tilde + 1/sqrt(d_tilde0)``.
    Assumption flags are true iff the relative distance from kappa^2 to the
    corresponding lattice exceeds the tolerance.
    """

    kappa: float
    h1: float
    h2: float
    d_hat: float
    d_tilde: float
    d_tilde0: float
    D_tilde: float
    a0_ok: bool
    a1_ok: bool
    a3_ok: bool
    nearest_eigenvalue: tuple[float, int, int]


def resonance_report(kappa: float, h1: float, h2: float, tol: float = 1e-10) -> ResonanceReport:
    """Resonance diagnostics for cells of size h1 x h2 at wavenumber kappa."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    k2 = kappa * kappa
    cutoff = 4.0 * k2 + 4.0 * (math.pi / min(h1, h2, 2 * h1)) ** 2

    lam_cell = neumann_eigenvalues(h1, h2, cutoff)
    nearest = min(lam_cell, key=lambda t: abs(t[0] - k2))
    a1_ok = abs(nearest[0] - k2) > tol * k2

    lam_node = neumann_eigenvalues(2 * h1, h2, cutoff)
    lam_node_odd = [t for t in lam_node if t[1] % 2 == 1]
    if lam_node_odd:
        nearest_node = min(lam_node_odd, key=lambda t: abs(t[0] - k2))
        a3_ok = abs(nearest_node[0] - k2) > tol * k2
    else:
        a3_ok = True

    d_hat = min(edge_lattice_distance(kappa, h1, h2),
                edge_lattice_distance(kappa, h2, h1))
    d_t, d_t0 = node_lattice_distances(kappa, h1, h2)
    with np.errstate(divide="ignore"):
        D_t = 1.0 + (1.0 / d_t if d_t > 0 else math.inf) \
            + (1.0 / math.sqrt(d_t0) if d_t0 > 0 else math.inf)
    return ResonanceReport(kappa, h1, h2, d_hat, d_t, d_t0, D_t,
                           a0_ok=a1_ok, a1_ok=a1_ok, a3_ok=a3_ok,
                           nearest_eigenvalue=nearest)


def check_assumptions(kappa: float, mesh: CartesianMesh, tol: float = 1e-10) -> ResonanceReport:
    """Resonance diagnostics for a mesh (delegates to ``resonance_report``)."""
    return resonance_report(kappa, mesh.h1, mesh.h2, tol)


# ---------------------------------------------------------------------------
# Named domains and polygon files
# ---------------------------------------------------------------------------

_INVADER_ROWS = {
    # row j (0-based, bottom to top) -> occupied columns i (0-based)
    0: (0, 1, 2, 6, 7, 8),
    1: (0, 1, 2, 3, 5, 6, 7, 8),
    2: (0, 1, 2, 3, 4, 5, 6, 7, 8),
    3: (0, 1, 2, 3, 4, 5, 6, 7, 8),
    4: (0, 1, 3, 4, 5, 7, 8),
    5: (0, 1, 2, 3, 4, 5, 6, 7, 8),
    6: (2, 4, 6),
    7: (1, 2, 4, 6, 7),
}


def invader_cells() -> frozenset:
    """56-cell polyomino sprite inside (0,9)x(0,8) with two enclosed eyes."""
    return frozenset((i, j) for j, row in _INVADER_ROWS.items() for i in row)


def star_polygon(n_points: int = 5, outer: float = 1.0,
                 inner: Optional[float] = None) -> DomainPolygon:
    """Regular star polygon, one spike pointing up, inscribed in radius ``outer``.

    The default inner radius 1/phi^2 (phi the golden ratio) gives the regular
    pentagram for n_points = 5.
    """
    if inner is None:
        phi = (1.0 + math.sqrt(5.0)) / 2.0
        inner = outer / phi ** 2
    verts = []
    for k in range(n_points):
        a_out = math.pi / 2 + 2 * math.pi * k / n_points
        a_in = a_out + math.pi / n_points
        verts.append((outer * math.cos(a_out), outer * math.sin(a_out)))
        verts.append((inner * math.cos(a_in), inner * math.sin(a_in)))
    return DomainPolygon(np.array(verts))


def named_domain(name: str) -> Domain:
    """Built-in domains: unit_square, rect_1x1_centered, star5, invader56."""
    if name == "unit_square":
        return DomainPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    if name == "rect_1x1_centered":
        return DomainPolygon(np.array([[0.0, -0.5], [1.0, -0.5], [1.0, 0.5], [0.0, 0.5]]))
    if name == "star5":
        return star_polygon()
    if name == "invader56":
        return CellListDomain(invader_cells())
    raise KeyError(f"unknown domain {name!r}")


def default_mesh_params(name: str) -> tuple[float, float, tuple[float, float]]:
    """Grid (h1, h2, origin) covering each named domain with its stock mesh."""
    if name in ("unit_square",):
        return 0.5, 0.5, (0.0, 0.0)
    if name == "rect_1x1_centered":
        return 0.5, 0.5, (0.0, -0.5)
    if name == "star5":
        s72 = math.sin(0.4 * math.pi)
        c36 = math.cos(0.2 * math.pi)
        return s72, (1.0 + c36) / 2.0, (-s72, -c36)
    if name == "invader56":
        return 1.0, 1.0, (0.0, 0.0)
    raise KeyError(f"unknown domain {name!r}")


def load_polygon(path) -> DomainPolygon:
    """Read a polygon file: a JSON object {"vertices": [[x, y], ...]} (CCW)."""
    with open(path) as f:
        data = json.load(f)
    return DomainPolygon(np.array(data["vertices"], dtype=float))
