"""Resonance-free wavenumber sequences and the quadratic growth bound.

For cells with aspect ratio rho, the node basis degenerates when the scaled
wavenumber t = kappa * h lands on the radii lattice

    r(n, m)^2 = ((2n-1) pi / 2)^2 + (m pi rho)^2,  n >= 1, m >= 0.

Midpoints t_j between consecutive distinct radii stay uniformly away from
the lattice when rho^2 = p/q is rational: along them the growth functional

    D(rho, t) = 1 + 1/d(rho, t) + 1/sqrt(d0(rho, t))

is bounded by (1 + 8q/pi^2 + sqrt(2 sqrt(q)/pi)) t^2, where d and d0 are the
distances of the circle of radius t to the lattice (propagative band) and to
its m = 0 column (evanescent band).  This module enumerates the radii,
builds the midpoint sequence and verifies the bound and its intermediate
inequalities numerically.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LatticeRadii", "HighFreqCheck", "lattice_radii",
           "resonance_free_sequence", "node_distances_scaled",
           "growth_functional", "bound_constant", "verify_growth_bound",
           "write_highfreq_csv"]


@dataclass(frozen=True)
class LatticeRadii:
    """Sorted distinct radii of the half-integer lattice for rho^2 = p/q."""

    p: int
    q: int
    radii: np.ndarray
    indices: list  # one representative (n, m) per distinct radius

    @property
    def rho(self) -> float:
        return math.sqrt(self.p / self.q)


def lattice_radii(p: int, q: int, count: int) -> LatticeRadii:
    """First ``count`` distinct radii r with r^2 = ((2n-1)pi/2)^2 + (m pi rho)^2.

    Coincident radii from different (n, m) are collapsed (relative tolerance
    1e-12); enumeration bounds guarantee the sorted prefix is complete.
    """
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError("need coprime p, q >= 1")
    rho = math.sqrt(p / q)
    if rho < 1.0:
        raise ValueError("aspect ratio rho = sqrt(p/q) must be >= 1")
    # grow the enumeration radius until enough distinct values are found
    target = math.pi / 2 * max(4.0, 2.0 * math.sqrt(count * max(rho, 1.0)))
    while True:
        nmax = int(math.ceil(target * 2 / math.pi)) + 2
        mmax = int(math.ceil(target / (math.pi * rho))) + 2
        vals = []
        for n in range(1, nmax + 1):
            a = ((2 * n - 1) * math.pi / 2) ** 2
            if a > target * target:
                break
            for m in range(0, mmax + 1):
                r2 = a + (m * math.pi * rho) ** 2
                if r2 <= target * target:
                    vals.append((math.sqrt(r2), n, m))
        vals.sort(key=lambda t: t[0])
        distinct, idx = [], []
        for r, n, m in vals:
            if not distinct or r - distinct[-1] > 1e-12 * max(1.0, r):
                distinct.append(r)
                idx.append((n, m))
        if len(distinct) >= count + 1:
            return LatticeRadii(p, q, np.array(distinct[:count]), idx[:count])
        target *= 1.5


def resonance_free_sequence(radii: LatticeRadii) -> np.ndarray:
    """Midpoints t_j = (r_j + r_{j+1}) / 2 of consecutive distinct radii."""
    r = radii.radii
    if len(r) < 2:
        raise ValueError("need at least two radii")
    return 0.5 * (r[:-1] + r[1:])


def node_distances_scaled(rho: float, t: float) -> tuple[float, float]:
    """(d, d0) for scaled wavenumber t = kappa h and aspect ratio rho.

    With nu_n(t) = (2n-1) pi / (2t):
      d  = inf over nu_n < 1, m >= 0 of |sqrt(1 - nu_n^2) - m pi rho / t|
      d0 = inf over nu_n > 1 of sqrt(nu_n^2 - 1)
    Computed directly from the lattice; matches the mesh diagnostics with
    h1 = h, h2 = h / rho and kappa = t / h.
    """
    d = math.inf
    n = 1
    while (2 * n - 1) * math.pi / 2 < t:
        s = math.sqrt(t * t - ((2 * n - 1) * math.pi / 2) ** 2) / t
        step = math.pi * rho / t
        m = max(round(s / step), 0)
        for mm in (max(m - 1, 0), m, m + 1):
            d = min(d, abs(s - mm * step))
        n += 1
    nu = (2 * n - 1) * math.pi / (2 * t)
    d0 = math.sqrt(nu * nu - 1.0) if nu > 1.0 else math.inf
    return d, d0


def growth_functional(rho: float, t: float) -> float:
    """D(rho, t) = 1 + 1/d + 1/sqrt(d0)."""
    d, d0 = node_distances_scaled(rho, t)
    return 1.0 + (1.0 / d if d > 0 else math.inf) \
        + (1.0 / math.sqrt(d0) if d0 > 0 else math.inf)


def bound_constant(q: int) -> float:
    """1 + 8 q / pi^2 + sqrt(2 sqrt(q) / pi)."""
    return 1.0 + 8.0 * q / math.pi ** 2 + math.sqrt(2.0 * math.sqrt(q) / math.pi)


@dataclass
class HighFreqCheck:
    """Growth-bound verification along the midpoint sequence."""

    p: int
    q: int
    radii: np.ndarray
    t: np.ndarray
    d: np.ndarray
    d0: np.ndarray
    D: np.ndarray
    bound: np.ndarray
    gap_ok: np.ndarray       # r_{j+1} - r_j >= pi^2 / (2 q t_j)
    fin1_ok: np.ndarray      # t_j d >= (r_{j+1} - r_j)/4 >= pi^2/(8 q t_j)
    fin2_ok: np.ndarray      # t_j d0 >= pi / (2 sqrt(q))
    bound_ok: np.ndarray     # D <= C(q) t_j^2

    @property
    def all_ok(self) -> bool:
        return bool(np.all(self.gap_ok) and np.all(self.fin1_ok)
                    and np.all(self.fin2_ok) and np.all(self.bound_ok))


def verify_growth_bound(p: int, q: int, j_max: int) -> HighFreqCheck:
    """Check the quadratic growth bound for the first j_max midpoints."""
    rad = lattice_radii(p, q, j_max + 1)
    rho = rad.rho
    r = rad.radii
    t = resonance_free_sequence(rad)
    C = bound_constant(q)
    d = np.empty(j_max)
    d0 = np.empty(j_max)
    for j in range(j_max):
        d[j], d0[j] = node_distances_scaled(rho, t[j])
    D = 1.0 + 1.0 / d + 1.0 / np.sqrt(d0)
    # the inequalities can hold with exact equality (integer lattice gaps),
    # so allow for sqrt roundoff at large radii
    slack = 1e-9
    gaps = r[1:] - r[:-1]
    gap_ok = gaps >= math.pi ** 2 / (2.0 * q * t) * (1.0 - slack)
    fin1_ok = (t * d >= gaps / 4.0 * (1.0 - slack)) \
        & (gaps / 4.0 >= math.pi ** 2 / (8.0 * q * t) * (1.0 - slack))
    fin2_ok = t * d0 >= math.pi / (2.0 * math.sqrt(q)) * (1.0 - slack)
    bound_ok = D <= C * t ** 2 * (1.0 + slack)
    return HighFreqCheck(p, q, r[:j_max + 1], t, d, d0, D, C * t ** 2,
                         gap_ok, fin1_ok, fin2_ok, bound_ok)


def write_highfreq_csv(check: HighFreqCheck, path) -> None:
    """CSV columns: j, r_j, t_j, d_tilde, d_tilde0, D_tilde, bound, pass."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["j", "r_j", "t_j", "d_tilde", "d_tilde0", "D_tilde",
                    "bound", "pass"])
        for j in range(len(check.t)):
            ok = bool(check.gap_ok[j] and check.fin1_ok[j]
                      and check.fin2_ok[j] and check.bound_ok[j])
            w.writerow([j + 1, f"{check.radii[j]:.12g}", f"{check.t[j]:.12g}",
                        f"{check.d[j]:.12g}", f"{check.d0[j]:.12g}",
                        f"{check.D[j]:.12g}", f"{check.bound[j]:.12g}",
                        int(ok)])
