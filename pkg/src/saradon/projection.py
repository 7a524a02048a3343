"""Lattice geometry for single-angle sampling.

The coefficients of ``f = sum_k c_k phi(. - k)`` supported in a box ``E``
live on an integer rectangle (the *region*). A direction ``p`` is usable when
``k -> p.k`` is injective on the region (condition A1); for integer vectors
``ptilde`` we also want ``ptilde . Z^2 = Z`` (condition A2, a gcd test).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyRegionError,
    InsufficientShiftSetError,
    InvalidProjectionError,
    UncertifiedProjectionError,
)
from .radon import ProjectionVector

REAL_GAP_TOL = 1e-9


@dataclass(frozen=True)
class LatticeRegion:
    """Integer rectangle ``[k1lo, k1hi] x [k2lo, k2hi]``."""

    bounds: tuple[int, int, int, int]

    @property
    def empty(self):
        k1lo, k1hi, k2lo, k2hi = self.bounds
        return k1hi < k1lo or k2hi < k2lo

    @property
    def shape(self):
        k1lo, k1hi, k2lo, k2hi = self.bounds
        return (max(k1hi - k1lo + 1, 0), max(k2hi - k2lo + 1, 0))

    @property
    def points(self):
        """Integer points, lexicographic (first index major), shape (N, 2)."""
        k1lo, k1hi, k2lo, k2hi = self.bounds
        if self.empty:
            return np.zeros((0, 2), dtype=np.int64)
        g1, g2 = np.meshgrid(
            np.arange(k1lo, k1hi + 1), np.arange(k2lo, k2hi + 1), indexing="ij"
        )
        return np.stack([g1.ravel(), g2.ravel()], axis=1).astype(np.int64)

    def __len__(self):
        n1, n2 = self.shape
        return n1 * n2

    def translated(self, m):
        m1, m2 = (int(v) for v in m)
        k1lo, k1hi, k2lo, k2hi = self.bounds
        return LatticeRegion((k1lo + m1, k1hi + m1, k2lo + m2, k2hi + m2))


def compute_region(E, gen_support):
    """Index rectangle of all shifts ``k`` with ``phi(. - k)`` able to appear
    in a function supported in ``E``.

    ``E = (a1, b1, a2, b2)`` and ``gen_support = (N1, M1, N2, M2)``; the
    bounds are ``ceil(a_i - M_i)`` and ``floor(b_i - N_i)``.
    """
    a1, b1, a2, b2 = E
    N1, M1, N2, M2 = gen_support
    return LatticeRegion(
        (
            math.ceil(a1 - M1),
            math.floor(b1 - N1),
            math.ceil(a2 - M2),
            math.floor(b2 - N2),
        )
    )


def difference_extent(region):
    """Largest ``|k_1 - k'_1|`` over pairs of region points."""
    k1lo, k1hi, _, _ = region.bounds
    return k1hi - k1lo


def design_projection(region):
    """Integer direction ``ptilde = [1, D + 1]``, ``D`` the width of the
    region along the first axis. ``ptilde . k`` then separates all distinct
    region points and the image of ``Z^2`` is ``Z``."""
    if region.empty:
        raise EmptyRegionError(f"region {region.bounds} has no integer points")
    return ProjectionVector.from_integer((1, difference_extent(region) + 1))


@dataclass(frozen=True)
class DesignCertificate:
    projection: ProjectionVector
    a1_injective: bool
    a2_lattice: bool
    min_node_gap: float
    collision: tuple | None = None

    def to_dict(self):
        proj = self.projection
        return {
            "theta": proj.theta,
            "p": list(proj.p),
            "integer_lift": list(proj.integer_lift) if proj.integer_lift else None,
            "gamma": proj.gamma,
            "a1_injective": self.a1_injective,
            "a2_lattice": self.a2_lattice,
            "min_node_gap": self.min_node_gap,
            "collision": [list(map(int, k)) for k in self.collision] if self.collision else None,
        }


def check_lattice_condition(ptilde):
    """True iff ``{ptilde . x : x in Z^2} = Z``, i.e. ``gcd = 1``."""
    a, b = (int(v) for v in ptilde)
    if a == 0 and b == 0:
        raise InvalidProjectionError("zero projection vector")
    return math.gcd(abs(a), abs(b)) == 1


def check_injectivity(proj, region):
    """Exhaustively test whether ``k -> p.k`` separates the region points.

    Integer lifts are checked in exact integer arithmetic. Real directions
    count a pair as colliding when ``|p.(k - k')| <= 1e-9 max(1, |k - k'|)``.
    """
    if region.empty:
        raise EmptyRegionError(f"region {region.bounds} has no integer points")
    pts = region.points
    i, j = np.triu_indices(len(pts), k=1)
    delta = pts[i] - pts[j]
    collision = None
    if proj.integer_lift is not None:
        a, b = proj.integer_lift
        prod = delta[:, 0] * a + delta[:, 1] * b
        absprod = np.abs(prod)
        bad = absprod == 0
        gap = float(absprod.min()) / proj.gamma if absprod.size else math.inf
        a2 = check_lattice_condition(proj.integer_lift)
    else:
        p1, p2 = proj.p
        absprod = np.abs(delta[:, 0] * p1 + delta[:, 1] * p2)
        scale = np.maximum(1.0, np.hypot(delta[:, 0], delta[:, 1]))
        bad = absprod <= REAL_GAP_TOL * scale
        gap = float(absprod.min()) if absprod.size else math.inf
        a2 = False
    if np.any(bad):
        idx = int(np.argmax(bad))
        collision = (tuple(pts[i[idx]]), tuple(pts[j[idx]]))
    return DesignCertificate(proj, not bool(np.any(bad)), a2, gap, collision)


def _window(proj, region, gen_support, window, radius=None):
    pts = region.points
    a, b = proj.integer_lift
    ints = pts[:, 0] * a + pts[:, 1] * b
    kmin, kmax = int(ints.min()), int(ints.max())
    g = proj.gamma
    if window == "printed":
        m = math.sqrt(2.0) * max(abs(v) for v in gen_support)
        return kmin, kmax, (-m + kmin, m + kmax)
    if window == "tight":
        if radius is None:
            N1, M1, N2, M2 = gen_support
            p1, p2 = proj.p
            radius = max(abs(N1), abs(M1)) * abs(p1) + max(abs(N2), abs(M2)) * abs(p2)
        return kmin, kmax, (kmin / g - radius, kmax / g + radius)
    raise ValueError(f"unknown window {window!r}")


def sample_set_theorem2(X, proj, region, gen_support, window="printed"):
    """Sampling nodes ``(X + Z)/gamma`` restricted to a window.

    ``window="printed"`` uses ``[-sqrt2 m + Kmin, sqrt2 m + Kmax]`` with
    ``m = max |support bound|`` and ``Kmin/Kmax`` the extreme values of
    ``ptilde . k`` on the region. ``window="tight"`` uses the exact support
    of ``Pf``, ``[Kmin/gamma - r, Kmax/gamma + r]``.

    ``X`` is taken modulo 1; at least two distinct residues are required.
    Returns the sorted nodes.
    """
    if proj.integer_lift is None:
        raise UncertifiedProjectionError("an integer lift of the projection is required")
    if region.empty:
        raise EmptyRegionError(f"region {region.bounds} has no integer points")
    residues = np.unique(np.mod(np.asarray(list(X), dtype=float), 1.0))
    if residues.size < 2:
        raise InsufficientShiftSetError("need at least two distinct shifts in X (mod 1)")
    cert = check_injectivity(proj, region)
    if not (cert.a1_injective and cert.a2_lattice):
        raise UncertifiedProjectionError(
            f"projection {proj.integer_lift} fails A1={cert.a1_injective} A2={cert.a2_lattice}"
        )
    _, _, (lo, hi) = _window(proj, region, gen_support, window)
    g = proj.gamma
    j = np.arange(math.floor(lo * g) - 1, math.ceil(hi * g) + 2)
    nodes = ((residues[None, :] + j[:, None]) / g).ravel()
    nodes = nodes[(nodes >= lo) & (nodes <= hi)]
    return np.sort(nodes)


def sample_window(proj, region, gen_support, window="printed"):
    """The interval used by :func:`sample_set_theorem2`."""
    return _window(proj, region, gen_support, window)[2]

