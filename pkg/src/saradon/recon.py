"""Single-angle reconstruction in box-spline shift-invariant spaces.

With ``f = sum_k c_k phi_B(. - k)`` over a lattice region, the samples
``Pf(p.j)`` at the projected lattice points satisfy ``A c = y`` with
``A[j, l] = P phi_B(p.j - p.l)``. ``P phi_B`` is a positive definite
function, so ``A`` is symmetric positive definite whenever the projected
points are distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
import scipy.linalg as la
from scipy.linalg import lapack

from .errors import (
    DegenerateReferenceError,
    DegenerateSignalError,
    DeterminabilityError,
    DuplicateNodeError,
    NotPositiveDefiniteError,
    SingularSystemError,
)
from .projection import LatticeRegion
from .radon import radon_f
from .splines import eval_box, eval_centered

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SplineField:
    """``f = sum_k c_k phi_B(. - k)`` as an evaluable 2-D function."""

    coeffs: "CoefficientGrid"
    generator: object

    @property
    def box(self):
        k1lo, k1hi, k2lo, k2hi = self.coeffs.region.bounds
        n1, n2 = self.generator.orders
        return (k1lo - n1, k1hi + n1, k2lo - n2, k2hi + n2)

    @property
    def breaks(self):
        a1, b1, a2, b2 = self.box
        return np.arange(a1, b1 + 1), np.arange(a2, b2 + 1)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape)
        for (k1, k2), c in zip(self.coeffs.region.points, self.coeffs.values):
            if c != 0.0:
                out = out + c * eval_box(self.generator, x1 - k1, x2 - k2)
        return out


@dataclass(frozen=True)
class CoefficientGrid:
    region: LatticeRegion
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size != len(self.region):
            raise ValueError(
                f"{vals.size} coefficients for a region of {len(self.region)} points"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, region):
        return cls(region, np.zeros(len(region)))

    @classmethod
    def random(cls, region, seed, low=0.0, high=1.0):
        rng = np.random.default_rng(seed)
        return cls(region, rng.uniform(low, high, len(region)))

    def field(self, gen):
        return SplineField(self, gen)

    def as_matrix(self):
        return self.values.reshape(self.region.shape)


@dataclass(frozen=True)
class GramSystem:
    nodes: np.ndarray
    matrix: np.ndarray
    rhs: np.ndarray | None = None
    condition_estimate: float | None = None
    min_eigenvalue: float | None = None
    points: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self):
        return len(self.nodes)


class PDCertificate(NamedTuple):
    positive_definite: bool
    min_eigenvalue: float
    pivot: int | None = None
    condition: float = float("inf")


def projected_nodes(proj, region):
    """``p.k`` for the region points in lexicographic order (not sorted)."""
    return np.asarray(region.points, float) @ np.array(proj.p)


def _check_distinct(nodes, points):
    order = np.argsort(nodes, kind="stable")
    srt = nodes[order]
    dup = np.flatnonzero(np.diff(srt) == 0.0)
    if dup.size:
        i, j = order[dup[0]], order[dup[0] + 1]
        pair = (i, j)
        if points is not None:
            pair = (tuple(int(v) for v in points[i]), tuple(int(v) for v in points[j]))
        raise DuplicateNodeError(f"nodes {i} and {j} coincide (lattice pair {pair})", pair)


def gram_matrix(profile, nodes, points=None, allow_duplicates=False):
    """Symmetric matrix ``A[j, l] = profile(node_j - node_l)``.

    Only the strict upper triangle is evaluated; the profile is even so the
    lower triangle is its mirror. ``points`` (the lattice points behind the
    nodes) only serve to name a colliding pair in the error message.
    """
    nodes = np.asarray(nodes, dtype=float).reshape(-1)
    if not allow_duplicates:
        _check_distinct(nodes, points)
    n = nodes.size
    A = np.empty((n, n))
    A[np.diag_indices(n)] = profile(0.0)
    iu = np.triu_indices(n, k=1)
    if iu[0].size:
        vals = profile(np.abs(nodes[iu[0]] - nodes[iu[1]]))
        A[iu] = vals
        A[(iu[1], iu[0])] = vals
    return GramSystem(nodes=nodes, matrix=A, points=points)


def pd_certify(system):
    """Cholesky-based positive-definiteness check.

    On success the smallest eigenvalue is reported as the empirical lower
    bound of the quadratic form. A failed factorisation reports the
    (0-based) pivot where it broke down. A factorisation that succeeds but
    leaves ``lambda_min <= n eps ||A||`` is also reported as not PD.
    """
    A = np.asarray(system.matrix, dtype=float)
    n = A.shape[0]
    _, info = lapack.dpotrf(A, lower=1, clean=1)
    eig = la.eigvalsh(A)
    lam_min, lam_max = float(eig[0]), float(eig[-1])
    if info > 0:
        return PDCertificate(False, lam_min, int(info) - 1)
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    if lam_min <= n * np.finfo(float).eps * abs(lam_max):
        return PDCertificate(False, lam_min, None)
    return PDCertificate(True, lam_min, None, lam_max / lam_min)


def build_system(profile, region, y=None):
    """Gram system for the projected lattice points of ``region``, certified."""
    nodes = projected_nodes(profile.projection, region)
    system = gram_matrix(profile, nodes, points=region.points)
    cert = pd_certify(system)
    return replace(
        system,
        rhs=None if y is None else np.asarray(y, dtype=float),
        condition_estimate=cert.condition,
        min_eigenvalue=cert.min_eigenvalue,
    )


def sample_radon(coeffs, gen, proj, nodes):
    """Radon samples ``Pf(t_j)``."""
    return np.asarray(radon_f(coeffs, gen, proj, np.asarray(nodes, dtype=float)), dtype=float)


def noise_sigma(y, snr_db):
    """Noise level with ``10 log10(|y|^2 / (N sigma^2)) = snr_db``."""
    y = np.asarray(y, dtype=float)
    energy = float(y @ y)
    if energy == 0.0:
        raise DegenerateSignalError("cannot calibrate noise for an all-zero signal")
    return np.sqrt(energy / (y.size * 10.0 ** (snr_db / 10.0)))


def add_noise(y, snr_db, seed=None, rng=None):
    """Add i.i.d. Gaussian noise at the requested SNR (dB)."""
    y = np.asarray(y, dtype=float)
    sigma = noise_sigma(y, snr_db)
    rng = rng if rng is not None else np.random.default_rng(seed)
    return y + sigma * rng.standard_normal(y.shape)


def _rhs(system, y):
    y = system.rhs if y is None else y
    if y is None:
        raise ValueError("no right-hand side given")
    return np.asarray(y, dtype=float)


def solve_direct(system, y=None):
    """Solve ``A c = y`` by Cholesky. Refuses non-PD systems."""
    cert = pd_certify(system)
    if not cert.positive_definite:
        raise NotPositiveDefiniteError(
            f"Gram matrix is not positive definite (pivot {cert.pivot}, "
            f"lambda_min {cert.min_eigenvalue:.3e})",
            cert.pivot,
        )
    factor = la.cho_factor(system.matrix, lower=True)
    return la.cho_solve(factor, _rhs(system, y))


def tikhonov_solve(system, alpha, y=None):
    """``(alpha I + A^T A)^{-1} A^T y``.

    Computed through the SVD ``A = U S V^T`` as ``V diag(s/(alpha + s^2)) U^T y``
    so the conditioning of ``A`` is not squared. ``y`` may be a matrix with
    one right-hand side per column.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    U, s, Vt = la.svd(np.asarray(system.matrix, dtype=float))
    denom = alpha + s * s
    if np.any(denom <= np.finfo(float).tiny) or (
        alpha == 0 and s[-1] <= s[0] * s.size * np.finfo(float).eps
    ):
        raise SingularSystemError("alpha I + A^T A is numerically singular")
    filt = s / denom
    rhs = _rhs(system, y)
    proj = U.T @ rhs
    if proj.ndim == 1:
        return Vt.T @ (filt * proj)
    return Vt.T @ (filt[:, None] * proj)


def default_grid():
    """81 x 81 points on ``[-2, 6]^2`` with step 0.1."""
    xs = -2.0 + 0.1 * np.arange(81)
    return xs, xs.copy()


def basis_matrices(region, gen, grid):
    """Per-axis translates ``phi(x_i - k)`` so that ``f = B1 C B2^T``."""
    xs, ys = (np.asarray(g, dtype=float) for g in grid)
    k1lo, k1hi, k2lo, k2hi = region.bounds
    B1 = eval_centered(gen.n1, xs[:, None] - np.arange(k1lo, k1hi + 1)[None, :])
    B2 = eval_centered(gen.n2, ys[:, None] - np.arange(k2lo, k2hi + 1)[None, :])
    return np.atleast_2d(B1), np.atleast_2d(B2)


def synthesize(coeffs, gen, grid=None):
    """Evaluate ``f`` on the tensor grid ``(xs, ys)``; entry ``[i, j]`` is
    ``f(xs[i], ys[j])``."""
    grid = default_grid() if grid is None else grid
    if len(coeffs.region) == 0:
        return np.zeros((len(grid[0]), len(grid[1])))
    B1, B2 = basis_matrices(coeffs.region, gen, grid)
    return B1 @ coeffs.as_matrix() @ B2.T


def error_metric(f_hat, f_ref):
    """Relative l2 error ``|f_hat - f_ref| / |f_ref|`` over the grid."""
    f_hat = np.asarray(f_hat, dtype=float)
    f_ref = np.asarray(f_ref, dtype=float)
    if f_hat.shape != f_ref.shape:
        raise ValueError(f"shape mismatch {f_hat.shape} vs {f_ref.shape}")
    ref = np.linalg.norm(f_ref)
    if ref == 0.0:
        raise DegenerateReferenceError("reference function is identically zero on the grid")
    return float(np.linalg.norm(f_hat - f_ref) / ref)


def collocation_matrix(profile, sample_nodes, region):
    """``M[i, k] = profile(t_i - p.k)``."""
    shifts = projected_nodes(profile.projection, region)
    t = np.asarray(sample_nodes, dtype=float)
    return profile(t[:, None] - shifts[None, :])


def numerical_rank(M, rtol=RANK_RTOL):
    s = la.svdvals(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def collocation_solve(profile, sample_nodes, region, y):
    """Least-squares fit of the coefficients to samples at arbitrary nodes.

    Raises :class:`DeterminabilityError` when the collocation matrix has
    numerical rank below the number of coefficients, i.e. the translates
    ``P phi(. - p.k)`` restricted to the nodes are not a basis.
    """
    M = collocation_matrix(profile, sample_nodes, region)
    rank = numerical_rank(M)
    if rank < len(region):
        raise DeterminabilityError(
            f"collocation matrix has numerical rank {rank} < {len(region)}", rank
        )
    sol, *_ = la.lstsq(M, np.asarray(y, dtype=float))
    return sol
