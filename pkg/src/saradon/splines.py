"""Cardinal B-splines, centered even-order B-splines and tensor box-splines.

``B_m`` is the m-fold convolution of the indicator of (0, 1]; the centered
spline ``phi_2n(x) = B_2n(x + n)`` is even and supported on [-n, n]. The
two-variable generator is the tensor product ``phi_2n1(x1) * phi_2n2(x2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrderError

_SINC_TAYLOR_CUTOFF = 1e-4


def _check_order(m, name="m"):
    if int(m) != m or m < 1:
        raise InvalidOrderError(f"{name} must be a positive integer, got {m!r}")
    return int(m)


def eval_bspline(m, x):
    """Evaluate the cardinal B-spline ``B_m`` at ``x``.

    Uses the two-term convolution recurrence

        B_m(x) = x/(m-1) B_{m-1}(x) + (m-x)/(m-1) B_{m-1}(x-1),

    starting from the indicator of (0, 1]. Returns a float for scalar input,
    otherwise an array of the same shape as ``x``.
    """
    m = _check_order(m)
    x = np.asarray(x, dtype=float)
    # values[j] holds B_k(x - j) for the current order k
    values = [((x - j > 0.0) & (x - j <= 1.0)).astype(float) for j in range(m)]
    for k in range(2, m + 1):
        values = [
            ((x - j) * values[j] + (k - (x - j)) * values[j + 1]) / (k - 1)
            for j in range(m - k + 1)
        ]
    out = values[0]
    return float(out) if out.ndim == 0 else out


def eval_centered(n, x):
    """Centered even-order B-spline ``phi_2n(x) = B_2n(x + n)``."""
    n = _check_order(n, "n")
    x = np.asarray(x, dtype=float)
    # evaluate on |x| so evenness is exact, not just up to rounding
    return eval_bspline(2 * n, n - np.abs(x))


def sinc_half(xi):
    """``sin(xi/2) / (xi/2)`` with a Taylor branch near the origin."""
    xi = np.asarray(xi, dtype=float)
    h = 0.5 * xi
    small = np.abs(xi) < _SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, h)
    h2 = h * h
    taylor = 1.0 - h2 / 6.0 + h2 * h2 / 120.0 - h2 * h2 * h2 / 5040.0
    out = np.where(small, taylor, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BoxSplineGenerator:
    """Tensor product ``phi_2n1(x1) * phi_2n2(x2)``, supported on
    ``[-n1, n1] x [-n2, n2]``."""

    n1: int = 1
    n2: int = 1

    def __post_init__(self):
        _check_order(self.n1, "n1")
        _check_order(self.n2, "n2")

    @property
    def orders(self):
        return (self.n1, self.n2)

    @property
    def support(self):
        """Support box as ``(N1, M1, N2, M2)``."""
        return (-self.n1, self.n1, -self.n2, self.n2)

    def __call__(self, x1, x2):
        return eval_box(self, x1, x2)


def eval_box(gen, x1, x2):
    """Evaluate the box-spline generator at ``(x1, x2)`` (broadcasting)."""
    out = np.asarray(eval_centered(gen.n1, x1)) * np.asarray(eval_centered(gen.n2, x2))
    return float(out) if np.ndim(out) == 0 else out


def fourier_box(gen, xi1, xi2):
    """Fourier transform ``prod_k sinc(xi_k/2)^(2 n_k)`` of the generator.

    The convention is ``g^(w) = int g(x) exp(-i x.w) dx``; the generator is
    real and even, so the transform is real and nonnegative.
    """
    out = sinc_half(xi1) ** (2 * gen.n1) * sinc_half(xi2) ** (2 * gen.n2)
    return float(out) if np.ndim(out) == 0 else out
