import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from oracles import bspline_by_convolution, fourier_box_quadrature
from saradon.errors import InvalidOrderError
from saradon.splines import (
    BoxSplineGenerator,
    eval_box,
    eval_bspline,
    eval_centered,
    fourier_box,
    sinc_half,
)


@pytest.mark.parametrize(
    "m, x, expected",
    [(1, 0.5, 1.0), (1, 1.0, 1.0), (1, 0.0, 0.0), (2, 1.0, 1.0), (2, 0.5, 0.5), (2, 2.0, 0.0)],
)
def test_bspline_trivial_values(m, x, expected):
    assert eval_bspline(m, x) == expected


def test_b4_at_two_matches_convolution_oracle():
    ref = bspline_by_convolution(4, 2.0)
    assert ref == pytest.approx(2 / 3, abs=1e-12)
    assert eval_bspline(4, 2.0) == pytest.approx(ref, abs=1e-14)


@pytest.mark.parametrize("m", [3, 4, 5])
@pytest.mark.parametrize("x", [0.3, 1.7, 2.2, 2.9])
def test_bspline_against_convolution_oracle(m, x):
    assert eval_bspline(m, x) == pytest.approx(bspline_by_convolution(m, x), abs=1e-11)


def test_invalid_order():
    with pytest.raises(InvalidOrderError):
        eval_bspline(0, 0.5)
    with pytest.raises(InvalidOrderError):
        eval_centered(0, 0.5)
    with pytest.raises(InvalidOrderError):
        BoxSplineGenerator(0, 1)


def test_bspline_zero_outside_support():
    x = np.array([-1.0, -1e-9, 4.0 + 1e-9, 7.0])
    assert np.all(eval_bspline(4, x) == 0.0)


def test_centered_values():
    assert eval_centered(1, 0.0) == 1.0
    assert eval_centered(1, 1.0) == 0.0
    assert eval_centered(1, -1.0) == 0.0
    assert eval_centered(2, 0.5) == pytest.approx(eval_bspline(4, 2.5), abs=1e-15)


@pytest.mark.parametrize("m", range(1, 9))
def test_bspline_nonnegative_unit_integral(m):
    x = np.linspace(-0.5, m + 0.5, 2001)
    assert np.all(eval_bspline(m, x) >= 0.0)
    total = sum(
        quad(lambda s: eval_bspline(m, s), j, j + 1, epsabs=1e-12, epsrel=1e-12)[0]
        for j in range(m)
    )
    assert total == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("m", range(1, 9))
def test_partition_of_unity(m):
    x = np.linspace(0.0, 1.0, 101, endpoint=False)
    total = sum(eval_bspline(m, x + k) for k in range(-1, m + 1))
    np.testing.assert_allclose(total, 1.0, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_centered_even_exact(n):
    x = np.linspace(0, n + 0.5, 301)
    assert np.max(np.abs(eval_centered(n, x) - eval_centered(n, -x))) <= 1e-14


@given(st.integers(1, 4), st.floats(-5, 5, allow_nan=False))
def test_centered_even_property(n, x):
    assert eval_centered(n, x) == eval_centered(n, -x)


def test_box_examples():
    g = BoxSplineGenerator(1, 1)
    assert eval_box(g, 0.0, 0.0) == 1.0
    assert eval_box(g, 1.0, 0.3) == 0.0
    g12 = BoxSplineGenerator(1, 2)
    assert eval_box(g12, 0.5, 0.5) == pytest.approx(eval_centered(1, 0.5) * eval_centered(2, 0.5))
    assert g12.support == (-1, 1, -2, 2)


@given(
    st.integers(1, 3), st.integers(1, 3),
    st.floats(-4, 4, allow_nan=False), st.floats(-4, 4, allow_nan=False),
)
def test_box_support_and_sign(n1, n2, x1, x2):
    g = BoxSplineGenerator(n1, n2)
    v = eval_box(g, x1, x2)
    assert v >= 0.0
    if abs(x1) >= n1 or abs(x2) >= n2:
        assert v == 0.0
    else:
        assert v > 0.0


def test_fourier_box_examples():
    g = BoxSplineGenerator(1, 1)
    assert fourier_box(g, 0.0, 0.0) == 1.0
    assert fourier_box(g, 2 * math.pi, 0.7) == pytest.approx(0.0, abs=1e-30)
    expected = (math.sin(0.5) / 0.5) ** 4
    assert fourier_box(g, 1.0, 1.0) == pytest.approx(expected, rel=1e-15)
    quad_val = fourier_box_quadrature(1, 1, 1.0, 1.0, eval_centered)
    assert abs(quad_val - expected) < 1e-10


def test_fourier_box_matches_2d_quadrature_random():
    rng = np.random.default_rng(7)
    for n1, n2 in [(1, 1), (1, 2), (2, 2)]:
        g = BoxSplineGenerator(n1, n2)
        for xi1, xi2 in rng.uniform(-8, 8, size=(50, 2)):
            q = fourier_box_quadrature(n1, n2, xi1, xi2, eval_centered)
            assert abs(q - fourier_box(g, xi1, xi2)) <= 1e-8


def test_sinc_taylor_branch_continuous():
    xs = np.array([1e-4 * (1 - 1e-12), 1e-4, 1e-4 * (1 + 1e-12)])
    vals = sinc_half(xs)
    assert np.max(np.abs(np.diff(vals))) < 1e-15
    assert sinc_half(0.0) == 1.0
    assert sinc_half(-3e-5) == pytest.approx(math.sin(1.5e-5) / 1.5e-5, rel=1e-15)


@settings(max_examples=50)
@given(st.floats(-50, 50, allow_nan=False))
def test_fourier_box_nonnegative(xi):
    assert fourier_box(BoxSplineGenerator(2, 1), xi, 0.3 * xi) >= 0.0
