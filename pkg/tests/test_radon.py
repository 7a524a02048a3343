import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from oracles import hat, radon_fourier_quadrature
from saradon.errors import DomainError, InvalidProjectionError
from saradon.projection import LatticeRegion
from saradon.radon import (
    GeneratorField,
    ProjectionVector,
    RadonProfile,
    closedform_diagnostics,
    fourier_slice,
    radon_box_analytic,
    radon_box_closedform_n1,
    radon_dilated,
    radon_f,
    radon_line_integral,
    support_bound,
)
from saradon.recon import CoefficientGrid
from saradon.splines import BoxSplineGenerator, eval_centered

THETA = 1.2208


def scipy_line_integral(theta, t):
    """Line integral of phi_2 x phi_2 using scipy.quad; independent of the
    library's quadrature."""
    c, s = math.cos(theta), math.sin(theta)
    f = lambda u: float(hat(t * c - u * s + 1.0) * hat(t * s + u * c + 1.0))  # noqa: E731
    pts = sorted({(t * c - k) / s for k in (-1, 0, 1)} | {(k - t * s) / c for k in (-1, 0, 1)})
    return quad(f, -3, 3, points=pts, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


class TestProjectionVector:
    def test_unit_norm(self):
        for th in np.linspace(0, 2 * math.pi, 17):
            p = ProjectionVector.from_angle(th).p
            assert abs(math.hypot(*p) - 1.0) <= 1e-14

    def test_integer_lift(self):
        pv = ProjectionVector.from_integer((1, 5))
        assert pv.gamma == pytest.approx(math.sqrt(26))
        p = pv.p
        assert pv.gamma * p[0] == pytest.approx(1, abs=1e-12)
        assert pv.gamma * p[1] == pytest.approx(5, abs=1e-12)
        assert math.cos(pv.theta) == pytest.approx(p[0], abs=1e-14)

    def test_zero_integer_vector(self):
        with pytest.raises(InvalidProjectionError):
            ProjectionVector.from_integer((0, 0))


class TestLineIntegral:
    def test_line_misses_support(self, gen11):
        f = GeneratorField(gen11)
        proj = ProjectionVector.from_angle(math.pi / 2)
        for t in (-1.5, 1.0001, 3.0):
            assert radon_line_integral(f, proj, t) == 0.0

    def test_axis_projection(self, gen11):
        f = GeneratorField(gen11)
        assert radon_line_integral(f, ProjectionVector.from_angle(0.0), 0.0) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_against_scipy(self, gen11):
        f = GeneratorField(gen11)
        proj = ProjectionVector.from_angle(THETA)
        for t in np.linspace(-1.4, 1.4, 23):
            assert radon_line_integral(f, proj, t) == pytest.approx(
                scipy_line_integral(THETA, t), abs=1e-11
            )

    def test_without_break_hints(self, gen11):
        # adaptive refinement alone must still reach the target accuracy
        f = GeneratorField(gen11)
        proj = ProjectionVector.from_angle(THETA)
        for t in (-0.9, 0.0, 0.37, 1.1):
            v = radon_line_integral(f, proj, t, box=f.box, breaks=None)
            nobreaks = radon_line_integral(
                lambda a, b: f(a, b), proj, t, box=f.box
            )
            assert nobreaks == pytest.approx(v, abs=1e-9)

    def test_zero_projection(self, gen11):
        with pytest.raises(InvalidProjectionError):
            radon_line_integral(GeneratorField(gen11), (0.0, 0.0), 0.1)

    def test_nonfinite_propagates(self):
        f = lambda a, b: np.full(np.broadcast(a, b).shape, np.nan)  # noqa: E731
        assert math.isnan(radon_line_integral(f, (1.0, 0.0), 0.0, box=(-1, 1, -1, 1)))


class TestAnalytic:
    def test_degenerate_axis(self, gen11):
        t = np.linspace(-1.5, 1.5, 31)
        np.testing.assert_allclose(
            radon_box_analytic(gen11, ProjectionVector.from_angle(0.0), t), eval_centered(1, t)
        )

    def test_positive_at_zero(self, gen11):
        for th in np.linspace(0, 2 * math.pi, 13):
            assert radon_box_analytic(gen11, ProjectionVector.from_angle(th), 0.0) > 0.0

    def test_oracle_equivalence_1000(self, gen11):
        rng = np.random.default_rng(0)
        proj = ProjectionVector.from_angle(THETA)
        t = rng.uniform(-1.5, 1.5, 1000)
        ref = radon_line_integral(GeneratorField(gen11), proj, t)
        assert np.max(np.abs(radon_box_analytic(gen11, proj, t) - ref)) <= 1e-8

    @pytest.mark.parametrize("orders", [(1, 2), (2, 1), (2, 3), (3, 3)])
    def test_higher_orders(self, orders):
        gen = BoxSplineGenerator(*orders)
        rng = np.random.default_rng(sum(orders))
        for th in rng.uniform(0, 2 * math.pi, 4):
            proj = ProjectionVector.from_angle(th)
            r = gen.n1 * abs(proj.p[0]) + gen.n2 * abs(proj.p[1])
            t = rng.uniform(-r - 0.1, r + 0.1, 100)
            ref = radon_line_integral(GeneratorField(gen), proj, t)
            assert np.max(np.abs(radon_box_analytic(gen, proj, t) - ref)) <= 1e-8

    def test_zero_projection(self, gen11):
        with pytest.raises(InvalidProjectionError):
            radon_box_analytic(gen11, (0.0, 0.0), 0.0)

    def test_scalar_and_array(self, gen11):
        proj = ProjectionVector.from_angle(THETA)
        assert isinstance(radon_box_analytic(gen11, proj, 0.2), float)
        assert radon_box_analytic(gen11, proj, np.zeros((2, 3))).shape == (2, 3)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0, 2 * math.pi, allow_nan=False),
    st.floats(0, 3, allow_nan=False),
    st.integers(1, 3),
    st.integers(1, 3),
)
def test_profile_even(theta, t, n1, n2):
    gen = BoxSplineGenerator(n1, n2)
    proj = ProjectionVector.from_angle(theta)
    a = radon_box_analytic(gen, proj, t)
    b = radon_box_analytic(gen, proj, -t)
    assert abs(a - b) <= 1e-12
    assert a >= -1e-15


@settings(max_examples=30, deadline=None)
@given(st.floats(0, math.pi, allow_nan=False), st.floats(-3, 3, allow_nan=False))
def test_rotation_by_pi(theta, t):
    gen = BoxSplineGenerator(1, 2)
    a = radon_box_analytic(gen, ProjectionVector.from_angle(theta), t)
    b = radon_box_analytic(gen, ProjectionVector.from_angle(theta + math.pi), t)
    assert abs(a - b) <= 1e-12


def test_normalization_random_angles():
    rng = np.random.default_rng(3)
    gen = BoxSplineGenerator(1, 1)
    x, w = np.polynomial.legendre.leggauss(20)
    for th in rng.uniform(0, 2 * math.pi, 20):
        proj = ProjectionVector.from_angle(th)
        c, s = proj.p
        # piecewise cubic, kinks at the projected grid vertices p.v, v in {-1,0,1}^2
        edges = np.unique([c * i + s * j for i in (-1, 0, 1) for j in (-1, 0, 1)])
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            h = 0.5 * (hi - lo)
            total += h * np.dot(w, radon_box_analytic(gen, proj, 0.5 * (lo + hi) + h * x))
        assert total == pytest.approx(1.0, abs=1e-10)


def test_tight_support():
    rng = np.random.default_rng(4)
    gen = BoxSplineGenerator(2, 1)
    for th in rng.uniform(0, 2 * math.pi, 10):
        prof = RadonProfile(gen, ProjectionVector.from_angle(th), method="quadrature")
        r = prof.radius
        outside = np.concatenate([r + rng.uniform(1e-9, 1, 5), -r - rng.uniform(1e-9, 1, 5)])
        assert np.all(np.abs(prof(outside)) <= 1e-12)
        lo, hi = support_bound(prof.projection.p, gen.support)
        assert lo <= -r and hi >= r


class TestClosedForm:
    def test_endpoint_zero(self):
        c, s = math.cos(THETA), math.sin(THETA)
        assert radon_box_closedform_n1(THETA, s + c) == 0.0
        assert radon_box_closedform_n1(THETA, -s - c) == 0.0

    def test_value_at_zero(self):
        T, c = math.tan(THETA), math.cos(THETA)
        expected = (6 * T - 2) / (6 * c * T * T)
        assert radon_box_closedform_n1(THETA, 0.0) == pytest.approx(expected, rel=1e-15)
        assert radon_box_closedform_n1(THETA, 0.0, verbatim=True) == pytest.approx(expected, rel=1e-15)

    def test_matches_oracle(self, gen11):
        f = GeneratorField(gen11)
        proj = ProjectionVector.from_angle(THETA)
        assert radon_box_closedform_n1(THETA, 0.37) == pytest.approx(
            radon_line_integral(f, proj, 0.37), abs=1e-8
        )
        assert radon_box_closedform_n1(THETA, 0.0) == pytest.approx(
            radon_line_integral(f, proj, 0.0), abs=1e-8
        )

    @pytest.mark.parametrize("theta", [0.5, math.atan(2) - 1e-3, math.pi / 2, 2.0])
    def test_domain_error(self, theta):
        with pytest.raises(DomainError):
            radon_box_closedform_n1(theta, 0.1)

    def test_diagnostics_isolate_misprinted_branch(self):
        report = closedform_diagnostics(THETA, samples_per_branch=20)
        assert len(report) == 8
        for row in report:
            assert row["corrected_max_error"] <= 1e-12
        bad = [row["branch"] for row in report if row["printed_max_error"] > 1e-8]
        assert bad == ["[-sin, -sin+cos)"]

    def test_profile_method(self):
        prof = RadonProfile(BoxSplineGenerator(), ProjectionVector.from_angle(THETA), "closed-form-n1")
        assert prof(0.1) == pytest.approx(radon_box_closedform_n1(THETA, 0.1))
        with pytest.raises(DomainError):
            RadonProfile(BoxSplineGenerator(1, 2), ProjectionVector.from_angle(THETA), "closed-form-n1")


class TestRadonF:
    def test_zero_coeffs(self, gen11, paper_proj, region04):
        assert radon_f(CoefficientGrid.zeros(region04), gen11, paper_proj, 0.7) == 0.0

    def test_single_term(self, gen11, paper_proj):
        reg = LatticeRegion((0, 0, 0, 0))
        cg = CoefficientGrid(reg, [1.0])
        for t in (-0.5, 0.0, 0.9):
            assert radon_f(cg, gen11, paper_proj, t) == radon_box_analytic(gen11, paper_proj, t)

    def test_linearity_against_oracle(self, gen11, paper_proj, region04):
        cg = CoefficientGrid.random(region04, seed=11)
        f = cg.field(gen11)
        for t in (1.3, 2.2, 4.0, -0.5):
            assert radon_f(cg, gen11, paper_proj, t) == pytest.approx(
                radon_line_integral(f, paper_proj, t), abs=1e-8
            )


class TestSupportBound:
    def test_examples(self):
        assert support_bound([1, 0], (-1, 1, -1, 1)) == pytest.approx((-math.sqrt(2), math.sqrt(2)))
        assert support_bound([1, 5], (-1, 1, -1, 1)) == pytest.approx((-math.sqrt(52), math.sqrt(52)))

    def test_zero(self):
        with pytest.raises(InvalidProjectionError):
            support_bound([0, 0], (0, 1, 0, 1))

    def test_dilated_projection_vanishes_outside(self, gen11, region04):
        cg = CoefficientGrid.random(region04, seed=5)
        f = cg.field(gen11)
        lo, hi = support_bound([1, 5], f.box)
        ys = np.concatenate([np.linspace(hi, hi + 5, 7), np.linspace(lo - 5, lo, 7)])
        assert np.all(np.abs(radon_dilated(f, [1, 5], ys)) <= 1e-12)

    def test_dilated_fourier_relation(self, gen11):
        # (Ptilde phi)^(xi) = phi^(ptilde xi): check through the mean value
        f = GeneratorField(gen11)
        y = np.linspace(-6, 6, 4801)
        vals = radon_dilated(f, [1, 5], y)
        assert np.trapezoid(vals, y) == pytest.approx(1.0, abs=1e-5)


class TestFourierSlice:
    def test_at_zero(self, gen11, paper_proj, region04):
        cg = CoefficientGrid.random(region04, seed=2)
        assert fourier_slice(gen11, cg, paper_proj, 0.0) == pytest.approx(cg.values.sum())

    def test_axis_slice(self, gen11):
        cg = CoefficientGrid(LatticeRegion((0, 0, 0, 0)), [1.0])
        xi = 1.7
        got = fourier_slice(gen11, cg, ProjectionVector.from_angle(0.0), xi)
        assert got == pytest.approx((math.sin(xi / 2) / (xi / 2)) ** 2, abs=1e-15)

    def test_matches_quadrature(self, gen11, paper_proj, region04):
        cg = CoefficientGrid.random(region04, seed=8)
        ref = radon_fourier_quadrature(
            lambda t: radon_f(cg, gen11, paper_proj, t), paper_proj.p, cg.field(gen11).box, 0.8
        )[0]
        assert abs(fourier_slice(gen11, cg, paper_proj, 0.8) - ref) <= 1e-6
