import math

import numpy as np
import pytest

from annulus_green import (
    AnnulusGeometry,
    DomainValidationError,
    SingularityError,
    TruncationPolicy,
    ball_green_closed_form,
    critical_equation_eval,
    green_eval,
    green_piecewise_eval,
    modal_coefficient,
    newtonian_potential,
    robin2d_eval,
    robin2d_first,
    robin2d_second,
    robin_eval,
    robin_radial_gradient,
    robin_radial_gradient_derivative,
)
from conftest import random_unit

POLICY = TruncationPolicy(abs_tol=1e-12, max_terms=300_000)


def neville_to_zero(xs, vals):
    tab = [float(v) for v in vals]
    for j in range(1, len(tab)):
        for i in range(len(tab) - 1, j - 1, -1):
            tab[i] = (xs[i - j] * tab[i] - xs[i] * tab[i - 1]) / (xs[i - j] - xs[i])
    return tab[-1]


class TestModalCoefficient:
    GEOM = AnnulusGeometry(3, 0.5)

    def test_vanishes_on_boundaries(self):
        for m in (0, 1, 7):
            assert modal_coefficient(self.GEOM, m, 0.5, 0.8) == 0.0
            assert modal_coefficient(self.GEOM, m, 0.7, 1.0) == 0.0

    def test_hand_evaluated_mode_zero(self):
        # n = 3, m = 0: (r - a)(1 - s) / ((r s)(1 - a)) / (4 pi) at r=0.6, s=0.8
        expected = (0.6 - 0.5) * (1 - 0.8) / (1.0 * 0.48 * 0.5) / (4 * math.pi)
        assert modal_coefficient(self.GEOM, 0, 0.6, 0.8) == pytest.approx(expected, rel=1e-14)

    def test_symmetry_and_positivity(self, rng):
        for _ in range(30):
            r, s = rng.uniform(0.5, 1.0, size=2)
            m = int(rng.integers(0, 40))
            v1 = modal_coefficient(self.GEOM, m, r, s)
            v2 = modal_coefficient(self.GEOM, m, s, r)
            assert v1 == v2  # radius-ordered internally
            if 0.5 < r < 1 and 0.5 < s < 1:
                assert v1 > 0.0

    def test_rejects_outside_annulus(self):
        with pytest.raises(DomainValidationError):
            modal_coefficient(self.GEOM, 0, 0.4, 0.8)


class TestGreenEval:
    GEOM = AnnulusGeometry(3, 0.5)

    def test_dirichlet_boundary(self):
        res = green_eval(self.GEOM, [1.0, 0.0, 0.0], [0.7, 0.0, 0.0], POLICY)
        assert res.converged
        assert abs(res.value) <= res.tail_bound + 1e-9

    def test_symmetry(self):
        x = np.array([0.6, 0.1, 0.0])
        y = np.array([0.8, -0.2, 0.1])
        g1 = green_eval(self.GEOM, x, y, POLICY)
        g2 = green_eval(self.GEOM, y, x, POLICY)
        assert abs(g1.value - g2.value) <= 1e-10 * max(1.0, abs(g1.value))

    def test_small_hole_matches_ball(self):
        geom = AnnulusGeometry(3, 0.01)
        x = np.array([0.5, 0.0, 0.0])
        y = np.array([0.3, 0.2, 0.0])
        res = green_eval(geom, x, y, POLICY)
        ref = ball_green_closed_form(3, x, y)
        # the hole perturbs at scale a^(n-2) = a
        assert abs(res.value - ref) <= 2 * 0.01

    def test_refuses_near_diagonal(self):
        x = np.array([0.7, 0.0, 0.0])
        with pytest.raises(SingularityError):
            green_eval(self.GEOM, x, x, POLICY)
        with pytest.raises(SingularityError):
            green_eval(self.GEOM, x, x + 1e-8, POLICY)

    def test_rejects_outside_annulus(self):
        with pytest.raises(DomainValidationError):
            green_eval(self.GEOM, [0.3, 0.0, 0.0], [0.7, 0.0, 0.0], POLICY)


class TestPiecewiseRoute:
    GEOM = AnnulusGeometry(3, 0.5)

    def test_boundary_gives_zero(self):
        res = green_piecewise_eval(self.GEOM, [1.0, 0.0, 0.0], [0.7, 0.0, 0.0], POLICY)
        assert abs(res.value) <= res.tail_bound + 1e-12

    def test_agrees_with_subtracted_route(self):
        x = np.array([0.55, 0.0, 0.0])
        y = np.array([0.0, 0.9, 0.0])
        g1 = green_eval(self.GEOM, x, y, POLICY)
        g2 = green_piecewise_eval(self.GEOM, x, y, POLICY)
        assert abs(g1.value - g2.value) <= g1.tail_bound + g2.tail_bound + 1e-9

    def test_agrees_in_four_dimensions(self):
        geom = AnnulusGeometry(4, 0.3)
        x = np.array([0.5, 0.0, 0.0, 0.0])
        y = np.array([0.8, 0.0, 0.0, 0.0])
        g1 = green_eval(geom, x, y, POLICY)
        g2 = green_piecewise_eval(geom, x, y, POLICY)
        assert abs(g1.value - g2.value) <= g1.tail_bound + g2.tail_bound + 1e-9

    def test_refuses_equal_radii(self):
        x = np.array([0.7, 0.0, 0.0])
        y = np.array([0.0, 0.7, 0.0])
        with pytest.raises(DomainValidationError):
            green_piecewise_eval(self.GEOM, x, y, POLICY)


class TestRobin:
    GEOM = AnnulusGeometry(3, 0.5)

    def test_golden_value(self, golden):
        fix = golden["robin_n3_a05_r07"]
        res = robin_eval(self.GEOM, 0.7, POLICY)
        assert res.converged
        assert res.value == pytest.approx(fix["value"], abs=1e-10)
        assert res.value == pytest.approx(fix["cross_value"], abs=1e-6)

    def test_diagonal_limit_of_green(self):
        # recompute the independent route: polynomial extrapolation of
        # (green - fundamental solution) along an aligned radial approach
        r = 0.7
        e1 = np.array([1.0, 0.0, 0.0])
        hs = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
        vals = []
        for h in hs:
            x = (r + h) * e1
            y = r * e1
            vals.append(green_eval(self.GEOM, x, y, POLICY).value - newtonian_potential(self.GEOM, x, y))
        lim = neville_to_zero(hs, vals)
        assert robin_eval(self.GEOM, r, POLICY).value == pytest.approx(lim, abs=1e-6)

    def test_negative_and_divergent_at_outer_wall(self):
        wide = TruncationPolicy(abs_tol=1e-8, max_terms=500_000)
        v = robin_eval(self.GEOM, 1 - 9e-4, wide)
        assert v.converged and v.value < -10.0
        closer = robin_eval(self.GEOM, 1 - 4.5e-4, wide)
        assert closer.value < v.value

    def test_truncation_difference_within_tail(self):
        short = TruncationPolicy(abs_tol=0.0, max_terms=15, tail_safety=1)
        longer = TruncationPolicy(abs_tol=0.0, max_terms=30, tail_safety=1)
        v_short = robin_eval(self.GEOM, 0.7, short)
        v_long = robin_eval(self.GEOM, 0.7, longer)
        assert abs(v_short.value - v_long.value) <= v_short.tail_bound

    def test_rejects_boundary_radius(self):
        for bad in (0.5, 1.0, 0.4, 1.2):
            with pytest.raises(DomainValidationError):
                robin_eval(self.GEOM, bad, POLICY)


class TestRadialGradient:
    GEOM = AnnulusGeometry(3, 0.5)

    def test_matches_finite_difference(self):
        h = 1e-4
        for r in (0.65, 0.7, 0.8):
            grad = robin_radial_gradient(self.GEOM, r, POLICY)
            fd = (
                robin_eval(self.GEOM, r + h, POLICY).value
                - robin_eval(self.GEOM, r - h, POLICY).value
            ) / (2 * h) * r
            assert abs(grad.value - fd) / max(1.0, abs(grad.value)) <= 1e-6

    def test_signs_near_boundaries(self):
        assert robin_radial_gradient(self.GEOM, 0.51, POLICY).value > 0
        assert robin_radial_gradient(self.GEOM, 0.99, POLICY).value < 0

    def test_critical_equation_is_proportional(self):
        # the root equation is the gradient series without its -2/omega
        # factor; the two accumulations round independently
        for r in (0.6, 0.75, 0.9):
            grad = robin_radial_gradient(self.GEOM, r, POLICY).value
            raw = critical_equation_eval(self.GEOM, r, POLICY).value
            assert raw == pytest.approx(-0.5 * self.GEOM.omega * grad, rel=1e-10)


class TestGradientDerivative:
    def test_negative_everywhere_sampled(self):
        for n, a in ((3, 0.5), (4, 0.3)):
            geom = AnnulusGeometry(n, a)
            for r in np.linspace(a + 0.05 * (1 - a), 1 - 0.05 * (1 - a), 20):
                assert robin_radial_gradient_derivative(geom, float(r), POLICY).value < 0

    def test_matches_finite_difference_of_gradient(self):
        geom = AnnulusGeometry(3, 0.5)
        h = 1e-4
        for r in (0.68, 0.75, 0.82):
            slope = robin_radial_gradient_derivative(geom, r, POLICY)
            fd = (
                robin_radial_gradient(geom, r + h, POLICY).value
                - robin_radial_gradient(geom, r - h, POLICY).value
            ) / (2 * h)
            assert abs(slope.value - fd) / max(1.0, abs(slope.value)) <= 1e-6


class TestPlanarRobin:
    def test_derivative_consistency(self):
        h = 1e-5
        for r in (0.3, 0.5, 0.8):
            fd = (
                robin2d_eval(0.2, r + h, POLICY).value
                - robin2d_eval(0.2, r - h, POLICY).value
            ) / (2 * h)
            assert robin2d_first(0.2, r, POLICY).value == pytest.approx(fd, abs=1e-6)

    def test_convexity(self):
        for r in np.linspace(0.21, 0.99, 50):
            assert robin2d_second(0.2, float(r), POLICY).value > 0

    def test_derivative_sign_change(self):
        assert robin2d_first(0.2, 0.21, POLICY).value < 0
        assert robin2d_first(0.2, 0.99, POLICY).value > 0

    def test_second_derivative_consistency(self):
        h = 1e-4
        for r in (0.4, 0.6):
            fd = (
                robin2d_first(0.2, r + h, POLICY).value
                - robin2d_first(0.2, r - h, POLICY).value
            ) / (2 * h)
            assert robin2d_second(0.2, r, POLICY).value == pytest.approx(fd, rel=1e-6)

    def test_rejects_bad_radii(self):
        with pytest.raises(DomainValidationError):
            robin2d_eval(0.2, 0.15, POLICY)
        with pytest.raises(DomainValidationError):
            robin2d_eval(1.2, 0.5, POLICY)


class TestGreenProperties:
    def test_positivity_random_pairs(self, rng):
        geom = AnnulusGeometry(3, 0.5)
        for _ in range(40):
            x = rng.uniform(0.52, 0.98) * random_unit(rng, 3)
            y = rng.uniform(0.52, 0.98) * random_unit(rng, 3)
            if np.linalg.norm(x - y) < 1e-3:
                continue
            assert green_eval(geom, x, y, POLICY).value > -1e-10

    def test_regular_part_harmonic(self, rng):
        geom = AnnulusGeometry(3, 0.5)
        tight = TruncationPolicy(abs_tol=1e-13, max_terms=300_000)
        h = 1e-3
        for _ in range(5):
            x = rng.uniform(0.6, 0.9) * random_unit(rng, 3)
            y = rng.uniform(0.6, 0.9) * random_unit(rng, 3)
            if np.linalg.norm(x - y) < 0.05:
                continue

            def regular(p):
                return green_eval(geom, p, y, tight).value - newtonian_potential(geom, p, y)

            lap = -6.0 * regular(x)
            for i in range(3):
                e = np.zeros(3)
                e[i] = h
                lap += regular(x + e) + regular(x - e)
            assert abs(lap) / h**2 <= 1e-4
