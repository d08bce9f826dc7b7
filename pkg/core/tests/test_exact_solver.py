import numpy as np
from django.test import SimpleTestCase, tag

from core.distributions import JumpKind
from core.exact_solver import (
    CENTERED_POINTS, OU_POINTS, DistributionProfile, Grid, at_volatility_floor, compare_to_exact, solve,
)
from core.exceptions import InvalidParameterError, NonConvergenceError
from core.linear_approx import (
    DecisionPoints, decision_points_linear, linear_curves, live_cash_point, live_centered_curve, live_owned_curve,
    live_take_point, live_unavailable_curve,
)
from core.nonlinear_approx import decision_points_nonlinear, nonlinear_equities
from core.params import CubeKind, VolatilityPair, WinLossParams

EVEN = WinLossParams(1.0, 1.0)
DE = JumpKind.DOUBLE_EXPONENTIAL


def _constant(alpha, kind=DE):
    return DistributionProfile.constant(kind, alpha)


class GridTests(SimpleTestCase):
    def test_uniform_grid(self):
        grid = Grid.uniform(100)
        self.assertEqual(grid.points.size, 101)
        self.assertEqual(grid.points[0], 0.0)
        self.assertEqual(grid.points[-1], 1.0)
        self.assertEqual(grid.interior.size, 99)
        self.assertTrue(np.all(np.diff(grid.points) > 0.0))

    def test_small_grid_is_rejected(self):
        with self.assertRaises(InvalidParameterError):
            Grid.uniform(49)
        with self.assertRaises(InvalidParameterError):
            solve(EVEN, _constant(0.1), n=20)


class ProfileTests(SimpleTestCase):
    def test_negative_profile_is_rejected(self):
        profile = DistributionProfile.from_function(DE, lambda p: 0.1 - p, 'falling')
        with self.assertRaises(InvalidParameterError):
            profile.alphas(np.array([0.2, 0.5]))

    def test_profiles_with_equal_values_give_identical_solutions(self):
        wl = WinLossParams(1.2, 1.1)
        profiles = [
            _constant(0.1),
            DistributionProfile.from_table(DE, [0.0, 1.0], [0.1, 0.1]),
            DistributionProfile.from_function(DE, lambda p: np.full(np.shape(p), 0.1)),
        ]
        solutions = [solve(wl, profile, n=100) for profile in profiles]
        for other in solutions[1:]:
            np.testing.assert_array_equal(other.e_o, solutions[0].e_o)
            np.testing.assert_array_equal(other.e_u, solutions[0].e_u)
            np.testing.assert_array_equal(other.e_c, solutions[0].e_c)


class ZeroVolatilityTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.solution = solve(EVEN, _constant(0.0), n=500)

    def test_points_match_the_live_cube(self):
        self.assertAlmostEqual(self.solution.points.tp, 0.2, delta=1e-3)
        self.assertAlmostEqual(self.solution.points.cp, 0.8, delta=1e-3)

    def test_equities_match_the_live_curves(self):
        p = self.solution.grid.points
        np.testing.assert_allclose(self.solution.e_o, live_owned_curve(EVEN)(p), atol=1e-2)
        np.testing.assert_allclose(self.solution.e_u, live_unavailable_curve(EVEN)(p), atol=1e-2)
        np.testing.assert_allclose(self.solution.e_c, live_centered_curve(EVEN)(p), atol=1e-2)

    def test_uneven_games_settle_on_the_live_points(self):
        n = 500
        for wl in (WinLossParams(1.2, 1.1), WinLossParams(1.4, 1.0)):
            solution = solve(wl, _constant(0.0), n=n)
            self.assertAlmostEqual(solution.points.tp, live_take_point(wl), delta=2.0 / n, msg=str(wl))
            self.assertAlmostEqual(solution.points.cp, live_cash_point(wl), delta=2.0 / n, msg=str(wl))

    def test_floor_detection(self):
        grid = Grid.uniform(100)
        self.assertTrue(at_volatility_floor(_constant(0.0), grid))
        self.assertFalse(at_volatility_floor(_constant(0.05), grid))


class ModerateVolatilityTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.wl = WinLossParams(1.2, 1.1)
        cls.solution = solve(cls.wl, _constant(0.08), n=400)

    def test_converges_quickly(self):
        self.assertLessEqual(self.solution.iterations_ou, 10)
        self.assertLessEqual(self.solution.iterations_c, 10)
        self.assertLess(self.solution.residual, 1e-8)
        self.assertEqual(self.solution.diagnostics, ())

    def test_end_values_are_exact(self):
        for array in (self.solution.e_o, self.solution.e_u, self.solution.e_c):
            self.assertEqual(array[0], -self.wl.l)
            self.assertEqual(array[-1], self.wl.w)

    def test_ordering_and_monotonicity(self):
        s = self.solution
        self.assertTrue(np.all(s.e_u <= s.e_c + 1e-6))
        self.assertTrue(np.all(s.e_c <= s.e_o + 1e-6))
        for array in (s.e_o, s.e_u, s.e_c):
            self.assertTrue(np.all(np.diff(array) >= -1e-6))

    def test_point_ordering(self):
        pts = self.solution.points
        chain = [getattr(pts, name) for name in OU_POINTS]
        self.assertTrue(np.all(np.diff(chain) >= -1e-9), msg=str(chain))
        self.assertLessEqual(pts.tgc_u, pts.tp)
        self.assertLessEqual(pts.id_u, pts.id_o)
        self.assertLessEqual(pts.cp, pts.tgc_o)

    def test_points_satisfy_their_conditions(self):
        s = self.solution
        self.assertAlmostEqual(s.interpolate(CubeKind.PLAYER_OWNS, s.points.tp), -0.5, delta=1e-6)
        self.assertAlmostEqual(s.interpolate(CubeKind.OPPONENT_OWNS, s.points.cp), 0.5, delta=1e-6)

    def test_interpolate_and_array(self):
        s = self.solution
        self.assertIs(s.array('centered'), s.e_c)
        values = s.interpolate(CubeKind.CENTERED, np.array([0.25, 0.5]))
        self.assertEqual(values.shape, (2,))
        self.assertEqual(compare_to_exact(lambda p: s.interpolate(CubeKind.CENTERED, p), s, CubeKind.CENTERED), 0.0)


class SymmetryTests(SimpleTestCase):
    def test_even_game_take_and_cash_mirror(self):
        n = 200
        solution = solve(EVEN, _constant(0.1), n=n)
        self.assertAlmostEqual(solution.points.tp, 1.0 - solution.points.cp, delta=2.0 / n)
        self.assertAlmostEqual(solution.points.rd_u, 1.0 - solution.points.rd_o, delta=2.0 / n)


class NonConvergenceTests(SimpleTestCase):
    def test_iteration_cap_carries_last_iterate(self):
        with self.assertRaises(NonConvergenceError) as ctx:
            solve(WinLossParams(1.2, 1.1), _constant(0.08), n=100, max_iterations=1, tol=1e-15)
        self.assertIsInstance(ctx.exception.last_iterate, DecisionPoints)

    def test_zero_tolerance_is_not_the_default(self):
        wl, profile = WinLossParams(1.2, 1.1), _constant(0.08)
        self.assertIsInstance(solve(wl, profile, n=100).points, DecisionPoints)
        with self.assertRaises(NonConvergenceError):
            solve(wl, profile, n=100, max_iterations=5, tol=0.0)

    def test_bad_iteration_settings(self):
        with self.assertRaises(InvalidParameterError):
            solve(EVEN, _constant(0.08), n=100, max_iterations=0)
        with self.assertRaises(InvalidParameterError):
            solve(EVEN, _constant(0.08), n=100, tol=-1.0)


@tag('slow')
class ExactOracleTests(SimpleTestCase):
    def test_grid_refinement_moves_points_little(self):
        wl = WinLossParams(1.2, 1.1)
        coarse = solve(wl, _constant(0.08), n=400)
        fine = solve(wl, _constant(0.08), n=800)
        self.assertLess(coarse.points.max_change(fine.points, OU_POINTS + CENTERED_POINTS), 1e-3)

    def test_jump_family_barely_matters(self):
        wl = WinLossParams(1.2, 1.1)
        gauss = solve(wl, _constant(0.08, JumpKind.GAUSSIAN), n=400)
        laplace = solve(wl, _constant(0.08), n=400)
        self.assertLess(float(np.max(np.abs(gauss.e_c - laplace.e_c))), 0.02)

    def test_nonlinear_is_closer_than_linear(self):
        wl = WinLossParams(1.4, 1.0)
        vols = VolatilityPair.constant(0.2)
        solution = solve(wl, _constant(0.2), n=400)
        curves = linear_curves(wl, vols)
        eq = nonlinear_equities(wl, vols)
        for kind, linear, nonlinear in (
            (CubeKind.PLAYER_OWNS, curves.owned, eq.owned),
            (CubeKind.OPPONENT_OWNS, curves.unavailable, eq.unavailable),
            (CubeKind.CENTERED, curves.centered, eq.centered),
        ):
            dev_linear = compare_to_exact(linear, solution, kind)
            dev_nonlinear = compare_to_exact(nonlinear, solution, kind)
            self.assertLess(dev_nonlinear, dev_linear, msg=kind.value)
            self.assertLess(dev_nonlinear, 0.05, msg=kind.value)

    def test_nonlinear_points_are_closer_than_linear(self):
        wl, n = WinLossParams(1.4, 1.0), 400
        vols = VolatilityPair.constant(0.2)
        exact = solve(wl, _constant(0.2), n=n).points
        linear = decision_points_linear(wl, vols)
        nonlinear = decision_points_nonlinear(wl, vols)
        for name in OU_POINTS + CENTERED_POINTS:
            dev_linear = abs(getattr(linear, name) - getattr(exact, name))
            dev_nonlinear = abs(getattr(nonlinear, name) - getattr(exact, name))
            self.assertLessEqual(dev_nonlinear, dev_linear + 2.0 / n, msg=name)

    def test_mirrored_game_reflects_the_solution(self):
        wl = WinLossParams(1.3, 1.1)
        solution = solve(wl, _constant(0.1), n=300, tol=1e-9)
        mirrored = solve(wl.swapped(), _constant(0.1), n=300, tol=1e-9)
        np.testing.assert_allclose(solution.e_o, -mirrored.e_u[::-1], atol=1e-5)
        np.testing.assert_allclose(solution.e_c, -mirrored.e_c[::-1], atol=1e-5)
