import numpy as np
from django.core.cache import cache
from django.test import SimpleTestCase

from core.advisor import (
    DoublerAction, EquityMethod, ExactModel, LinearModel, NonlinearModel, Side, TakerAction,
    advise, equity, equity_at, get_model, recommend,
)
from core.exact_solver import DistributionProfile, solve
from core.exceptions import DegenerateStateError
from core.params import CubeKind, CubeState, GammonProbs, VolatilityPair, WinLossParams

EVEN = WinLossParams(1.0, 1.0)
VOLS = VolatilityPair.constant(0.1)
ACTION_RANK = {DoublerAction.NO_DOUBLE: 0, DoublerAction.DOUBLE: 1, DoublerAction.TOO_GOOD: 2}


class ModelFactoryTests(SimpleTestCase):
    def test_get_model(self):
        self.assertIsInstance(get_model('linear'), LinearModel)
        self.assertIsInstance(get_model(EquityMethod.NONLINEAR, 'gaussian'), NonlinearModel)
        exact = get_model('exact', grid_size=120)
        self.assertIsInstance(exact, ExactModel)
        self.assertEqual(exact.grid_size, 120)

    def test_unknown_method_is_rejected(self):
        with self.assertRaises(ValueError):
            get_model('quadratic')


class RecommendationTests(SimpleTestCase):
    def test_owned_cube_double_pass(self):
        advice = recommend(GammonProbs(0.9), CubeState(CubeKind.PLAYER_OWNS, 2), VOLS, 'linear')
        self.assertEqual(advice.doubler, Side.PLAYER)
        self.assertIs(advice.doubler_action, DoublerAction.DOUBLE)
        self.assertIs(advice.taker_action, TakerAction.PASS)
        self.assertEqual(advice.decision, 'double/pass')

    def test_opponent_double_is_a_pass(self):
        advice = recommend(GammonProbs(0.15), CubeState(CubeKind.OPPONENT_OWNS, 2), VOLS, 'linear')
        self.assertEqual(advice.doubler, Side.OPPONENT)
        self.assertIs(advice.doubler_action, DoublerAction.DOUBLE)
        self.assertEqual(advice.decision, 'pass')

    def test_centered_even_position_is_no_double(self):
        for alpha in (0.02, 0.1, 0.2):
            for method in ('linear', 'nonlinear'):
                advice = recommend(GammonProbs(0.5), CubeState(CubeKind.CENTERED), VolatilityPair.constant(alpha), method)
                self.assertEqual(advice.decision, 'no double', msg=f"{method} alpha={alpha}")
                self.assertIs(advice.taker_action, TakerAction.NOT_APPLICABLE)

    def test_double_is_worth_more_than_holding(self):
        advice = advise(0.75, EVEN, CubeState(CubeKind.PLAYER_OWNS), VOLS, LinearModel())
        self.assertIs(advice.doubler_action, DoublerAction.DOUBLE)
        self.assertEqual(advice.decision, 'double/take')
        self.assertGreaterEqual(advice.double_equity, advice.no_double_equity)
        self.assertEqual(advice.double_equity, min(advice.double_take_equity, 1.0))

    def test_take_at_the_take_point(self):
        model = LinearModel()
        tp = model.points(EVEN, VOLS).tp
        advice = advise(tp, EVEN, CubeState(CubeKind.OPPONENT_OWNS), VOLS, model)
        self.assertIs(advice.taker_action, TakerAction.TAKE)
        below = advise(tp - 1e-6, EVEN, CubeState(CubeKind.OPPONENT_OWNS), VOLS, model)
        self.assertIs(below.taker_action, TakerAction.PASS)

    def test_gammonish_winner_becomes_too_good(self):
        advice = recommend(GammonProbs(0.97, 0.6), CubeState(CubeKind.CENTERED), VOLS, 'linear')
        self.assertIs(advice.doubler_action, DoublerAction.TOO_GOOD)
        self.assertEqual(advice.decision, 'too good')

    def test_actions_never_reverse_as_p_grows(self):
        wl = WinLossParams(1.3, 1.1)
        for kind in (CubeKind.CENTERED, CubeKind.PLAYER_OWNS):
            for model in (LinearModel(), NonlinearModel()):
                ranks = [
                    ACTION_RANK[advise(p, wl, CubeState(kind), VOLS, model).doubler_action]
                    for p in np.linspace(0.02, 0.98, 25)
                ]
                self.assertTrue(np.all(np.diff(ranks) >= 0), msg=f"{kind.value} {model.method.value}")

    def test_decided_positions_are_rejected(self):
        with self.assertRaises(DegenerateStateError):
            recommend(GammonProbs(1.0), CubeState(CubeKind.CENTERED), VOLS, 'linear')


class EquityTests(SimpleTestCase):
    def test_even_centered_equity_is_zero(self):
        cube = CubeState(CubeKind.CENTERED, 2)
        vols = VolatilityPair.constant(0.0)
        self.assertAlmostEqual(equity(GammonProbs(0.5), cube, vols, 'linear'), 0.0, places=12)
        self.assertAlmostEqual(equity(GammonProbs(0.5), cube, vols, 'linear', normalized=False), 0.0, places=12)

    def test_certain_loss_is_minus_l(self):
        wl = WinLossParams(1.3, 1.2)
        for method in ('linear', 'nonlinear'):
            for kind in CubeKind:
                self.assertAlmostEqual(equity_at(0.0, wl, CubeState(kind), VOLS, method), -1.2, delta=1e-9)

    def test_points_scale_with_the_cube(self):
        wl = WinLossParams(1.2, 1.1)
        normalized = equity_at(0.6, wl, CubeState(CubeKind.PLAYER_OWNS, 4), VOLS, 'nonlinear')
        points = equity_at(0.6, wl, CubeState(CubeKind.PLAYER_OWNS, 4), VOLS, 'nonlinear', normalized=False)
        self.assertAlmostEqual(points, 4.0 * normalized, places=12)


class ExactModelTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def test_matches_the_grid_solution(self):
        wl = WinLossParams(1.2, 1.1)
        vols = VolatilityPair.constant(0.08)
        value = equity_at(0.75, wl, CubeState(CubeKind.PLAYER_OWNS), vols, 'exact', grid_size=100)
        solution = solve(wl, DistributionProfile.constant('double_exponential', 0.08), n=100)
        self.assertAlmostEqual(value, solution.interpolate(CubeKind.PLAYER_OWNS, 0.75), places=12)

    def test_solutions_are_cached(self):
        model = ExactModel(grid_size=80)
        vols = VolatilityPair.constant(0.1)
        first = model.solution(EVEN, vols)
        np.testing.assert_array_equal(model.solution(EVEN, vols).e_c, first.e_c)
        key = f"exact_solution:double_exponential:{1.0!r}:{1.0!r}:{0.1!r}:80"
        self.assertIsNotNone(cache.get(key))

    def test_exact_advice_reports_the_solver(self):
        advice = recommend(GammonProbs(0.5), CubeState(CubeKind.CENTERED), VOLS, 'exact', grid_size=100)
        self.assertEqual(advice.decision, 'no double')
        self.assertIs(advice.method, EquityMethod.EXACT)
