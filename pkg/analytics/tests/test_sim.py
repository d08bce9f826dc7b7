import math

import numpy as np
from django.test import SimpleTestCase, tag

from analytics.sim import (
    CubelessStrategy, GameEnd, JumpStrategy, ProcessConfig, Strategy, VolatilityProfile, alpha_sweep,
    duel, has_interior_optimum, play_game, sample_trajectories, strategy_from_dict, summarize,
)
from core.exceptions import InvalidParameterError


class AlwaysDouble(Strategy):
    name = 'always-double'

    def wants_double(self, p, owns_cube, w, l):
        return True

    def takes(self, p, w, l):
        return True

    def to_dict(self):
        return {'kind': 'always-double'}


class NeverTake(CubelessStrategy):
    name = 'never-take'

    def takes(self, p, w, l):
        return False


class ProcessConfigTests(SimpleTestCase):
    def test_zero_volatility_is_frozen(self):
        cfg = ProcessConfig.from_volatility(0.0)
        self.assertIsNone(cfg.per_ply_distribution)
        self.assertEqual(cfg.alpha_ply, 0.0)
        self.assertEqual(cfg.cube_cap, 64)
        self.assertEqual(cfg.max_plies, 5000)

    def test_validation(self):
        with self.assertRaises(InvalidParameterError):
            ProcessConfig.from_volatility(0.05, cube_cap=3)
        with self.assertRaises(InvalidParameterError):
            ProcessConfig.from_volatility(0.05, max_plies=5)
        with self.assertRaises(InvalidParameterError):
            ProcessConfig.from_volatility(0.05, w=0.5)
        with self.assertRaises(InvalidParameterError):
            ProcessConfig.from_volatility(-0.01)

    def test_dict_round_trip(self):
        cfg = ProcessConfig.from_volatility(
            0.04, 'gaussian', w=1.3, l=1.1, cube_cap=16, max_plies=800,
            volatility_profile=VolatilityProfile((0.0, 1.0), (0.03, 0.05)),
        )
        again = ProcessConfig.from_dict(cfg.to_dict())
        first, second = cfg.to_dict(), again.to_dict()
        self.assertAlmostEqual(first.pop('alpha_ply'), second.pop('alpha_ply'), places=14)
        self.assertEqual(first, second)
        self.assertEqual(again.jump_kind, 'gaussian')
        self.assertAlmostEqual(again.alpha_ply, 0.04, places=14)


class StrategyTests(SimpleTestCase):
    def test_jump_strategy_rules(self):
        strategy = JumpStrategy(0.1)
        self.assertFalse(strategy.wants_double(0.70, True, 1.0, 1.0))
        self.assertTrue(strategy.wants_double(0.75, True, 1.0, 1.0))
        self.assertTrue(strategy.wants_double(0.69, False, 1.0, 1.0))
        self.assertFalse(strategy.wants_double(0.60, False, 1.0, 1.0))
        tp = strategy.points(1.0, 1.0).tp
        self.assertTrue(strategy.takes(tp, 1.0, 1.0))
        self.assertFalse(strategy.takes(tp - 1e-6, 1.0, 1.0))

    def test_statistical_scaling(self):
        strategy = JumpStrategy(0.091, scale_statistical=True)
        self.assertAlmostEqual(strategy.effective_alpha, 0.113, places=12)
        self.assertIn('scaled', strategy.name)

    def test_dict_round_trip(self):
        strategy = JumpStrategy(0.12, 'nonlinear', scale_statistical=True)
        again = strategy_from_dict(strategy.to_dict())
        self.assertEqual(again.to_dict(), strategy.to_dict())
        self.assertIsInstance(strategy_from_dict({'kind': 'cubeless'}), CubelessStrategy)
        with self.assertRaises(InvalidParameterError):
            strategy_from_dict({'kind': 'oracle'})


class GameTests(SimpleTestCase):
    def test_frozen_process_truncates_at_zero(self):
        cfg = ProcessConfig.from_volatility(0.0, max_plies=10)
        points, traj = play_game(cfg, CubelessStrategy(), CubelessStrategy(), seed=3)
        self.assertEqual(points, 0.0)
        self.assertIs(traj.ended_by, GameEnd.TRUNCATED)
        self.assertTrue(traj.truncated)
        self.assertEqual(traj.p_values.size, 11)

    def test_pass_awards_the_doubler(self):
        cfg = ProcessConfig.from_volatility(0.05)
        result = duel(cfg, AlwaysDouble(), NeverTake(), n_games=6, seed=0)
        self.assertEqual(result.mean_ppg, 1.0)
        self.assertEqual(result.passed, 6)
        self.assertEqual(result.stderr_ppg, 0.0)

    def test_cube_stops_at_the_cap(self):
        for cap, expected in ((4, 2.0), (64, 32.0)):
            cfg = ProcessConfig.from_volatility(0.0, w=2.0, l=1.0, cube_cap=cap, max_plies=10)
            result = duel(cfg, AlwaysDouble(), AlwaysDouble(), n_games=2, seed=0)
            self.assertEqual(result.mean_ppg, expected, msg=f"cap={cap}")
            self.assertEqual(result.truncated, 2)

    def test_absorbed_games_pay_w_or_l(self):
        cfg = ProcessConfig.from_volatility(0.08, w=1.5, l=1.2)
        for seed in range(10):
            points, traj = play_game(cfg, CubelessStrategy(), CubelessStrategy(), seed=seed)
            self.assertIs(traj.ended_by, GameEnd.ABSORBED)
            self.assertIn(points, (1.5, -1.2))
            self.assertEqual(points > 0, traj.p_values[-1] == 1.0)

    def test_trajectory_invariants(self):
        cfg = ProcessConfig.from_volatility(0.05, max_plies=2000)
        for traj in sample_trajectories(cfg, 40, seed=11):
            self.assertEqual(traj.p_values[0], 0.5)
            self.assertTrue(np.all((traj.p_values >= 0.0) & (traj.p_values <= 1.0)))
            if not traj.truncated:
                self.assertIn(traj.p_values[-1], (0.0, 1.0))
                self.assertTrue(np.all((traj.p_values[1:-1] > 0.0) & (traj.p_values[1:-1] < 1.0)))

    def test_constant_profile_matches_the_plain_process(self):
        plain = ProcessConfig.from_volatility(0.05)
        profiled = ProcessConfig.from_volatility(0.05, volatility_profile=VolatilityProfile((0.0, 1.0), (0.05, 0.05)))
        a, b = sample_trajectories(plain, 5, seed=2), sample_trajectories(profiled, 5, seed=2)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.p_values, y.p_values)


class DuelTests(SimpleTestCase):
    def setUp(self):
        self.cfg = ProcessConfig.from_volatility(0.06)

    def test_reproducible_from_the_seed(self):
        a, b = JumpStrategy(0.09), CubelessStrategy()
        first = duel(self.cfg, a, b, n_games=60, seed=5)
        self.assertEqual(first, duel(self.cfg, a, b, n_games=60, seed=5))
        self.assertNotEqual(first.mean_ppg, duel(self.cfg, a, b, n_games=60, seed=6).mean_ppg)

    def test_single_game_has_no_stderr(self):
        result = duel(self.cfg, CubelessStrategy(), CubelessStrategy(), n_games=1, seed=0)
        self.assertFalse(result.stderr_defined)
        self.assertTrue(math.isnan(result.stderr_ppg))
        self.assertIsNone(result.to_dict()['stderr_ppg'])

    def test_needs_a_game(self):
        with self.assertRaises(InvalidParameterError):
            duel(self.cfg, CubelessStrategy(), CubelessStrategy(), n_games=0, seed=0)
        with self.assertRaises(InvalidParameterError):
            summarize([], [], 0)

    def test_cubeless_games_are_fair(self):
        result = duel(self.cfg, CubelessStrategy(), CubelessStrategy(), n_games=2000, seed=17)
        self.assertLessEqual(abs(result.mean_ppg), 3.0 * result.stderr_ppg)
        self.assertEqual(result.absorbed + result.truncated, 2000)

    def test_swapping_sides_negates_the_score(self):
        a, b = JumpStrategy(0.09), JumpStrategy(0.3)
        ab = duel(self.cfg, a, b, n_games=1000, seed=21)
        ba = duel(self.cfg, b, a, n_games=1000, seed=21)
        self.assertLessEqual(abs(ab.mean_ppg + ba.mean_ppg), 3.0 * math.hypot(ab.stderr_ppg, ba.stderr_ppg))

    def test_interior_optimum_shape(self):
        self.assertTrue(has_interior_optimum([0.1, 0.3, 0.2]))
        self.assertFalse(has_interior_optimum([0.3, 0.2, 0.1]))
        self.assertFalse(has_interior_optimum([0.1, 0.3]))
        self.assertFalse(has_interior_optimum([0.3, 0.3, 0.3]))


@tag('slow')
class LongDuelTests(SimpleTestCase):
    def test_probability_is_a_martingale(self):
        cfg = ProcessConfig.from_volatility(0.05)
        steps = []
        for traj in sample_trajectories(cfg, 10_000, seed=13):
            p = traj.p_values
            # Mid-range states: an absorbing step from here needs a jump beyond 0.3.
            mid = (p[:-1] >= 0.3) & (p[:-1] <= 0.7)
            steps.append(np.diff(p)[mid])
        steps = np.concatenate(steps)
        stderr = float(np.std(steps, ddof=1) / math.sqrt(steps.size))
        self.assertGreater(steps.size, 100_000)
        self.assertLessEqual(abs(float(np.mean(steps))), 4.0 * stderr)

    def test_symmetric_self_duel(self):
        cfg = ProcessConfig.from_volatility(0.06)
        strategy = JumpStrategy(0.09)
        result = duel(cfg, strategy, strategy, n_games=100_000, seed=1)
        self.assertLessEqual(abs(result.mean_ppg), 3.0 * result.stderr_ppg)
        self.assertLessEqual(result.truncation_rate, 0.001)

    def test_matched_volatility_beats_an_overestimate(self):
        cfg = ProcessConfig.from_volatility(0.06)
        # Cube decisions see two plies of jumps, so the matched strategy volatility is 1.5x the per-ply one.
        result = duel(cfg, JumpStrategy(0.09), JumpStrategy(0.27), n_games=100_000, seed=3)
        self.assertGreater(result.mean_ppg, 3.0 * result.stderr_ppg)

    def test_alpha_sweep_peaks_inside(self):
        cfg = ProcessConfig.from_volatility(0.06)
        sweep = alpha_sweep(cfg, [0.05, 0.09, 0.14, 0.20], JumpStrategy(0.09), n_games=100_000, seed=9)
        self.assertTrue(sweep.has_interior_optimum(), msg=str(sweep.scores))
        self.assertIn(sweep.best_alpha, (0.09, 0.14))
