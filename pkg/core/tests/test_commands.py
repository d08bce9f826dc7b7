import json
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.cli import EXIT_NUMERICAL, EXIT_USAGE
from core.exceptions import VolatilityTooLargeError
from core.services import CURVE_HEADER


def run(name, **options):
    out = StringIO()
    call_command(name, stdout=out, **options)
    return out.getvalue()


class PointsCommandTests(SimpleTestCase):
    def test_json_output(self):
        data = json.loads(run('points', w=1.0, l=1.0, alpha=0.1, format='json'))
        self.assertEqual(data['schema_version'], 1)
        self.assertEqual(data['method'], 'linear')
        self.assertAlmostEqual(data['points']['rd_o'], 0.72, places=9)
        self.assertAlmostEqual(data['points']['tp'], 0.213333, places=6)
        self.assertAlmostEqual(data['live']['cash_point'], 0.8, places=12)

    def test_text_output_lists_every_point(self):
        text = run('points', w=1.2, l=1.1, alpha_local=0.08, alpha_remote=0.1)
        for name in ('tg_u', 'tp', 'rd_u', 'rd_o', 'cp', 'tg_o', 'tgc_u', 'id_u', 'id_o', 'tgc_o'):
            self.assertIn(name, text)
        self.assertIn('alpha_local=0.08', text)

    def test_statistical_scaling(self):
        data = json.loads(run('points', w=1.0, l=1.0, alpha=0.091, scale_statistical=True, format='json'))
        self.assertAlmostEqual(data['alpha_local'], 0.113, places=12)

    def test_exact_method_reports_solver_diagnostics(self):
        data = json.loads(run('points', w=1.0, l=1.0, alpha=0.1, method='exact', grid_size=100, format='json'))
        self.assertIn('iterations_ou', data['solver'])
        self.assertAlmostEqual(data['points']['tp'], 1.0 - data['points']['cp'], delta=0.02)

    def test_exact_method_at_zero_volatility(self):
        data = json.loads(run('points', w=1.4, l=1.0, alpha=0.0, method='exact', grid_size=200, format='json'))
        self.assertAlmostEqual(data['points']['tp'], data['live']['take_point'], delta=0.01)
        self.assertAlmostEqual(data['points']['cp'], data['live']['cash_point'], delta=0.01)

    def test_missing_volatility_exits_with_usage_status(self):
        with self.assertRaises(CommandError) as ctx:
            run('points', w=1.0, l=1.0)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_out_of_range_input_exits_with_usage_status(self):
        with self.assertRaises(CommandError) as ctx:
            run('points', w=0.5, l=1.0, alpha=0.1)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)
        with self.assertRaises(CommandError) as ctx:
            run('points', w=1.0, l=1.0, alpha=0.7)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    @mock.patch('core.services.get_model')
    def test_numerical_failure_exits_with_status_three(self, get_model):
        get_model.return_value.equities.side_effect = VolatilityTooLargeError('slope nonpositive', 0.4)
        with self.assertRaises(CommandError) as ctx:
            run('points', w=1.0, l=1.0, alpha=0.4)
        self.assertEqual(ctx.exception.returncode, EXIT_NUMERICAL)


class CurveCommandTests(SimpleTestCase):
    def test_csv_grid(self):
        lines = run('curve', w=1.2, l=1.1, alpha=0.08, n_points=11).strip().splitlines()
        self.assertEqual(lines[0], ','.join(CURVE_HEADER))
        self.assertEqual(len(lines), 12)
        first = [float(v) for v in lines[1].split(',')]
        last = [float(v) for v in lines[-1].split(',')]
        self.assertEqual(first[0], 0.0)
        self.assertEqual(first[1:], [-1.1] * 3)
        for value in last[1:]:
            self.assertAlmostEqual(value, 1.2, places=12)

    def test_live_curves(self):
        data = json.loads(run('curve', w=1.0, l=1.0, alpha=0.0, method='live', n_points=6, format='json'))
        row = data['rows'][1]
        self.assertAlmostEqual(row['p'], 0.2, places=12)
        self.assertAlmostEqual(row['e_centered'], -1.0, places=12)
        self.assertAlmostEqual(row['e_unavailable'], -1.0, places=12)

    def test_live_curves_need_no_volatility(self):
        data = json.loads(run('curve', w=1.0, l=1.0, method='live', n_points=6, format='json'))
        self.assertAlmostEqual(data['rows'][4]['e_owned'], 1.0, places=12)
        with self.assertRaises(CommandError) as ctx:
            run('curve', w=1.0, l=1.0, n_points=6)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)


class ImpliedIndexCommandTests(SimpleTestCase):
    def test_default_table_text(self):
        text = run('implied_x')
        self.assertIn('0.69/0.69', text)
        self.assertIn('0.75/0.66', text)
        self.assertIn('0.59/0.80', text)

    def test_csv_rows(self):
        lines = run('implied_x', w_values=[1.0], l_values=[1.0], format='csv').splitlines()
        self.assertEqual(lines[0], 'w,l,x1,x2')
        self.assertEqual(lines[1], '1.0,1.0,0.6875,0.6875')

    def test_alpha_sweep(self):
        data = json.loads(run('implied_x', alphas=[0.0, 0.2], w_values=[1.0], format='json'))
        self.assertEqual(data['x'][0], [1.0])
        self.assertAlmostEqual(data['x'][1][0], 0.375, places=12)


class AdviseCommandTests(SimpleTestCase):
    def test_double_pass(self):
        data = json.loads(run('advise', p=0.9, cube='owned', cube_value=2, alpha=0.1, format='json'))
        self.assertEqual(data['decision'], 'double/pass')
        self.assertEqual(data['cube_value'], 2)
        self.assertEqual(data['w'], 1.0)

    def test_text_output(self):
        text = run('advise', p=0.15, cube='opponent', alpha=0.1)
        self.assertIn('pass', text)
        self.assertIn('cube=opponent', text)

    def test_decided_position_exits_with_usage_status(self):
        with self.assertRaises(CommandError) as ctx:
            run('advise', p=1.0, alpha=0.1)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_inconsistent_gammons_exit_with_usage_status(self):
        with self.assertRaises(CommandError) as ctx:
            run('advise', p=0.5, gammon_win=0.7, alpha=0.1)
        self.assertEqual(ctx.exception.returncode, EXIT_USAGE)
