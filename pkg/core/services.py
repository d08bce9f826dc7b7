# core/services.py - Equity reports shared by the API and the management commands

import logging
from typing import Any, Dict

import numpy as np

from .advisor import CubefulEquities, EquityMethod, get_model, recommend
from .janowski import implied_index_sweep, implied_index_table
from .linear_approx import (
    POINT_NAMES, live_cash_point, live_centered_curve, live_decision_points,
    live_owned_curve, live_take_point, live_unavailable_curve,
)
from .params import WinLossParams, derive_win_loss
from .rendering import Report
from .serializers import SCHEMA_VERSION, CubeAdviceSerializer, DecisionPointsSerializer
from .utils import display_round

logger = logging.getLogger(__name__)

CURVE_HEADER = ('p', 'e_centered', 'e_owned', 'e_unavailable')


def _equities(attrs: Dict[str, Any], wl: WinLossParams) -> CubefulEquities:
    if attrs['method'] == 'live':
        owned = live_owned_curve(wl)
        unavailable = live_unavailable_curve(wl)
        return CubefulEquities(
            points=live_decision_points(wl),
            owned=owned,
            unavailable=unavailable,
            centered=live_centered_curve(wl),
            owned_doubled=owned,
            unavailable_doubled=unavailable,
        )
    model = get_model(attrs['method'], attrs.get('jump_kind'), attrs.get('grid_size'))
    return model.equities(wl, attrs['vols'])


def points_report(attrs: Dict[str, Any]) -> Report:
    wl = WinLossParams(attrs['w'], attrs['l'])
    vols = attrs['vols']
    eq = _equities(attrs, wl)
    points = dict(DecisionPointsSerializer(eq.points).data)
    live = {'take_point': live_take_point(wl), 'cash_point': live_cash_point(wl)}
    data = {
        'schema_version': SCHEMA_VERSION,
        'method': attrs['method'],
        'w': wl.w,
        'l': wl.l,
        'alpha_local': vols.alpha_local,
        'alpha_remote': vols.alpha_remote,
        'points': points,
        'live': live,
    }
    if eq.info:
        data['solver'] = eq.info

    rows = [[name, points[name]] for name in POINT_NAMES]
    rows += [['live_take_point', live['take_point']], ['live_cash_point', live['cash_point']]]
    notes = [f"method={attrs['method']} W={wl.w} L={wl.l} "
             f"alpha_local={vols.alpha_local} alpha_remote={vols.alpha_remote}"]
    if eq.info:
        notes.append(f"iterations: {eq.info['iterations_ou']} owned/unavailable, "
                     f"{eq.info['iterations_c']} centered; residual {eq.info['residual']:.2e}")
    if points['clamped']:
        notes.append(f"clamped: {', '.join(points['clamped'])}")
    return Report(data=data, header=('point', 'value'), rows=rows, notes=notes)


def curve_report(attrs: Dict[str, Any]) -> Report:
    wl = WinLossParams(attrs['w'], attrs['l'])
    eq = _equities(attrs, wl)
    p = np.linspace(0.0, 1.0, attrs['n_points'])
    columns = [np.asarray(eq.centered(p)), np.asarray(eq.owned(p)), np.asarray(eq.unavailable(p))]
    rows = [[float(p[i])] + [float(col[i]) for col in columns] for i in range(p.size)]
    data = {
        'schema_version': SCHEMA_VERSION,
        'method': attrs['method'],
        'w': wl.w,
        'l': wl.l,
        'rows': [dict(zip(CURVE_HEADER, row)) for row in rows],
    }
    return Report(data=data, header=CURVE_HEADER, rows=rows)


def implied_x_report(attrs: Dict[str, Any]) -> Report:
    if attrs.get('alphas'):
        values = attrs['w_values']
        sweep = implied_index_sweep(values, attrs['alphas'])
        header = ['alpha'] + [f"W=L={v:g}" for v in values]
        rows = [[a] + row for a, row in zip(attrs['alphas'], sweep)]
        text_rows = [[f"{a:g}"] + [display_round(x) for x in row] for a, row in zip(attrs['alphas'], sweep)]
        data = {
            'schema_version': SCHEMA_VERSION,
            'values': values,
            'alphas': attrs['alphas'],
            'x': sweep,
        }
        return Report(data=data, header=header, rows=rows, text_rows=text_rows)

    table = implied_index_table(attrs['w_values'], attrs['l_values'], attrs['alpha'])
    rows = []
    for l_value, row in zip(table.l_values, table.rows):
        for w_value, cell in zip(table.w_values, row):
            rows.append([w_value, l_value, cell.x1, cell.x2])
    data = {
        'schema_version': SCHEMA_VERSION,
        'alpha': table.alpha,
        'w_values': list(table.w_values),
        'l_values': list(table.l_values),
        'table': [[{'x1': c.x1, 'x2': c.x2, 'display': c.display()} for c in row] for row in table.rows],
    }
    text_header = ['L \\ W'] + [f"{w:g}" for w in table.w_values]
    text_rows = [[f"{l:g}"] + cells for l, cells in zip(table.l_values, table.display_rows())]
    return Report(
        data=data, header=('w', 'l', 'x1', 'x2'), rows=rows,
        text_header=text_header, text_rows=text_rows, notes=[f"alpha={table.alpha}  (x1/x2)"],
    )


def advice_report(attrs: Dict[str, Any]) -> Report:
    g = attrs['gammons']
    advice = recommend(g, attrs['cube_state'], attrs['vols'], attrs['method'],
                       attrs.get('jump_kind'), attrs.get('grid_size'))
    wl = derive_win_loss(g)
    data = dict(CubeAdviceSerializer(advice).data)
    data.update({'schema_version': SCHEMA_VERSION, 'w': wl.w, 'l': wl.l})
    keys = ('decision', 'doubler', 'doubler_action', 'taker_action', 'no_double_equity',
            'double_take_equity', 'double_pass_equity')
    rows = [[k, data[k]] for k in keys]
    notes = [f"P={g.p_win} W={wl.w:.4f} L={wl.l:.4f} cube={attrs['cube']}x{attrs['cube_value']} "
             f"method={EquityMethod(attrs['method']).value}"]
    return Report(data=data, header=('field', 'value'), rows=rows, notes=notes)
