# analytics/services.py - Duel and estimator reports shared by the API and the management commands

import logging
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from core.rendering import Report

from .estimators import estimate_local_volatility, estimate_remote_volatility
from .models import DuelRecord
from .sim import SCHEMA_VERSION, duel
from .tasks import chunked_duel

logger = logging.getLogger(__name__)

DUEL_FIELDS = ('games', 'mean_ppg', 'stderr_ppg', 'seed', 'absorbed', 'passed', 'truncated')


def run_duel(attrs: Dict[str, Any]):
    cfg, a, b = attrs['process'], attrs['strategy_a'], attrs['strategy_b']
    if attrs.get('chunks', 1) > 1:
        return chunked_duel(cfg, a, b, attrs['n_games'], attrs['seed'], attrs['chunks'])
    return duel(cfg, a, b, attrs['n_games'], attrs['seed'])


def duel_report(attrs: Dict[str, Any]) -> Report:
    cfg, a, b = attrs['process'], attrs['strategy_a'], attrs['strategy_b']
    result = run_duel(attrs)
    data = result.to_dict()
    data.update({
        'process': cfg.to_dict(),
        'strategy_a': a.to_dict(),
        'strategy_b': b.to_dict(),
        'truncation_rate': result.truncation_rate,
    })
    if attrs.get('save_record'):
        record = DuelRecord.from_result(cfg, a, b, result)
        record.save()
        data['record_id'] = record.pk
        logger.info(f"Saved {record}")

    rows = [[key, data[key]] for key in DUEL_FIELDS]
    notes = [f"{a.name} vs {b.name}  alpha_ply={cfg.alpha_ply} W={cfg.w} L={cfg.l}"]
    if not result.stderr_defined:
        notes.append('stderr undefined for a single game')
    return Report(data=data, header=('field', 'value'), rows=rows, notes=notes)


def estimate_report(
    trajectories: Optional[Iterable[Sequence[float]]] = None,
    outcomes: Optional[Iterable[Tuple[float, float]]] = None,
    window_low: Tuple[float, float] = None,
    window_high: Tuple[float, float] = None,
) -> Report:
    """Remote estimate from trajectories, local estimate from rollout outcomes, or both."""
    data: Dict[str, Any] = {'schema_version': SCHEMA_VERSION}
    rows = []
    if trajectories is not None:
        windows = {k: v for k, v in (('window_low', window_low), ('window_high', window_high)) if v}
        remote = estimate_remote_volatility(trajectories, **windows)
        data['remote'] = {
            'mean_abs_jump': remote.mean_abs_jump,
            'std_jump': remote.std_jump,
            'samples': remote.samples,
            'counts': remote.counts,
        }
        rows += [
            ['remote_mean_abs_jump', remote.mean_abs_jump],
            ['remote_std_jump', remote.std_jump],
            ['remote_samples', remote.samples],
        ]
    if outcomes is not None:
        local = estimate_local_volatility(outcomes)
        data['local'] = {'sigma_j': local.sigma_j, 'p_a': local.p_a}
        rows += [['local_sigma_j', local.sigma_j], ['local_p_a', local.p_a]]
    return Report(data=data, header=('statistic', 'value'), rows=rows)
