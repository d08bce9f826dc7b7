# core/utils.py - Shared numerical helpers and settings access

import logging
from decimal import Decimal, ROUND_HALF_UP
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

CUBE_DEFAULTS = {
    'DEFAULT_GRID_SIZE': 500,
    'MAX_ITERATIONS': 25,
    'CONVERGENCE_TOL': 1e-6,
    'BISECTION_TOL': 1e-7,
    'BRACKET_HALF_WIDTH': 0.1,
    'MIN_JUMP_VOLATILITY': 1e-6,
    'DEFAULT_JUMP_KIND': 'double_exponential',
    'SOLUTION_CACHE_TTL': 3600,
}

SIM_DEFAULTS = {
    'CUBE_CAP': 64,
    'MAX_PLIES': 5000,
    'DEFAULT_GAMES': 10000,
    'DUEL_CHUNKS': 1,
}


def _setting(group: str, defaults: dict, key: str):
    configured = getattr(settings, group, None) if settings.configured else None
    if configured and key in configured:
        return configured[key]
    return defaults[key]


def cube_setting(key: str):
    """Read a solver tunable from settings.CUBE_SETTINGS, falling back to the built-in default."""
    return _setting('CUBE_SETTINGS', CUBE_DEFAULTS, key)


def sim_setting(key: str):
    """Read a simulation tunable from settings.SIM_SETTINGS."""
    return _setting('SIM_SETTINGS', SIM_DEFAULTS, key)


# ===== Piecewise-linear crossings =====

def first_crossing(
    x: np.ndarray,
    g: np.ndarray,
    rising: bool,
    lo: Optional[float] = None,
    hi: Optional[float] = None,
) -> Tuple[float, bool]:
    """
    First root of the piecewise-linear interpolant of (x, g) on [lo, hi].

    ``rising`` selects a - to + crossing, otherwise + to -. A sample already on
    the far side at ``lo`` (or exactly zero) gives ``lo``. Returns (root, found);
    when no crossing exists the root is clamped to ``hi`` and found is False.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    lo = float(x[0]) if lo is None else float(lo)
    hi = float(x[-1]) if hi is None else float(hi)
    if hi < lo:
        hi = lo

    inside = (x > lo) & (x < hi)
    xs = np.concatenate(([lo], x[inside], [hi]))
    gs = np.concatenate(([np.interp(lo, x, g)], g[inside], [np.interp(hi, x, g)]))
    if not rising:
        gs = -gs

    hits = np.nonzero(gs >= 0.0)[0]
    if hits.size == 0:
        return hi, False
    k = int(hits[0])
    if k == 0:
        return lo, True
    g0, g1 = gs[k - 1], gs[k]
    root = xs[k - 1] + (xs[k] - xs[k - 1]) * (-g0) / (g1 - g0)
    return float(root), True


def ordered_bounds(*points: float) -> np.ndarray:
    """Region boundaries forced nondecreasing inside [0, 1]."""
    return np.maximum.accumulate(np.clip(np.asarray(points, dtype=float), 0.0, 1.0))


def display_round(value: float, places: int = 2) -> str:
    """Half-up rounding for tables; float noise is stripped first."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(round(float(value), 9))).quantize(quantum, rounding=ROUND_HALF_UP))
