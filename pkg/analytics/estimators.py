# analytics/estimators.py - Volatility estimators from rollouts and trajectories

"""
Two statistical volatility estimators.

The local one is the weighted spread of P over the 441 two-roll outcomes
of a position. The remote one looks at two-ply changes of P from states
inside a low or high window, counting a state only once the game has
already visited the opposite window (that is, after a reversal), and reports
both the mean absolute change and its standard deviation. Neither estimate
is rescaled here.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from core.exceptions import EmptyFilterError, InvalidParameterError, WeightSumError

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-9
DEFAULT_LOW_WINDOW = (0.20, 0.35)
DEFAULT_HIGH_WINDOW = (0.65, 0.80)

Roll = Tuple[int, int]


# ===== Roll weights =====

def distinct_rolls() -> List[Roll]:
    """The 21 distinct rolls, doubles included, smaller die first."""
    return list(combinations_with_replacement(range(1, 7), 2))


def roll_pair_weight(first_is_double: bool, second_is_double: bool) -> float:
    """Weight of an ordered pair of distinct rolls: 1/1296 for two doubles, 1/324 for none, 1/648 otherwise."""
    first = 1.0 / 36.0 if first_is_double else 1.0 / 18.0
    second = 1.0 / 36.0 if second_is_double else 1.0 / 18.0
    return first * second


def two_roll_weights() -> Dict[Tuple[Roll, Roll], float]:
    """All 441 ordered pairs of distinct rolls with their weights."""
    rolls = distinct_rolls()
    weights = {(a, b): roll_pair_weight(a[0] == a[1], b[0] == b[1]) for a in rolls for b in rolls}
    total = sum(weights.values())
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise WeightSumError(f"Roll-pair weights sum to {total!r}")
    return weights


# ===== Local volatility =====

class LocalVolatilityEstimate(NamedTuple):
    sigma_j: float
    p_a: float


def estimate_local_volatility(outcomes: Iterable[Tuple[float, float]]) -> LocalVolatilityEstimate:
    """
    Weighted standard deviation and mean of P over the two-ply outcomes of one position.

    ``outcomes`` is (weight, P after two plies) per roll pair. The spread is
    measured around the weighted mean, not around the starting P.
    """
    pairs = [(float(w), float(p)) for w, p in outcomes]
    if not pairs:
        raise InvalidParameterError("Local volatility needs at least one rollout outcome")
    weights = np.array([w for w, _ in pairs])
    p_after = np.array([p for _, p in pairs])
    if np.any(weights < 0.0):
        raise InvalidParameterError("Outcome weights must be nonnegative")
    total = float(weights.sum())
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise WeightSumError(f"Outcome weights sum to {total!r}, expected 1")

    p_a = float(np.dot(weights, p_after))
    sigma_j = float(np.sqrt(np.dot(weights, (p_after - p_a) ** 2)))
    logger.debug(f"Local volatility {sigma_j:.5f} around {p_a:.5f} from {len(pairs)} outcomes")
    return LocalVolatilityEstimate(sigma_j, p_a)


# ===== Remote volatility =====

@dataclass(frozen=True)
class RemoteVolatilityEstimate:
    mean_abs_jump: float
    std_jump: float
    samples: int
    counts: Dict[str, int] = field(default_factory=dict)


def _in_window(p: float, window: Tuple[float, float]) -> bool:
    return window[0] <= p <= window[1]


def reversal_samples(
    p_values: Sequence[float],
    window_low: Tuple[float, float] = DEFAULT_LOW_WINDOW,
    window_high: Tuple[float, float] = DEFAULT_HIGH_WINDOW,
) -> Tuple[List[float], Dict[str, int]]:
    """Two-ply changes from window states reached after a visit to the opposite window."""
    p = np.asarray(p_values, dtype=float)
    seen_low = seen_high = False
    changes: List[float] = []
    counts = {'states': int(p.size), 'in_window': 0, 'after_reversal': 0}
    for t in range(p.size):
        low = _in_window(p[t], window_low)
        high = _in_window(p[t], window_high)
        if low or high:
            counts['in_window'] += 1
            reversed_here = (low and seen_high) or (high and seen_low)
            if reversed_here and t + 2 < p.size:
                counts['after_reversal'] += 1
                changes.append(float(p[t + 2] - p[t]))
        seen_low = seen_low or low
        seen_high = seen_high or high
    return changes, counts


def estimate_remote_volatility(
    trajectories: Iterable[Sequence[float]],
    window_low: Tuple[float, float] = DEFAULT_LOW_WINDOW,
    window_high: Tuple[float, float] = DEFAULT_HIGH_WINDOW,
) -> RemoteVolatilityEstimate:
    trajectories = list(trajectories)
    if not trajectories:
        raise InvalidParameterError("Remote volatility needs at least one trajectory")
    if not (0.0 <= window_low[0] <= window_low[1] < window_high[0] <= window_high[1] <= 1.0):
        raise InvalidParameterError(f"Windows must be ordered inside [0, 1]: {window_low}, {window_high}")

    changes: List[float] = []
    counts = {'trajectories': 0, 'states': 0, 'in_window': 0, 'after_reversal': 0}
    for path in trajectories:
        found, path_counts = reversal_samples(path, window_low, window_high)
        changes.extend(found)
        counts['trajectories'] += 1
        for key, value in path_counts.items():
            counts[key] += value

    if not changes:
        raise EmptyFilterError("No window state after a reversal; nothing to estimate", counts)
    arr = np.asarray(changes)
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    estimate = RemoteVolatilityEstimate(
        mean_abs_jump=float(np.mean(np.abs(arr))),
        std_jump=std,
        samples=int(arr.size),
        counts=counts,
    )
    logger.info(f"Remote volatility {estimate.mean_abs_jump:.5f} from {estimate.samples} samples ({counts})")
    return estimate
