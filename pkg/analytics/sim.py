# analytics/sim.py - Synthetic jump-process money games and strategy duels

"""
Strategy duels on a synthetic probability-of-win process.

A game starts at P = 0.5. Before every ply the side to move may double
(according to its strategy), the other side takes or passes, and then P jumps
by one draw from the per-ply law, clamped to [0, 1]. Reaching 0 or 1 ends the
game for L or W times the cube. Game k of a duel uses seed ``seed + k`` and
side A moves first in even games, so any split of the game range into chunks
reproduces the serial result.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.advisor import get_model
from core.distributions import JumpDistribution, JumpKind
from core.exceptions import InvalidParameterError
from core.linear_approx import DecisionPoints
from core.params import VolatilityPair, WinLossParams, scale_statistical_volatility
from core.utils import sim_setting

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DRAW_CHUNK = 256
TRUNCATION_WARN_RATE = 0.001


class GameEnd(str, enum.Enum):
    ABSORBED = 'absorbed'
    PASSED = 'passed'
    TRUNCATED = 'truncated'


# ===== Process =====

@dataclass(frozen=True)
class VolatilityProfile:
    """Per-ply volatility as a table over P; jumps are rescaled by alpha(P) / base alpha."""

    p_values: Tuple[float, ...]
    alphas: Tuple[float, ...]

    def __post_init__(self):
        if len(self.p_values) != len(self.alphas) or len(self.p_values) < 2:
            raise InvalidParameterError("Volatility profile needs matching p/alpha tables of length >= 2")
        if any(a < 0.0 for a in self.alphas):
            raise InvalidParameterError("Volatility profile alphas must be nonnegative")

    def alpha_at(self, p: float) -> float:
        return float(np.interp(p, self.p_values, self.alphas))


@dataclass(frozen=True)
class ProcessConfig:
    per_ply_distribution: Optional[JumpDistribution]
    w: float = 1.0
    l: float = 1.0
    cube_cap: int = 64
    max_plies: int = 5000
    volatility_profile: Optional[VolatilityProfile] = None

    def __post_init__(self):
        WinLossParams(self.w, self.l)
        cap = self.cube_cap
        if cap < 2 or cap & (cap - 1):
            raise InvalidParameterError(f"Cube cap must be a power of two >= 2, got {cap}")
        if self.max_plies < 10:
            raise InvalidParameterError(f"max_plies must be at least 10, got {self.max_plies}")

    @classmethod
    def from_volatility(cls, alpha_ply: float, kind=JumpKind.DOUBLE_EXPONENTIAL, **kwargs) -> 'ProcessConfig':
        """Zero volatility gives a frozen process."""
        if alpha_ply < 0.0:
            raise InvalidParameterError(f"Per-ply volatility must be nonnegative, got {alpha_ply}")
        kwargs.setdefault('cube_cap', int(sim_setting('CUBE_CAP')))
        kwargs.setdefault('max_plies', int(sim_setting('MAX_PLIES')))
        dist = JumpDistribution.from_volatility(kind, alpha_ply) if alpha_ply > 0.0 else None
        return cls(per_ply_distribution=dist, **kwargs)

    @property
    def alpha_ply(self) -> float:
        return self.per_ply_distribution.jump_volatility if self.per_ply_distribution else 0.0

    @property
    def jump_kind(self) -> str:
        dist = self.per_ply_distribution
        return (dist.kind if dist else JumpKind.DOUBLE_EXPONENTIAL).value

    def to_dict(self) -> Dict:
        profile = self.volatility_profile
        return {
            'alpha_ply': self.alpha_ply,
            'jump_kind': self.jump_kind,
            'w': self.w,
            'l': self.l,
            'cube_cap': self.cube_cap,
            'max_plies': self.max_plies,
            'volatility_profile': asdict(profile) if profile else None,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'ProcessConfig':
        profile = data.get('volatility_profile')
        return cls.from_volatility(
            data['alpha_ply'],
            data.get('jump_kind', JumpKind.DOUBLE_EXPONENTIAL),
            w=data['w'],
            l=data['l'],
            cube_cap=data['cube_cap'],
            max_plies=data['max_plies'],
            volatility_profile=VolatilityProfile(tuple(profile['p_values']), tuple(profile['alphas'])) if profile else None,
        )


# ===== Strategies =====

class Strategy:
    """Cube rule seen from the deciding side: its own P, W and L."""

    name = 'strategy'

    def wants_double(self, p: float, owns_cube: bool, w: float, l: float) -> bool:
        raise NotImplementedError

    def takes(self, p: float, w: float, l: float) -> bool:
        raise NotImplementedError

    def to_dict(self) -> Dict:
        raise NotImplementedError


class CubelessStrategy(Strategy):
    """Never doubles, always takes."""

    name = 'cubeless'

    def wants_double(self, p, owns_cube, w, l):
        return False

    def takes(self, p, w, l):
        return True

    def to_dict(self):
        return {'kind': 'cubeless'}


class JumpStrategy(Strategy):
    """Doubles and takes on jump-model decision points for an assumed volatility."""

    def __init__(self, alpha: float, method: str = 'linear', scale_statistical: bool = False,
                 jump_kind=None, name: Optional[str] = None):
        self.alpha = float(alpha)
        self.method = method
        self.scale_statistical = bool(scale_statistical)
        self.jump_kind = jump_kind
        self.effective_alpha = scale_statistical_volatility(self.alpha) if self.scale_statistical else self.alpha
        self.name = name or f"jump({self.alpha:g},{method}{',scaled' if self.scale_statistical else ''})"
        self._model = get_model(method, jump_kind)
        self._points: Dict[Tuple[float, float], DecisionPoints] = {}

    def points(self, w: float, l: float) -> DecisionPoints:
        key = (w, l)
        if key not in self._points:
            self._points[key] = self._model.points(WinLossParams(w, l), VolatilityPair.constant(self.effective_alpha))
        return self._points[key]

    def wants_double(self, p, owns_cube, w, l):
        pts = self.points(w, l)
        if owns_cube:
            return pts.rd_o <= p < pts.tg_o
        return pts.id_o <= p < pts.tgc_o

    def takes(self, p, w, l):
        return p >= self.points(w, l).tp

    def to_dict(self):
        return {
            'kind': 'jump',
            'alpha': self.alpha,
            'method': self.method,
            'scale_statistical': self.scale_statistical,
            'jump_kind': self.jump_kind.value if isinstance(self.jump_kind, enum.Enum) else self.jump_kind,
        }


def strategy_from_dict(data: Dict) -> Strategy:
    kind = data.get('kind')
    if kind == 'cubeless':
        return CubelessStrategy()
    if kind == 'jump':
        return JumpStrategy(
            data['alpha'], data.get('method', 'linear'), data.get('scale_statistical', False), data.get('jump_kind'),
        )
    raise InvalidParameterError(f"Unknown strategy kind: {kind!r}")


# ===== Games =====

@dataclass
class Trajectory:
    """P after each ply (index 0 is the starting 0.5), seen from side A."""

    game_id: int
    p_values: np.ndarray
    ended_by: GameEnd
    points_a: float

    @property
    def truncated(self) -> bool:
        return self.ended_by is GameEnd.TRUNCATED


def play_game(
    cfg: ProcessConfig,
    a: Strategy,
    b: Strategy,
    seed: int,
    a_first: bool = True,
    game_id: int = 0,
) -> Tuple[float, Trajectory]:
    """Play one game; returns side A's points and the trajectory."""
    rng = np.random.default_rng(seed)
    dist = cfg.per_ply_distribution
    base_alpha = cfg.alpha_ply
    profile = cfg.volatility_profile

    p = 0.5
    value = 1
    owner = None  # 'a', 'b' or None for a centered cube
    path = [p]
    draws = np.zeros(0)
    k = 0

    def finish(points: float, ended: GameEnd):
        return points, Trajectory(game_id, np.asarray(path), ended, points)

    for ply in range(cfg.max_plies):
        a_moves = (ply % 2 == 0) == a_first
        me = 'a' if a_moves else 'b'
        mover, other = (a, b) if a_moves else (b, a)
        p_mover = p if a_moves else 1.0 - p
        w_mover, l_mover = (cfg.w, cfg.l) if a_moves else (cfg.l, cfg.w)

        if value < cfg.cube_cap and owner in (None, me):
            if mover.wants_double(p_mover, owner == me, w_mover, l_mover):
                if not other.takes(1.0 - p_mover, l_mover, w_mover):
                    return finish(float(value if a_moves else -value), GameEnd.PASSED)
                value *= 2
                owner = 'b' if a_moves else 'a'

        if dist is None:
            jump = 0.0
        else:
            if k == draws.size:
                draws = dist.sample(rng, DRAW_CHUNK)
                k = 0
            jump = float(draws[k])
            k += 1
            if profile is not None:
                jump *= profile.alpha_at(p) / base_alpha
        p = min(max(p + jump, 0.0), 1.0)
        path.append(p)
        if p <= 0.0:
            return finish(-cfg.l * value, GameEnd.ABSORBED)
        if p >= 1.0:
            return finish(cfg.w * value, GameEnd.ABSORBED)

    return finish((p * cfg.w - (1.0 - p) * cfg.l) * value, GameEnd.TRUNCATED)


def play_range(cfg: ProcessConfig, a: Strategy, b: Strategy, seed: int, start: int, stop: int) -> Tuple[List[float], List[str]]:
    """Games ``start`` .. ``stop - 1`` of a duel, as (points for A, end reasons)."""
    points, ended = [], []
    for index in range(start, stop):
        pts, traj = play_game(cfg, a, b, seed + index, a_first=(index % 2 == 0), game_id=index)
        points.append(pts)
        ended.append(traj.ended_by.value)
    return points, ended


# ===== Duels =====

@dataclass(frozen=True)
class DuelResult:
    games: int
    mean_ppg: float
    stderr_ppg: float
    seed: int
    stderr_defined: bool = True
    absorbed: int = 0
    passed: int = 0
    truncated: int = 0
    schema_version: int = SCHEMA_VERSION

    @property
    def truncation_rate(self) -> float:
        return self.truncated / self.games if self.games else 0.0

    def to_dict(self) -> Dict:
        data = asdict(self)
        if not self.stderr_defined:
            data['stderr_ppg'] = None
        return data


def summarize(points: Sequence[float], ended: Sequence[str], seed: int) -> DuelResult:
    arr = np.asarray(points, dtype=float)
    n = int(arr.size)
    if n == 0:
        raise InvalidParameterError("A duel needs at least one game")
    stderr_defined = n > 1
    stderr = float(np.std(arr, ddof=1) / math.sqrt(n)) if stderr_defined else float('nan')
    counts = {e.value: 0 for e in GameEnd}
    for reason in ended:
        counts[reason] += 1
    result = DuelResult(
        games=n,
        mean_ppg=float(arr.mean()),
        stderr_ppg=stderr,
        seed=seed,
        stderr_defined=stderr_defined,
        absorbed=counts[GameEnd.ABSORBED.value],
        passed=counts[GameEnd.PASSED.value],
        truncated=counts[GameEnd.TRUNCATED.value],
    )
    if result.truncation_rate > TRUNCATION_WARN_RATE:
        logger.warning(f"Truncation rate {result.truncation_rate:.4%} over {n} games; raise max_plies")
    return result


def duel(cfg: ProcessConfig, a: Strategy, b: Strategy, n_games: int, seed: int) -> DuelResult:
    if n_games < 1:
        raise InvalidParameterError(f"n_games must be at least 1, got {n_games}")
    points, ended = play_range(cfg, a, b, seed, 0, n_games)
    result = summarize(points, ended, seed)
    logger.info(
        f"Duel {a.name} vs {b.name}: {result.mean_ppg:+.4f} +/- {result.stderr_ppg:.4f} ppg over {n_games} games"
    )
    return result


@dataclass(frozen=True)
class SweepResult:
    alphas: Tuple[float, ...]
    results: Tuple[DuelResult, ...]

    @property
    def scores(self) -> np.ndarray:
        return np.array([r.mean_ppg for r in self.results])

    @property
    def best_alpha(self) -> float:
        return self.alphas[int(np.argmax(self.scores))]

    def has_interior_optimum(self) -> bool:
        return has_interior_optimum(self.scores)


def has_interior_optimum(scores: Sequence[float]) -> bool:
    """The maximum sits strictly inside the sweep and beats both ends."""
    s = np.asarray(scores, dtype=float)
    if s.size < 3:
        return False
    best = int(np.argmax(s))
    return 0 < best < s.size - 1 and s[best] > s[0] and s[best] > s[-1]


def alpha_sweep(
    cfg: ProcessConfig,
    alphas: Sequence[float],
    reference: Strategy,
    n_games: int,
    seed: int,
    method: str = 'linear',
) -> SweepResult:
    """Score of jump strategies with each assumed alpha against one reference, on common seeds."""
    results = tuple(duel(cfg, JumpStrategy(alpha, method), reference, n_games, seed) for alpha in alphas)
    sweep = SweepResult(tuple(alphas), results)
    logger.info(f"Alpha sweep best {sweep.best_alpha} interior={sweep.has_interior_optimum()}")
    return sweep


def sample_trajectories(cfg: ProcessConfig, n_games: int, seed: int) -> List[Trajectory]:
    """Cubeless games for the volatility estimators."""
    cubeless = CubelessStrategy()
    return [
        play_game(cfg, cubeless, cubeless, seed + index, a_first=(index % 2 == 0), game_id=index)[1]
        for index in range(n_games)
    ]


__all__ = [
    'GameEnd', 'VolatilityProfile', 'ProcessConfig', 'Strategy', 'CubelessStrategy', 'JumpStrategy',
    'strategy_from_dict', 'Trajectory', 'play_game', 'play_range', 'DuelResult', 'summarize', 'duel',
    'SweepResult', 'has_interior_optimum', 'alpha_sweep', 'sample_trajectories',
]
