# core/params.py - Game-state parametrization shared by all solvers

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from .exceptions import DegenerateStateError, InvalidParameterError

logger = logging.getLogger(__name__)

# Ratio of the optimal fitted constant volatility to the statistical estimate.
STATISTICAL_SCALE = 11.3 / 9.1

MAX_VOLATILITY = 0.5


def _check_probability(name: str, value: float):
    if not (0.0 <= value <= 1.0):
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class GammonProbs:
    """Cubeless outcome probabilities; gammon figures include backgammons."""

    p_win: float
    p_gammon_win: float = 0.0
    p_backgammon_win: float = 0.0
    p_gammon_loss: float = 0.0
    p_backgammon_loss: float = 0.0

    def __post_init__(self):
        for name in ('p_win', 'p_gammon_win', 'p_backgammon_win', 'p_gammon_loss', 'p_backgammon_loss'):
            _check_probability(name, getattr(self, name))
        if not (self.p_backgammon_win <= self.p_gammon_win <= self.p_win):
            raise InvalidParameterError(
                "Expected p_backgammon_win <= p_gammon_win <= p_win, "
                f"got {self.p_backgammon_win}, {self.p_gammon_win}, {self.p_win}"
            )
        if not (self.p_backgammon_loss <= self.p_gammon_loss <= 1.0 - self.p_win + 1e-12):
            raise InvalidParameterError(
                "Expected p_backgammon_loss <= p_gammon_loss <= 1 - p_win, "
                f"got {self.p_backgammon_loss}, {self.p_gammon_loss}, {1.0 - self.p_win}"
            )

    def swapped(self) -> 'GammonProbs':
        """The same position seen by the opponent."""
        return GammonProbs(
            p_win=1.0 - self.p_win,
            p_gammon_win=self.p_gammon_loss,
            p_backgammon_win=self.p_backgammon_loss,
            p_gammon_loss=self.p_gammon_win,
            p_backgammon_loss=self.p_backgammon_win,
        )


@dataclass(frozen=True)
class WinLossParams:
    """Expected points won on a win (w) and lost on a loss (l), both per cube unit."""

    w: float
    l: float

    def __post_init__(self):
        for name in ('w', 'l'):
            value = getattr(self, name)
            if not (1.0 <= value <= 3.0):
                raise InvalidParameterError(f"{name} must lie in [1, 3], got {value}")

    @property
    def span(self) -> float:
        """W + L + 1/2, the live-cube slope."""
        return self.w + self.l + 0.5

    def swapped(self) -> 'WinLossParams':
        return WinLossParams(self.l, self.w)


@dataclass(frozen=True)
class VolatilityPair:
    alpha_local: float
    alpha_remote: float

    def __post_init__(self):
        for name in ('alpha_local', 'alpha_remote'):
            value = getattr(self, name)
            if not (0.0 <= value < MAX_VOLATILITY):
                raise InvalidParameterError(f"{name} must lie in [0, {MAX_VOLATILITY}), got {value}")

    @classmethod
    def constant(cls, alpha: float) -> 'VolatilityPair':
        return cls(alpha, alpha)

    @property
    def is_constant(self) -> bool:
        return self.alpha_local == self.alpha_remote


class CubeKind(str, enum.Enum):
    CENTERED = 'centered'
    PLAYER_OWNS = 'player_owns'
    OPPONENT_OWNS = 'opponent_owns'


@dataclass(frozen=True)
class CubeState:
    kind: CubeKind
    value: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'kind', CubeKind(self.kind))
        v = self.value
        if not isinstance(v, int) or v < 1 or v & (v - 1):
            raise InvalidParameterError(f"Cube value must be a power of two, got {v}")

    def reflected(self) -> 'CubeState':
        """The cube seen from the other side of the board."""
        mirror = {
            CubeKind.CENTERED: CubeKind.CENTERED,
            CubeKind.PLAYER_OWNS: CubeKind.OPPONENT_OWNS,
            CubeKind.OPPONENT_OWNS: CubeKind.PLAYER_OWNS,
        }
        return CubeState(mirror[self.kind], self.value)


def derive_win_loss(g: GammonProbs) -> WinLossParams:
    """W = (P + PGW + PBW) / P and L = (1 - P + PGL + PBL) / (1 - P)."""
    p = g.p_win
    if p <= 0.0 or p >= 1.0:
        raise DegenerateStateError(f"Win probability {p} leaves nothing to decide")
    w = (p + g.p_gammon_win + g.p_backgammon_win) / p
    l = (1.0 - p + g.p_gammon_loss + g.p_backgammon_loss) / (1.0 - p)
    return WinLossParams(w, l)


def scale_statistical_volatility(alpha_stat: float) -> float:
    """Convert a statistically estimated volatility to the one the linear approximation wants."""
    if alpha_stat < 0.0:
        raise InvalidParameterError(f"Volatility must be nonnegative, got {alpha_stat}")
    return alpha_stat * STATISTICAL_SCALE
