# core/advisor.py - Cube recommendations from equities and decision points

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from django.core.cache import cache

from .distributions import JumpKind
from .exact_solver import DistributionProfile, EquitySolution, solve
from .linear_approx import DecisionPoints, decision_points_linear, linear_curves
from .nonlinear_approx import decision_points_nonlinear, refined_equities
from .params import CubeKind, CubeState, GammonProbs, VolatilityPair, WinLossParams, derive_win_loss
from .utils import cube_setting

logger = logging.getLogger(__name__)

Curve = Callable[[float], float]


class EquityMethod(str, enum.Enum):
    LINEAR = 'linear'
    NONLINEAR = 'nonlinear'
    EXACT = 'exact'


class DoublerAction(str, enum.Enum):
    NO_DOUBLE = 'no_double'
    DOUBLE = 'double'
    TOO_GOOD = 'too_good'


class TakerAction(str, enum.Enum):
    TAKE = 'take'
    PASS = 'pass'
    NOT_APPLICABLE = 'not_applicable'


class Side(str, enum.Enum):
    PLAYER = 'player'
    OPPONENT = 'opponent'


@dataclass(frozen=True)
class CubefulEquities:
    """
    Player-perspective equities of one game, normalised to the current cube.

    The ``*_doubled`` curves value a cube one level up, where the remote
    volatility applies.
    """

    points: DecisionPoints
    owned: Curve
    unavailable: Curve
    centered: Curve
    owned_doubled: Curve
    unavailable_doubled: Curve
    info: Optional[Dict] = None

    def for_cube(self, kind: CubeKind) -> Curve:
        return {
            CubeKind.CENTERED: self.centered,
            CubeKind.PLAYER_OWNS: self.owned,
            CubeKind.OPPONENT_OWNS: self.unavailable,
        }[CubeKind(kind)]


# ===== Equity models =====

class EquityModel:
    method: EquityMethod

    def equities(self, wl: WinLossParams, vols: VolatilityPair) -> CubefulEquities:
        raise NotImplementedError

    def points(self, wl: WinLossParams, vols: VolatilityPair) -> DecisionPoints:
        return self.equities(wl, vols).points


class LinearModel(EquityModel):
    method = EquityMethod.LINEAR

    def equities(self, wl, vols):
        curves = linear_curves(wl, vols)
        return CubefulEquities(
            points=decision_points_linear(wl, vols),
            owned=curves.owned,
            unavailable=curves.unavailable,
            centered=curves.centered,
            owned_doubled=curves.owned_remote,
            unavailable_doubled=curves.unavailable,
        )

    def points(self, wl, vols):
        return decision_points_linear(wl, vols)


class NonlinearModel(EquityModel):
    method = EquityMethod.NONLINEAR

    def __init__(self, jump_kind=None):
        self.jump_kind = JumpKind.parse(jump_kind or cube_setting('DEFAULT_JUMP_KIND'))

    def equities(self, wl, vols):
        eq, points = refined_equities(wl, vols, self.jump_kind)
        return CubefulEquities(
            points=points,
            owned=eq.owned,
            unavailable=eq.unavailable,
            centered=eq.centered,
            owned_doubled=eq.owned_remote,
            unavailable_doubled=eq.unavailable_remote,
        )

    def points(self, wl, vols):
        return decision_points_nonlinear(wl, vols, self.jump_kind)


class ExactModel(EquityModel):
    """Grid solution with a constant volatility; solutions are kept in the Django cache."""

    method = EquityMethod.EXACT

    def __init__(self, jump_kind=None, grid_size: Optional[int] = None):
        self.jump_kind = JumpKind.parse(jump_kind or cube_setting('DEFAULT_JUMP_KIND'))
        self.grid_size = int(cube_setting('DEFAULT_GRID_SIZE') if grid_size is None else grid_size)

    def solution(self, wl: WinLossParams, vols: VolatilityPair) -> EquitySolution:
        if not vols.is_constant:
            logger.warning(
                f"Exact solver uses one volatility; alpha_local={vols.alpha_local} ignored, "
                f"solving at alpha_remote={vols.alpha_remote}"
            )
        alpha = vols.alpha_remote
        cache_key = f"exact_solution:{self.jump_kind.value}:{wl.w!r}:{wl.l!r}:{alpha!r}:{self.grid_size}"
        solution = cache.get(cache_key)
        if solution is None:
            profile = DistributionProfile.constant(self.jump_kind, alpha)
            solution = solve(wl, profile, self.grid_size)
            cache.set(cache_key, solution, timeout=cube_setting('SOLUTION_CACHE_TTL'))
        else:
            logger.debug(f"Exact solution cache hit: {cache_key}")
        return solution

    def equities(self, wl, vols):
        sol = self.solution(wl, vols)
        owned = lambda p: sol.interpolate(CubeKind.PLAYER_OWNS, p)
        unavailable = lambda p: sol.interpolate(CubeKind.OPPONENT_OWNS, p)
        return CubefulEquities(
            points=sol.points,
            owned=owned,
            unavailable=unavailable,
            centered=lambda p: sol.interpolate(CubeKind.CENTERED, p),
            owned_doubled=owned,
            unavailable_doubled=unavailable,
            info={
                'iterations_ou': sol.iterations_ou,
                'iterations_c': sol.iterations_c,
                'residual': sol.residual,
                'grid_size': sol.grid.n,
                'diagnostics': list(sol.diagnostics),
            },
        )


def get_model(method, jump_kind=None, grid_size: Optional[int] = None) -> EquityModel:
    method = EquityMethod(method)
    if method is EquityMethod.LINEAR:
        return LinearModel()
    if method is EquityMethod.NONLINEAR:
        return NonlinearModel(jump_kind)
    return ExactModel(jump_kind, grid_size)


# ===== Advice =====

@dataclass(frozen=True)
class CubeAdvice:
    """
    Equities are normalised to the current cube and seen from the doubler's side.
    For an opponent-owned cube the doubler is the opponent.
    """

    doubler: Side
    doubler_action: DoublerAction
    taker_action: TakerAction
    method: EquityMethod
    p_win: float
    cube: CubeState
    no_double_equity: float
    double_take_equity: float
    points_used: DecisionPoints
    double_pass_equity: float = 1.0

    @property
    def double_equity(self) -> float:
        return min(self.double_take_equity, self.double_pass_equity)

    @property
    def decision(self) -> str:
        """Short label in the usual 'double/take' notation."""
        if self.doubler is Side.OPPONENT:
            return self.taker_action.value
        if self.doubler_action is DoublerAction.NO_DOUBLE:
            return 'no double'
        if self.doubler_action is DoublerAction.TOO_GOOD:
            return 'too good'
        return f"double/{self.taker_action.value}"


def _doubler_action(p: float, double_from: float, too_good_from: float) -> DoublerAction:
    if p >= too_good_from:
        return DoublerAction.TOO_GOOD
    if p >= double_from:
        return DoublerAction.DOUBLE
    return DoublerAction.NO_DOUBLE


def advise(p: float, wl: WinLossParams, cube: CubeState, vols: VolatilityPair, model: EquityModel) -> CubeAdvice:
    """Recommendation at win probability ``p`` for an already-derived W/L."""
    eq = model.equities(wl, vols)
    pts = eq.points

    if cube.kind is CubeKind.OPPONENT_OWNS:
        mirrored = pts.reflected()
        action = _doubler_action(1.0 - p, mirrored.rd_o, mirrored.tg_o)
        taker = TakerAction.TAKE if p >= pts.tp else TakerAction.PASS
        return CubeAdvice(
            doubler=Side.OPPONENT,
            doubler_action=action,
            taker_action=taker,
            method=model.method,
            p_win=p,
            cube=cube,
            no_double_equity=-float(eq.unavailable(p)),
            double_take_equity=-2.0 * float(eq.owned_doubled(p)),
            points_used=pts,
        )

    if cube.kind is CubeKind.PLAYER_OWNS:
        action = _doubler_action(p, pts.rd_o, pts.tg_o)
        no_double = float(eq.owned(p))
    else:
        action = _doubler_action(p, pts.id_o, pts.tgc_o)
        no_double = float(eq.centered(p))

    if action is DoublerAction.DOUBLE:
        taker = TakerAction.TAKE if p <= pts.cp else TakerAction.PASS
    else:
        taker = TakerAction.NOT_APPLICABLE
    return CubeAdvice(
        doubler=Side.PLAYER,
        doubler_action=action,
        taker_action=taker,
        method=model.method,
        p_win=p,
        cube=cube,
        no_double_equity=no_double,
        double_take_equity=2.0 * float(eq.unavailable_doubled(p)),
        points_used=pts,
    )


def recommend(g: GammonProbs, cube: CubeState, vols: VolatilityPair, method, jump_kind=None, grid_size=None) -> CubeAdvice:
    wl = derive_win_loss(g)
    advice = advise(g.p_win, wl, cube, vols, get_model(method, jump_kind, grid_size))
    logger.info(
        f"Advice P={g.p_win} W={wl.w:.4f} L={wl.l:.4f} cube={cube.kind.value}: {advice.decision}"
    )
    return advice


def equity_at(
    p: float,
    wl: WinLossParams,
    cube: CubeState,
    vols: VolatilityPair,
    method,
    normalized: bool = True,
    jump_kind=None,
    grid_size=None,
) -> float:
    value = float(get_model(method, jump_kind, grid_size).equities(wl, vols).for_cube(cube.kind)(p))
    return value if normalized else value * cube.value


def equity(g: GammonProbs, cube: CubeState, vols: VolatilityPair, method, normalized: bool = True, **kwargs) -> float:
    return equity_at(g.p_win, derive_win_loss(g), cube, vols, method, normalized, **kwargs)
