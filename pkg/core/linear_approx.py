# core/linear_approx.py - Closed-form take/cash points and piecewise-linear equities

"""
Linear approximation of cubeful equity.

Equities are normalised to the current cube and run from -L at P=0 to +W at
P=1. Curves are built from a handful of anchors (take/cash points and the
equities there), and every decision point is an affine intersection of two
such curves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Tuple

import numpy as np

from .exceptions import InvalidParameterError, VolatilityTooLargeError
from .params import VolatilityPair, WinLossParams
from .utils import first_crossing

logger = logging.getLogger(__name__)

POINT_NAMES = ('tg_u', 'tp', 'rd_u', 'rd_o', 'cp', 'tg_o', 'tgc_u', 'id_u', 'id_o', 'tgc_o')


# ===== Curve type =====

@dataclass(frozen=True)
class PiecewiseLinearEquity:
    """Breakpoints on [0, 1] with one (intercept, slope) pair per interval."""

    breakpoints: Tuple[float, ...]
    segments: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        if b.size < 2 or b[0] != 0.0 or b[-1] != 1.0:
            raise InvalidParameterError(f"Breakpoints must start at 0 and end at 1: {self.breakpoints}")
        if np.any(np.diff(b) <= 0.0):
            raise InvalidParameterError(f"Breakpoints must be strictly increasing: {self.breakpoints}")
        if len(self.segments) != b.size - 1:
            raise InvalidParameterError("Need exactly one segment per interval")

    @classmethod
    def through(cls, nodes) -> 'PiecewiseLinearEquity':
        """Connect (P, E) nodes with straight lines; coincident nodes are merged."""
        xs, ys = [], []
        for x, y in nodes:
            if xs and x <= xs[-1] + 1e-15:
                ys[-1] = y
                continue
            xs.append(float(x))
            ys.append(float(y))
        segments = []
        for (x0, y0), (x1, y1) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
            slope = (y1 - y0) / (x1 - x0)
            segments.append((y0 - slope * x0, slope))
        return cls(tuple(xs), tuple(segments))

    def segment_at(self, p: float) -> int:
        idx = int(np.searchsorted(self.breakpoints, p, side='right')) - 1
        return min(max(idx, 0), len(self.segments) - 1)

    def __call__(self, p):
        p_arr = np.asarray(p, dtype=float)
        b = np.asarray(self.breakpoints)
        idx = np.clip(np.searchsorted(b, p_arr, side='right') - 1, 0, len(self.segments) - 1)
        coeffs = np.asarray(self.segments)
        out = coeffs[idx, 0] + coeffs[idx, 1] * p_arr
        return float(out) if np.ndim(out) == 0 else out

    def nodes(self) -> np.ndarray:
        return np.asarray(self(np.asarray(self.breakpoints)))

    def reflected(self) -> 'PiecewiseLinearEquity':
        """Opponent's view: E'(P) = -E(1 - P)."""
        b = np.asarray(self.breakpoints)
        values = self.nodes()
        return PiecewiseLinearEquity.through(zip(1.0 - b[::-1], -values[::-1]))


def crossing(
    first: PiecewiseLinearEquity,
    second: PiecewiseLinearEquity,
    rising: bool,
    lo: float = 0.0,
    hi: float = 1.0,
    factor_first: float = 1.0,
    factor_second: float = 1.0,
    offset: float = 0.0,
) -> Tuple[float, bool]:
    """
    First root of factor_first*first - factor_second*second - offset on [lo, hi].

    The difference is linear between merged breakpoints, so interpolating it
    there gives the exact affine intersection.
    """
    x = np.union1d(first.breakpoints, second.breakpoints)
    g = factor_first * np.asarray(first(x)) - factor_second * np.asarray(second(x)) - offset
    return first_crossing(x, g, rising, lo, hi)


# ===== Decision points =====

@dataclass(frozen=True)
class DecisionPoints:
    tg_u: float
    tp: float
    rd_u: float
    rd_o: float
    cp: float
    tg_o: float
    tgc_u: float
    id_u: float
    id_o: float
    tgc_o: float
    clamped: Tuple[str, ...] = field(default=(), compare=False)

    def reflected(self) -> 'DecisionPoints':
        """Points of the mirrored game (W and L swapped, P -> 1 - P)."""
        mirror = {
            'tg_u': 'tg_o', 'tp': 'cp', 'rd_u': 'rd_o', 'rd_o': 'rd_u', 'cp': 'tp', 'tg_o': 'tg_u',
            'tgc_u': 'tgc_o', 'id_u': 'id_o', 'id_o': 'id_u', 'tgc_o': 'tgc_u',
        }
        values = {name: 1.0 - getattr(self, mirror[name]) for name in POINT_NAMES}
        return DecisionPoints(**values, clamped=tuple(mirror[c] for c in self.clamped))

    def as_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in POINT_NAMES}

    def max_change(self, other: 'DecisionPoints', names=POINT_NAMES) -> float:
        return max(abs(getattr(self, n) - getattr(other, n)) for n in names)

    def with_values(self, **values) -> 'DecisionPoints':
        return replace(self, **values)


@dataclass(frozen=True)
class PlayerSidePoints:
    """Points decided by the player: cash, redouble, too-good, initial double."""

    cp: float
    rd_o: float
    tg_o: float
    id_o: float
    tgc_o: float
    clamped: Tuple[str, ...] = ()


def _collapse(lower: float, upper: float, floor: float, ceiling: float) -> float:
    """Common value for a crossed pair of points, kept inside [floor, ceiling]."""
    return min(max(0.5 * (lower + upper), floor), ceiling)


def combine_sides(player: PlayerSidePoints, mirrored: PlayerSidePoints) -> DecisionPoints:
    """
    Merge player-side points with those of the mirrored game.

    At extreme volatility the two sides' redouble (or initial double) points
    can cross. A crossed pair is collapsed onto its midpoint, clipped to the
    window it must stay in, and both names are reported as clamped.
    """
    clamped = list(player.clamped) + [
        {'cp': 'tp', 'rd_o': 'rd_u', 'tg_o': 'tg_u', 'id_o': 'id_u', 'tgc_o': 'tgc_u'}[c]
        for c in mirrored.clamped
    ]
    tp, cp = 1.0 - mirrored.cp, player.cp
    rd_u, rd_o = 1.0 - mirrored.rd_o, player.rd_o
    id_u, id_o = 1.0 - mirrored.id_o, player.id_o
    if tp > cp:
        raise VolatilityTooLargeError(f"Take point {tp:.6f} lies above cash point {cp:.6f}")

    if rd_u > rd_o:
        rd_u = rd_o = _collapse(rd_o, rd_u, tp, cp)
        clamped += ['rd_u', 'rd_o']
    id_u, id_o = max(id_u, rd_u), min(id_o, rd_o)
    if id_u > id_o:
        id_u = id_o = _collapse(id_o, id_u, rd_u, rd_o)
        clamped += ['id_u', 'id_o']

    clamped = tuple(dict.fromkeys(clamped))
    if clamped:
        logger.warning(f"Decision points clamped to their domain: {', '.join(clamped)}")
    return DecisionPoints(
        tg_u=1.0 - mirrored.tg_o,
        tp=tp,
        rd_u=rd_u,
        rd_o=rd_o,
        cp=cp,
        tg_o=player.tg_o,
        tgc_u=1.0 - mirrored.tgc_o,
        id_u=id_u,
        id_o=id_o,
        tgc_o=player.tgc_o,
        clamped=clamped,
    )


# ===== Live cube =====

def live_cash_point(wl: WinLossParams) -> float:
    return (wl.l + 1.0) / wl.span


def live_take_point(wl: WinLossParams) -> float:
    return (wl.l - 0.5) / wl.span


def live_owned_curve(wl: WinLossParams) -> PiecewiseLinearEquity:
    cp = live_cash_point(wl)
    return PiecewiseLinearEquity.through([(0.0, -wl.l), (cp, 1.0), (1.0, wl.w)])


def live_unavailable_curve(wl: WinLossParams) -> PiecewiseLinearEquity:
    tp = live_take_point(wl)
    return PiecewiseLinearEquity.through([(0.0, -wl.l), (tp, -1.0), (1.0, wl.w)])


def live_centered_curve(wl: WinLossParams) -> PiecewiseLinearEquity:
    return PiecewiseLinearEquity.through([
        (0.0, -wl.l), (live_take_point(wl), -1.0), (live_cash_point(wl), 1.0), (1.0, wl.w),
    ])


# ===== Volatility-corrected slopes =====

def owned_slope(wl: WinLossParams, alpha: float) -> float:
    """B_O1: slope of the owned curve below the cash point."""
    s = wl.span
    slope = s - alpha * s * s / (4.0 * (wl.w - 0.5) * (wl.l + 1.0))
    if slope <= 0.0:
        raise VolatilityTooLargeError(f"Owned-cube slope nonpositive at alpha={alpha}", alpha)
    return slope


def unavailable_slope(wl: WinLossParams, alpha: float) -> float:
    """B_U2: slope of the unavailable curve above the take point."""
    s = wl.span
    slope = s - 0.25 * alpha * s * s / ((wl.l - 0.5) * (wl.w + 1.0))
    if slope <= 0.0:
        raise VolatilityTooLargeError(f"Unavailable-cube slope nonpositive at alpha={alpha}", alpha)
    return slope


def take_point(wl: WinLossParams, alpha_remote: float) -> float:
    w, l, s = wl.w, wl.l, wl.span
    inner = l + 1.0 - 0.25 * alpha_remote * s / (w - 0.5)
    if inner <= 0.0:
        raise VolatilityTooLargeError(
            f"Take point undefined: alpha_remote={alpha_remote} too large for W={w}, L={l}", alpha_remote
        )
    return (l - 0.5) * (l + 1.0) / (s * inner)


def cash_point(wl: WinLossParams, alpha_remote: float) -> float:
    w, l, s = wl.w, wl.l, wl.span
    denom = 2.0 * (2.0 * l * w + 2.0 * l - w - 1.0) - alpha_remote * s
    if denom <= 0.0:
        raise VolatilityTooLargeError(
            f"Cash point undefined: alpha_remote={alpha_remote} too large for W={w}, L={l}", alpha_remote
        )
    return live_cash_point(wl) - alpha_remote * (w - 0.5) / denom


# ===== Curves =====

def owned_equity_curve(wl: WinLossParams, alpha_anchor: float, alpha_remote: float) -> PiecewiseLinearEquity:
    cp = cash_point(wl, alpha_remote)
    at_cp = -wl.l + owned_slope(wl, alpha_anchor) * cp
    return PiecewiseLinearEquity.through([(0.0, -wl.l), (cp, at_cp), (1.0, wl.w)])


def unavailable_equity_curve(wl: WinLossParams, alpha_remote: float) -> PiecewiseLinearEquity:
    tp = take_point(wl, alpha_remote)
    at_tp = wl.w - unavailable_slope(wl, alpha_remote) * (1.0 - tp)
    return PiecewiseLinearEquity.through([(0.0, -wl.l), (tp, at_tp), (1.0, wl.w)])


def centered_anchors(wl: WinLossParams, alpha_local: float, alpha_remote: float) -> Tuple[float, float]:
    """Centered equity at the live take and cash points."""
    s = wl.span
    at_cash = 1.0 - alpha_local * s * (wl.w + 1.0) / (6.0 * (wl.w - 0.5))
    at_take = -1.0 + alpha_remote * s * (wl.l + 1.0) / (6.0 * (wl.l - 0.5))
    return at_take, at_cash


def centered_equity_curve(wl: WinLossParams, alpha_local: float, alpha_remote: float) -> PiecewiseLinearEquity:
    at_take, at_cash = centered_anchors(wl, alpha_local, alpha_remote)
    return PiecewiseLinearEquity.through([
        (0.0, -wl.l),
        (live_take_point(wl), at_take),
        (live_cash_point(wl), at_cash),
        (1.0, wl.w),
    ])


@dataclass(frozen=True)
class LinearCurves:
    owned: PiecewiseLinearEquity
    owned_remote: PiecewiseLinearEquity
    unavailable: PiecewiseLinearEquity
    centered: PiecewiseLinearEquity


def linear_curves(wl: WinLossParams, vols: VolatilityPair) -> LinearCurves:
    return LinearCurves(
        owned=owned_equity_curve(wl, vols.alpha_local, vols.alpha_remote),
        owned_remote=owned_equity_curve(wl, vols.alpha_remote, vols.alpha_remote),
        unavailable=unavailable_equity_curve(wl, vols.alpha_remote),
        centered=centered_equity_curve(wl, vols.alpha_local, vols.alpha_remote),
    )


# ===== Decision points =====

def player_side_linear(wl: WinLossParams, vols: VolatilityPair) -> PlayerSidePoints:
    curves = linear_curves(wl, vols)
    cp = cash_point(wl, vols.alpha_remote)
    clamped = []

    rd_o, found = crossing(curves.owned, curves.unavailable, rising=False, hi=cp, factor_second=2.0)
    if not found:
        clamped.append('rd_o')
    rd_o = min(rd_o, cp)

    if wl.w == 1.0:
        tg_o = tgc_o = 1.0
    else:
        tg_o, found = crossing(curves.owned, curves.owned, rising=True, lo=cp, factor_second=0.0, offset=1.0)
        if not found:
            clamped.append('tg_o')
        tgc_o, found = crossing(curves.centered, curves.centered, rising=True, lo=cp, factor_second=0.0, offset=1.0)
        if not found:
            clamped.append('tgc_o')

    id_o, found = crossing(curves.centered, curves.unavailable, rising=False, hi=cp, factor_second=2.0)
    if not found:
        clamped.append('id_o')
    id_o = min(id_o, rd_o)

    return PlayerSidePoints(cp=cp, rd_o=rd_o, tg_o=tg_o, id_o=id_o, tgc_o=tgc_o, clamped=tuple(clamped))


def decision_points_linear(wl: WinLossParams, vols: VolatilityPair) -> DecisionPoints:
    """All ten points; the opponent's come from the mirrored game."""
    player = player_side_linear(wl, vols)
    mirrored = player_side_linear(wl.swapped(), vols)
    points = combine_sides(player, mirrored)
    logger.debug(f"Linear points W={wl.w} L={wl.l} vols={vols}: {points.as_dict()}")
    return points


def live_decision_points(wl: WinLossParams) -> DecisionPoints:
    return decision_points_linear(wl, VolatilityPair.constant(0.0))
