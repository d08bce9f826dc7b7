# core/nonlinear_approx.py - One jump-integral pass over the linear approximation

"""
Nonlinear equity approximation.

Each cube state's equity is the expectation of its post-jump value, where the
post-jump value is assembled region by region from the linear curves (hold,
cash, pass, or a doubled cube) and extended affinely outside [0, 1]. A region
[lo, hi] carrying the affine value a + b*x contributes

    (a + b P) (F(hi - P) - F(lo - P)) + b (G(hi - P) - G(lo - P))

to the equity at P. The two tail slopes are fixed by E(0) = -L and E(1) = W.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from .distributions import JumpDistribution, distribution_for
from .exceptions import BracketError, InvalidParameterError, SingularSystemError, UnsolvedBoundaryError
from .linear_approx import (
    DecisionPoints, LinearCurves, PiecewiseLinearEquity, PlayerSidePoints,
    combine_sides, decision_points_linear, linear_curves,
)
from .params import CubeKind, VolatilityPair, WinLossParams
from .utils import cube_setting, ordered_bounds

logger = logging.getLogger(__name__)

# A region: (lo, hi, curve or None, multiplier, constant). The value on the region
# is multiplier * curve(x) + constant.
Region = Tuple[float, float, Optional[PiecewiseLinearEquity], float, float]


@dataclass(frozen=True)
class BoundaryCoefficients:
    a_minus: float
    b_minus: float
    a_plus: float
    b_plus: float


def _region_integral(dist: JumpDistribution, p: np.ndarray, regions: List[Region]) -> np.ndarray:
    total = np.zeros_like(p)
    for lo, hi, curve, mult, const in regions:
        if hi <= lo:
            continue
        pieces = [(lo, hi)]
        if curve is not None:
            cuts = [b for b in curve.breakpoints if lo < b < hi]
            edges = [lo] + cuts + [hi]
            pieces = list(zip(edges[:-1], edges[1:]))
        for a_lo, a_hi in pieces:
            if curve is None:
                intercept, slope = const, 0.0
            else:
                c_a, c_b = curve.segments[curve.segment_at(0.5 * (a_lo + a_hi))]
                intercept, slope = mult * c_a + const, mult * c_b
            d_f = dist.cdf(a_hi - p) - dist.cdf(a_lo - p)
            d_g = dist.partial_moment(a_hi - p) - dist.partial_moment(a_lo - p)
            total += (intercept + slope * p) * d_f + slope * d_g
    return total


def cube_regions(kind: CubeKind, points: DecisionPoints, curves: LinearCurves) -> List[Region]:
    """Post-jump value on [0, 1] for the given cube state."""
    pt = points
    if kind is CubeKind.PLAYER_OWNS:
        b = ordered_bounds(0.0, pt.rd_o, pt.cp, pt.tg_o, 1.0)
        return [
            (b[0], b[1], curves.owned, 1.0, 0.0),
            (b[1], b[2], curves.unavailable, 2.0, 0.0),
            (b[2], b[3], None, 0.0, 1.0),
            (b[3], b[4], curves.owned, 1.0, 0.0),
        ]
    if kind is CubeKind.OPPONENT_OWNS:
        b = ordered_bounds(0.0, pt.tg_u, pt.tp, pt.rd_u, 1.0)
        return [
            (b[0], b[1], curves.unavailable, 1.0, 0.0),
            (b[1], b[2], None, 0.0, -1.0),
            (b[2], b[3], curves.owned_remote, 2.0, 0.0),
            (b[3], b[4], curves.unavailable, 1.0, 0.0),
        ]
    b = ordered_bounds(0.0, pt.tgc_u, pt.tp, pt.id_u, pt.id_o, pt.cp, pt.tgc_o, 1.0)
    return [
        (b[0], b[1], curves.centered, 1.0, 0.0),
        (b[1], b[2], None, 0.0, -1.0),
        (b[2], b[3], curves.owned_remote, 2.0, 0.0),
        (b[3], b[4], curves.centered, 1.0, 0.0),
        (b[4], b[5], curves.unavailable, 2.0, 0.0),
        (b[5], b[6], None, 0.0, 1.0),
        (b[6], b[7], curves.centered, 1.0, 0.0),
    ]


def _tail_terms(dist: JumpDistribution, p: np.ndarray, wl: WinLossParams):
    """Known tail parts and the multipliers of b_minus and b_plus."""
    f_lo = dist.cdf(-p)
    g_lo = dist.partial_moment(-p)
    above = 1.0 - dist.cdf(1.0 - p)
    g_hi = dist.partial_moment(1.0 - p)
    known = -wl.l * f_lo + wl.w * above
    u = p * f_lo + g_lo
    v = (p - 1.0) * above - g_hi
    return known, u, v


def solve_boundaries(
    kind: CubeKind,
    wl: WinLossParams,
    dist: JumpDistribution,
    points: DecisionPoints,
    curves: LinearCurves,
) -> BoundaryCoefficients:
    """Tail slopes making the equity hit -L at 0 and +W at 1."""
    ends = np.array([0.0, 1.0])
    base = _region_integral(dist, ends, cube_regions(kind, points, curves))
    known, u, v = _tail_terms(dist, ends, wl)
    matrix = np.array([[u[0], v[0]], [u[1], v[1]]])
    rhs = np.array([-wl.l, wl.w]) - base - known

    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    if det == 0.0 or not np.isfinite(det):
        cond = float(np.linalg.cond(matrix)) if np.all(np.isfinite(matrix)) else float('inf')
        logger.error(f"Boundary system singular for {kind.value} W={wl.w} L={wl.l}")
        raise SingularSystemError(f"Boundary system for {kind.value} cube is singular", cond)
    b_minus = (rhs[0] * matrix[1, 1] - matrix[0, 1] * rhs[1]) / det
    b_plus = (matrix[0, 0] * rhs[1] - rhs[0] * matrix[1, 0]) / det
    return BoundaryCoefficients(
        a_minus=-wl.l, b_minus=float(b_minus), a_plus=wl.w - float(b_plus), b_plus=float(b_plus),
    )


@dataclass(frozen=True)
class NonlinearEquity:
    """Nonlinear equity of one cube state, ready to evaluate once boundaries are solved."""

    cube_state: CubeKind
    wl: WinLossParams
    dist_current: JumpDistribution
    dist_remote: JumpDistribution
    points: DecisionPoints
    linear_curves: LinearCurves
    boundary: Optional[BoundaryCoefficients] = None

    @classmethod
    def build(cls, kind: CubeKind, wl, dist_current, dist_remote, points, curves) -> 'NonlinearEquity':
        boundary = solve_boundaries(kind, wl, dist_current, points, curves)
        return cls(kind, wl, dist_current, dist_remote, points, curves, boundary)

    def at_remote_level(self) -> 'NonlinearEquity':
        """The same state integrated with the remote distribution (a doubled cube)."""
        if self.dist_current == self.dist_remote:
            return self
        return NonlinearEquity.build(
            self.cube_state, self.wl, self.dist_remote, self.dist_remote, self.points, self.linear_curves,
        )

    def __call__(self, p):
        if self.boundary is None:
            raise UnsolvedBoundaryError(f"Boundary coefficients for {self.cube_state.value} not solved")
        p_arr = np.atleast_1d(np.asarray(p, dtype=float))
        base = _region_integral(self.dist_current, p_arr, cube_regions(self.cube_state, self.points, self.linear_curves))
        known, u, v = _tail_terms(self.dist_current, p_arr, self.wl)
        out = base + known + self.boundary.b_minus * u + self.boundary.b_plus * v
        return float(out[0]) if np.ndim(p) == 0 else out


def _eval_as(kind: CubeKind, ne: NonlinearEquity, p):
    if ne.cube_state is not kind:
        raise InvalidParameterError(f"Expected a {kind.value} equity, got {ne.cube_state.value}")
    return ne(p)


def eval_owned(ne: NonlinearEquity, p):
    return _eval_as(CubeKind.PLAYER_OWNS, ne, p)


def eval_unavailable(ne: NonlinearEquity, p):
    return _eval_as(CubeKind.OPPONENT_OWNS, ne, p)


def eval_centered(ne: NonlinearEquity, p):
    return _eval_as(CubeKind.CENTERED, ne, p)


@dataclass(frozen=True)
class NonlinearSet:
    """Local- and remote-level equities for the three cube states of one game."""

    owned: NonlinearEquity
    unavailable: NonlinearEquity
    centered: NonlinearEquity
    owned_remote: NonlinearEquity
    unavailable_remote: NonlinearEquity
    linear_points: DecisionPoints


def nonlinear_equities(
    wl: WinLossParams,
    vols: VolatilityPair,
    kind=None,
    points: Optional[DecisionPoints] = None,
) -> NonlinearSet:
    if points is None:
        points = decision_points_linear(wl, vols)
    curves = linear_curves(wl, vols)
    local = distribution_for(vols.alpha_local, kind)
    remote = distribution_for(vols.alpha_remote, kind)

    owned = NonlinearEquity.build(CubeKind.PLAYER_OWNS, wl, local, remote, points, curves)
    unavailable = NonlinearEquity.build(CubeKind.OPPONENT_OWNS, wl, local, remote, points, curves)
    centered = NonlinearEquity.build(CubeKind.CENTERED, wl, local, remote, points, curves)
    return NonlinearSet(
        owned=owned,
        unavailable=unavailable,
        centered=centered,
        owned_remote=owned.at_remote_level(),
        unavailable_remote=unavailable.at_remote_level(),
        linear_points=points,
    )


# ===== Decision points =====

def _bisect_point(name: str, fn: Callable[[float], float], guess: float) -> float:
    half = float(cube_setting('BRACKET_HALF_WIDTH'))
    lo, hi = max(0.0, guess - half), min(1.0, guess + half)
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        logger.error(f"Bisection bracket for {name} has no sign change")
        raise BracketError(name, lo, hi, f_lo, f_hi)
    return float(bisect(fn, lo, hi, xtol=float(cube_setting('BISECTION_TOL'))))


def player_side_nonlinear(
    wl: WinLossParams, vols: VolatilityPair, kind=None, eq: Optional[NonlinearSet] = None,
) -> PlayerSidePoints:
    if eq is None:
        eq = nonlinear_equities(wl, vols, kind)
    lin = eq.linear_points

    cp = _bisect_point('cp', lambda p: eq.unavailable_remote(p) - 0.5, lin.cp)
    rd_o = _bisect_point('rd_o', lambda p: eq.owned(p) - 2.0 * eq.unavailable_remote(p), lin.rd_o)
    id_o = _bisect_point('id_o', lambda p: eq.centered(p) - 2.0 * eq.unavailable_remote(p), lin.id_o)
    if wl.w == 1.0:
        tg_o = tgc_o = 1.0
    else:
        tg_o = _bisect_point('tg_o', lambda p: eq.owned(p) - 1.0, lin.tg_o)
        tgc_o = _bisect_point('tgc_o', lambda p: eq.centered(p) - 1.0, lin.tgc_o)
    return PlayerSidePoints(cp=cp, rd_o=rd_o, tg_o=tg_o, id_o=id_o, tgc_o=tgc_o)


def refined_equities(wl: WinLossParams, vols: VolatilityPair, kind=None) -> Tuple[NonlinearSet, DecisionPoints]:
    """Equities built on the linear points together with the bisected nonlinear points."""
    eq = nonlinear_equities(wl, vols, kind)
    player = player_side_nonlinear(wl, vols, kind, eq=eq)
    mirrored = player_side_nonlinear(wl.swapped(), vols, kind)
    points = combine_sides(player, mirrored)
    logger.debug(f"Nonlinear points W={wl.w} L={wl.l} vols={vols}: {points.as_dict()}")
    return eq, points


def decision_points_nonlinear(wl: WinLossParams, vols: VolatilityPair, kind=None) -> DecisionPoints:
    return refined_equities(wl, vols, kind)[1]
