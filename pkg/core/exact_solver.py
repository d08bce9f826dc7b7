# core/exact_solver.py - Discretised cubeful equity integral equations

"""
Exact solver.

P is cut into N buckets. Unknowns are the equities at the N-1 interior nodes
for each cube state; node 0 is -L and node N is +W. Inside a bucket every
equity is the linear interpolant of its nodal values, and the post-jump
value switches array (hold, doubled, cash, pass) exactly at the decision
points, so a bucket holding a point is split in two. Outside [0, 1] each
equity continues the line through its first (last) bucket.

Given fixed decision points the equations are linear: owned and unavailable
are coupled through the doubled-cube terms and solved together, centered is
solved afterwards with both known. The points are then moved to where the
interpolated equities meet their conditions, and the whole thing repeats
until the points stop moving.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .distributions import JumpKind, cdf as kernel_cdf, partial_moment as kernel_g, scale_for_volatility
from .exceptions import (
    InvalidParameterError, NonConvergenceError, SingularSystemError, VolatilityTooLargeError,
)
from .linear_approx import DecisionPoints, decision_points_linear, live_decision_points
from .params import CubeKind, VolatilityPair, WinLossParams
from .utils import cube_setting, first_crossing, ordered_bounds

logger = logging.getLogger(__name__)

OU_POINTS = ('tg_u', 'tp', 'rd_u', 'rd_o', 'cp', 'tg_o')
CENTERED_POINTS = ('tgc_u', 'id_u', 'id_o', 'tgc_o')
MIN_GRID = 50


# ===== Grid and volatility profile =====

@dataclass(frozen=True, eq=False)
class Grid:
    n: int
    points: np.ndarray

    @classmethod
    def uniform(cls, n: int) -> 'Grid':
        if int(n) < MIN_GRID:
            raise InvalidParameterError(f"Grid needs at least {MIN_GRID} buckets, got {n}")
        pts = np.linspace(0.0, 1.0, int(n) + 1)
        pts[0], pts[-1] = 0.0, 1.0
        return cls(int(n), pts)

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    @property
    def spacing(self) -> np.ndarray:
        return np.diff(self.points)


@dataclass(frozen=True, eq=False)
class DistributionProfile:
    """Jump law per P: a fixed family whose volatility may depend on P."""

    kind: JumpKind
    alpha: Callable[[np.ndarray], np.ndarray]
    label: str = 'custom'

    @classmethod
    def constant(cls, kind, alpha: float) -> 'DistributionProfile':
        value = float(alpha)
        return cls(JumpKind.parse(kind), lambda p: np.full(np.shape(p), value), f"constant:{value!r}")

    @classmethod
    def from_function(cls, kind, fn: Callable[[np.ndarray], np.ndarray], label: str = 'custom') -> 'DistributionProfile':
        return cls(JumpKind.parse(kind), fn, label)

    @classmethod
    def from_table(cls, kind, p_values, alphas) -> 'DistributionProfile':
        xp = np.asarray(p_values, dtype=float)
        fp = np.asarray(alphas, dtype=float)
        return cls(JumpKind.parse(kind), lambda p: np.interp(p, xp, fp), 'table')

    def alphas(self, p: np.ndarray) -> np.ndarray:
        values = np.asarray(self.alpha(np.asarray(p, dtype=float)), dtype=float)
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise InvalidParameterError(f"Volatility profile {self.label} produced invalid values")
        return np.maximum(values, float(cube_setting('MIN_JUMP_VOLATILITY')))

    def scales(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(scale_for_volatility(self.kind, self.alphas(p)), dtype=float)

    def representative_alpha(self, grid: Grid) -> float:
        return float(np.mean(self.alphas(grid.interior)))


# ===== Solution =====

@dataclass(frozen=True, eq=False)
class EquitySolution:
    grid: Grid
    e_o: np.ndarray
    e_u: np.ndarray
    e_c: np.ndarray
    points: DecisionPoints
    iterations_ou: int
    iterations_c: int
    residual: float
    diagnostics: Tuple[str, ...] = field(default=())

    def array(self, kind: CubeKind) -> np.ndarray:
        return {
            CubeKind.PLAYER_OWNS: self.e_o,
            CubeKind.OPPONENT_OWNS: self.e_u,
            CubeKind.CENTERED: self.e_c,
        }[CubeKind(kind)]

    def interpolate(self, kind: CubeKind, p):
        out = np.interp(p, self.grid.points, self.array(kind))
        return float(out) if np.ndim(out) == 0 else out


# ===== Assembly =====

# Post-jump region: (lo, hi, source array or None, multiplier). With no source
# the multiplier is the constant value on the region.
Region = Tuple[float, float, Optional[str], float]


def owned_regions(pt: DecisionPoints) -> List[Region]:
    b = ordered_bounds(0.0, pt.rd_o, pt.cp, pt.tg_o, 1.0)
    return [(b[0], b[1], 'o', 1.0), (b[1], b[2], 'u', 2.0), (b[2], b[3], None, 1.0), (b[3], b[4], 'o', 1.0)]


def unavailable_regions(pt: DecisionPoints) -> List[Region]:
    b = ordered_bounds(0.0, pt.tg_u, pt.tp, pt.rd_u, 1.0)
    return [(b[0], b[1], 'u', 1.0), (b[1], b[2], None, -1.0), (b[2], b[3], 'o', 2.0), (b[3], b[4], 'u', 1.0)]


def centered_regions(pt: DecisionPoints) -> List[Region]:
    b = ordered_bounds(0.0, pt.tgc_u, pt.tp, pt.id_u, pt.id_o, pt.cp, pt.tgc_o, 1.0)
    return [
        (b[0], b[1], 'c', 1.0), (b[1], b[2], None, -1.0), (b[2], b[3], 'o', 2.0), (b[3], b[4], 'c', 1.0),
        (b[4], b[5], 'u', 2.0), (b[5], b[6], None, 1.0), (b[6], b[7], 'c', 1.0),
    ]


@dataclass
class _Rows:
    """Coefficients of one state's equations on the nodal arrays, plus constants."""

    blocks: Dict[str, np.ndarray]
    constant: np.ndarray


def _assemble_rows(
    grid: Grid,
    profile: DistributionProfile,
    regions: List[Region],
    own: str,
    wl: WinLossParams,
) -> _Rows:
    nodes = grid.points
    p_i = grid.interior[:, None]
    scale = profile.scales(grid.interior)[:, None]
    kind = profile.kind

    cuts = [r[0] for r in regions] + [regions[-1][1]]
    edges = np.union1d(nodes, np.clip(cuts, 0.0, 1.0))
    lo_e, hi_e = edges[:-1], edges[1:]
    mid = 0.5 * (lo_e + hi_e)
    bucket = np.clip(np.searchsorted(nodes, mid, side='right'), 1, grid.n)
    p_lo, p_hi = nodes[bucket - 1], nodes[bucket]
    h = p_hi - p_lo

    f_e = kernel_cdf(kind, scale, edges[None, :] - p_i)
    g_e = kernel_g(kind, scale, edges[None, :] - p_i)
    d_f = np.diff(f_e, axis=1)
    d_g = np.diff(g_e, axis=1)
    w_up = ((p_i - p_lo[None, :]) * d_f + d_g) / h[None, :]
    w_dn = ((p_hi[None, :] - p_i) * d_f - d_g) / h[None, :]

    region_lo = np.array([r[0] for r in regions])
    which = np.clip(np.searchsorted(region_lo, mid, side='right') - 1, 0, len(regions) - 1)

    rows = grid.n - 1
    blocks = {name: np.zeros((rows, grid.n + 1)) for name in ('o', 'u', 'c')}
    constant = np.zeros(rows)
    for r_idx, (_, _, source, mult) in enumerate(regions):
        mask = which == r_idx
        if not np.any(mask):
            continue
        if source is None:
            constant += mult * d_f[:, mask].sum(axis=1)
            continue
        target = blocks[source].T
        np.add.at(target, bucket[mask], (mult * w_up[:, mask]).T)
        np.add.at(target, bucket[mask] - 1, (mult * w_dn[:, mask]).T)

    # Linear continuation below 0 through nodes 0 and 1, above 1 through N-1 and N.
    p_col = grid.interior
    s_col = scale[:, 0]
    h_1, h_n = grid.spacing[0], grid.spacing[-1]
    f_below = kernel_cdf(kind, s_col, -p_col)
    g_below = kernel_g(kind, s_col, -p_col)
    above = 1.0 - kernel_cdf(kind, s_col, 1.0 - p_col)
    g_above = kernel_g(kind, s_col, 1.0 - p_col)

    blocks[own][:, 1] += (g_below + p_col * f_below) / h_1
    constant += -wl.l / h_1 * (-g_below + (nodes[1] - p_col) * f_below)
    blocks[own][:, grid.n - 1] += (g_above + (nodes[-1] - p_col) * above) / h_n
    constant += wl.w / h_n * (-g_above + (p_col - nodes[-2]) * above)

    # Known end nodes.
    for block in blocks.values():
        constant += block[:, 0] * (-wl.l) + block[:, -1] * wl.w
    return _Rows(blocks=blocks, constant=constant)


def _solve_dense(a: np.ndarray, b: np.ndarray, label: str) -> Tuple[np.ndarray, float]:
    with warnings.catch_warnings():
        warnings.simplefilter('error', LinAlgWarning)
        try:
            lu, piv = lu_factor(a, check_finite=True)
            x = lu_solve((lu, piv), b)
        except (LinAlgWarning, ValueError, np.linalg.LinAlgError):
            x = None
    if x is None or not np.all(np.isfinite(x)):
        cond = float(np.linalg.cond(a))
        logger.error(f"{label} system could not be solved (cond {cond:.3e})")
        raise SingularSystemError(f"{label} system is singular or ill-conditioned", cond)
    residual = float(np.max(np.abs(a @ x - b)))
    return x, residual


def _with_ends(interior: np.ndarray, wl: WinLossParams) -> np.ndarray:
    return np.concatenate(([-wl.l], interior, [wl.w]))


def _check_order(points: DecisionPoints, names):
    values = [getattr(points, n) for n in names]
    if any(not (0.0 <= v <= 1.0) or not np.isfinite(v) for v in values):
        raise InvalidParameterError(f"Decision points outside [0, 1]: {dict(zip(names, values))}")


def assemble_and_solve_ou(
    wl: WinLossParams,
    profile: DistributionProfile,
    grid: Grid,
    points: DecisionPoints,
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Owned and unavailable equities for fixed decision points, with the solve residual."""
    _check_order(points, OU_POINTS)
    rows_o = _assemble_rows(grid, profile, owned_regions(points), 'o', wl)
    rows_u = _assemble_rows(grid, profile, unavailable_regions(points), 'u', wl)

    inner = slice(1, grid.n)
    m = grid.n - 1
    a = np.eye(2 * m)
    a[:m, :m] -= rows_o.blocks['o'][:, inner]
    a[:m, m:] -= rows_o.blocks['u'][:, inner]
    a[m:, :m] -= rows_u.blocks['o'][:, inner]
    a[m:, m:] -= rows_u.blocks['u'][:, inner]
    b = np.concatenate((rows_o.constant, rows_u.constant))

    x, residual = _solve_dense(a, b, 'Owned/unavailable')
    return _with_ends(x[:m], wl), _with_ends(x[m:], wl), residual


def assemble_and_solve_c(
    wl: WinLossParams,
    profile: DistributionProfile,
    grid: Grid,
    points: DecisionPoints,
    e_o: np.ndarray,
    e_u: np.ndarray,
) -> Tuple[np.ndarray, float]:
    _check_order(points, OU_POINTS + CENTERED_POINTS)
    rows = _assemble_rows(grid, profile, centered_regions(points), 'c', wl)
    inner = slice(1, grid.n)
    a = np.eye(grid.n - 1) - rows.blocks['c'][:, inner]
    b = rows.constant + rows.blocks['o'][:, inner] @ e_o[inner] + rows.blocks['u'][:, inner] @ e_u[inner]
    x, residual = _solve_dense(a, b, 'Centered')
    return _with_ends(x, wl), residual


# ===== Decision point refinement =====

def refine_points(
    grid: Grid,
    wl: WinLossParams,
    e_o: np.ndarray,
    e_u: np.ndarray,
    e_c: Optional[np.ndarray] = None,
    previous: Optional[DecisionPoints] = None,
) -> Tuple[DecisionPoints, Tuple[str, ...]]:
    """
    Move decision points to where the interpolated equities meet their conditions.

    Without ``e_c`` only the six owned/unavailable points are refined and the
    centered ones are carried over from ``previous``.
    """
    x = grid.points
    clamped = []

    def solve_for(name, g, rising, lo=None, hi=None):
        root, found = first_crossing(x, g, rising, lo, hi)
        if not found:
            clamped.append(name)
        return root

    values = previous.as_dict() if previous is not None else {}
    if e_c is None or previous is None:
        values['tg_u'] = 0.0 if wl.l == 1.0 else solve_for('tg_u', e_u + 1.0, True)
        values['tp'] = solve_for('tp', e_o + 0.5, True)
        values['rd_u'] = solve_for('rd_u', e_u - 2.0 * e_o, False)
        values['rd_o'] = solve_for('rd_o', e_o - 2.0 * e_u, False)
        values['cp'] = solve_for('cp', e_u - 0.5, True)
        values['tg_o'] = 1.0 if wl.w == 1.0 else solve_for('tg_o', e_o - 1.0, True, lo=values['cp'])
    if e_c is not None:
        values['tgc_u'] = 0.0 if wl.l == 1.0 else solve_for('tgc_u', e_c + 1.0, True, hi=values['tp'])
        values['id_u'] = solve_for('id_u', e_c - 2.0 * e_o, False)
        values['id_o'] = solve_for('id_o', e_c - 2.0 * e_u, False)
        values['tgc_o'] = 1.0 if wl.w == 1.0 else solve_for('tgc_o', e_c - 1.0, True, lo=values['cp'])
    for name in CENTERED_POINTS:
        values.setdefault(name, values['cp'] if name.endswith('_o') else values['tp'])
    return DecisionPoints(**values, clamped=tuple(clamped)), tuple(clamped)


# ===== Driver =====

def at_volatility_floor(profile: DistributionProfile, grid: Grid) -> bool:
    """True when every node sees the smallest jump law the kernels allow."""
    return bool(np.all(profile.alphas(grid.interior) <= float(cube_setting('MIN_JUMP_VOLATILITY'))))


def initial_points(wl: WinLossParams, profile: DistributionProfile, grid: Grid) -> DecisionPoints:
    if at_volatility_floor(profile, grid):
        return live_decision_points(wl)
    alpha = profile.representative_alpha(grid)
    try:
        return decision_points_linear(wl, VolatilityPair.constant(alpha))
    except VolatilityTooLargeError:
        logger.warning(f"Linear guess unavailable at alpha={alpha:.4f}, starting from live-cube points")
        return live_decision_points(wl)


def _settled(
    refined: DecisionPoints,
    history: List[DecisionPoints],
    names,
    tol: float,
    step: float,
    floor: bool,
) -> bool:
    """
    Stopping rule for the point iteration.

    A change below ``tol`` always stops. A change of at most one grid step
    stops when the process is at the volatility floor, or when the points are
    flipping between two grid-adjacent positions.
    """
    change = refined.max_change(history[-1], names)
    if change < tol:
        return True
    if change > step + tol:
        return False
    if floor:
        return True
    return len(history) >= 2 and refined.max_change(history[-2], names) < tol


def solve(
    wl: WinLossParams,
    profile: DistributionProfile,
    n: Optional[int] = None,
    initial: Optional[DecisionPoints] = None,
    max_iterations: Optional[int] = None,
    tol: Optional[float] = None,
) -> EquitySolution:
    grid = Grid.uniform(int(cube_setting('DEFAULT_GRID_SIZE')) if n is None else n)
    max_iterations = int(cube_setting('MAX_ITERATIONS') if max_iterations is None else max_iterations)
    tol = float(cube_setting('CONVERGENCE_TOL') if tol is None else tol)
    if max_iterations < 1 or tol < 0.0:
        raise InvalidParameterError(f"Need max_iterations >= 1 and tol >= 0, got {max_iterations} and {tol}")
    points = initial_points(wl, profile, grid) if initial is None else initial
    floor = at_volatility_floor(profile, grid)
    step = float(np.max(grid.spacing))

    history = [points]
    iterations_ou = 0
    for iterations_ou in range(1, max_iterations + 1):
        e_o, e_u, residual_ou = assemble_and_solve_ou(wl, profile, grid, points)
        refined, clamped = refine_points(grid, wl, e_o, e_u, previous=points)
        logger.debug(f"O/U iteration {iterations_ou}: max point change {refined.max_change(points, OU_POINTS):.3e}")
        done = _settled(refined, history, OU_POINTS, tol, step, floor)
        points = refined
        history.append(points)
        if done:
            break
    else:
        logger.error(f"O/U iteration did not converge after {max_iterations} steps")
        raise NonConvergenceError(f"Owned/unavailable points did not converge in {max_iterations} iterations", points)

    history = [points]
    iterations_c = 0
    for iterations_c in range(1, max_iterations + 1):
        e_c, residual_c = assemble_and_solve_c(wl, profile, grid, points, e_o, e_u)
        refined, clamped_c = refine_points(grid, wl, e_o, e_u, e_c, previous=points)
        logger.debug(
            f"Centered iteration {iterations_c}: max point change {refined.max_change(points, CENTERED_POINTS):.3e}"
        )
        done = _settled(refined, history, CENTERED_POINTS, tol, step, floor)
        points = refined
        history.append(points)
        if done:
            break
    else:
        logger.error(f"Centered iteration did not converge after {max_iterations} steps")
        raise NonConvergenceError(f"Centered points did not converge in {max_iterations} iterations", points)

    diagnostics = tuple(dict.fromkeys(clamped + clamped_c))
    if diagnostics:
        logger.warning(f"Exact solve clamped points without a crossing: {', '.join(diagnostics)}")
    logger.info(
        f"Exact solve W={wl.w} L={wl.l} profile={profile.label} N={grid.n}: "
        f"{iterations_ou} O/U + {iterations_c} centered iterations"
    )
    return EquitySolution(
        grid=grid,
        e_o=e_o,
        e_u=e_u,
        e_c=e_c,
        points=DecisionPoints(**points.as_dict(), clamped=diagnostics),
        iterations_ou=iterations_ou,
        iterations_c=iterations_c,
        residual=max(residual_ou, residual_c),
        diagnostics=diagnostics,
    )


def compare_to_exact(curve: Callable[[np.ndarray], np.ndarray], solution: EquitySolution, kind: CubeKind) -> float:
    """Largest absolute deviation of an approximate curve from the exact one over the grid."""
    approx = np.asarray(curve(solution.grid.points), dtype=float)
    return float(np.max(np.abs(approx - solution.array(kind))))
