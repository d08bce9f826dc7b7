# core/janowski.py - Cube-life indexes implied by the jump model

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence

from .exceptions import InvalidParameterError
from .params import WinLossParams
from .utils import display_round

logger = logging.getLogger(__name__)

DEFAULT_TABLE_VALUES = (1.0, 1.25, 1.5, 1.75, 2.0)


@dataclass(frozen=True)
class ImpliedIndexes:
    """x1 governs the take point, x2 the cash point."""

    x1: float
    x2: float

    def display(self) -> str:
        return f"{display_round(self.x1)}/{display_round(self.x2)}"


def implied_indexes(wl: WinLossParams, alpha: float) -> ImpliedIndexes:
    w, l = wl.w, wl.l
    if w <= 0.5 or l <= 0.5:
        raise InvalidParameterError(f"Implied indexes need W, L > 1/2, got W={w}, L={l}")
    if alpha < 0.0:
        raise InvalidParameterError(f"Volatility must be nonnegative, got {alpha}")
    s2 = wl.span ** 2
    x1 = 1.0 - alpha * s2 / (2.0 * (l + 1.0) * (w - 0.5))
    x2 = 1.0 - alpha * s2 / (2.0 * (w + 1.0) * (l - 0.5))
    return ImpliedIndexes(x1, x2)


@dataclass(frozen=True)
class ImpliedIndexTable:
    alpha: float
    w_values: tuple
    l_values: tuple
    rows: tuple  # rows[i][j] is the pair for l_values[i], w_values[j]

    def display_rows(self) -> List[List[str]]:
        return [[cell.display() for cell in row] for row in self.rows]


def implied_index_table(w_values: Sequence[float], l_values: Sequence[float], alpha: float) -> ImpliedIndexTable:
    """Rows are indexed by L and columns by W, raw values retained."""
    if not w_values or not l_values:
        raise InvalidParameterError("Index table needs at least one W and one L value")
    rows = tuple(
        tuple(implied_indexes(WinLossParams(w, l), alpha) for w in w_values)
        for l in l_values
    )
    return ImpliedIndexTable(alpha=alpha, w_values=tuple(w_values), l_values=tuple(l_values), rows=rows)


def implied_index_sweep(values: Sequence[float], alphas: Sequence[float]) -> List[List[float]]:
    """Symmetric-game index (x1 = x2) for each alpha and each W = L."""
    return [[implied_indexes(WinLossParams(v, v), a).x1 for v in values] for a in alphas]
