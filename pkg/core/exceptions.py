# core/exceptions.py - Equity model error hierarchy

from typing import Any, Optional


class CubeModelError(Exception):
    """Base class for every failure raised by the equity and simulation code."""


class InvalidParameterError(CubeModelError, ValueError):
    """An input lies outside the domain the model accepts."""


class DegenerateStateError(CubeModelError):
    """The game state is already decided (p_win of 0 or 1)."""


class VolatilityTooLargeError(CubeModelError):
    """A closed-form denominator went nonpositive for the given jump volatility."""

    def __init__(self, message: str, alpha: Optional[float] = None):
        super().__init__(message)
        self.alpha = alpha


class UnsolvedBoundaryError(CubeModelError):
    """Equity was requested before its boundary coefficients were solved."""


class SingularSystemError(CubeModelError):
    """A linear system could not be solved reliably."""

    def __init__(self, message: str, condition: float = float('inf')):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class BracketError(CubeModelError):
    """Bisection bracket does not straddle a sign change."""

    def __init__(self, name: str, lo: float, hi: float, f_lo: float, f_hi: float):
        super().__init__(
            f"No sign change for {name} on [{lo:.6f}, {hi:.6f}]: "
            f"f(lo)={f_lo:.6e}, f(hi)={f_hi:.6e}"
        )
        self.name = name
        self.lo, self.hi = lo, hi
        self.f_lo, self.f_hi = f_lo, f_hi


class NonConvergenceError(CubeModelError):
    """Fixed-point iteration hit its cap; ``last_iterate`` holds the final state."""

    def __init__(self, message: str, last_iterate: Any = None):
        super().__init__(message)
        self.last_iterate = last_iterate


class EmptyFilterError(CubeModelError):
    """An estimator filter left no samples."""

    def __init__(self, message: str, counts: Optional[dict] = None):
        super().__init__(message)
        self.counts = counts or {}


class WeightSumError(CubeModelError, ValueError):
    """Outcome weights do not sum to one."""
