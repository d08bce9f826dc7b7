# core/distributions.py - Symmetric jump laws and their F/G kernels

"""
Jump distributions for the probability-of-win process.

Every equity integral consumes three kernels of a zero-mean symmetric law:
the density f, the CDF F and the lower partial moment G(J) = integral of x f(x)
from -inf to J. Kernels are vectorised and accept a scale array so the exact
solver can evaluate one law per grid row in a single call.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import ndtr

from .exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class JumpKind(str, enum.Enum):
    GAUSSIAN = 'gaussian'
    DOUBLE_EXPONENTIAL = 'double_exponential'

    @classmethod
    def parse(cls, value) -> 'JumpKind':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace('-', '_'))
        except ValueError:
            raise InvalidParameterError(f"Unknown jump distribution: {value!r}")


# ===== Kernels =====

def pdf(kind: JumpKind, scale: ArrayLike, j: ArrayLike) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    scale = np.asarray(scale, dtype=float)
    if kind is JumpKind.GAUSSIAN:
        return np.exp(-0.5 * (j / scale) ** 2) / (scale * _SQRT_2PI)
    return np.exp(-np.abs(j) / scale) / (2.0 * scale)


def cdf(kind: JumpKind, scale: ArrayLike, j: ArrayLike) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    scale = np.asarray(scale, dtype=float)
    if kind is JumpKind.GAUSSIAN:
        return ndtr(j / scale)
    tail = 0.5 * np.exp(-np.abs(j) / scale)
    return np.where(j > 0.0, 1.0 - tail, tail)


def partial_moment(kind: JumpKind, scale: ArrayLike, j: ArrayLike) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    scale = np.asarray(scale, dtype=float)
    if kind is JumpKind.GAUSSIAN:
        return -(scale ** 2) * pdf(kind, scale, j)
    a = np.abs(j)
    with np.errstate(invalid='ignore'):
        g = -0.5 * (scale + a) * np.exp(-a / scale)
    return np.where(np.isfinite(a), g, 0.0)


def jump_volatility(kind: JumpKind, scale: ArrayLike) -> ArrayLike:
    """Expected absolute jump, equal to -2 G(0)."""
    if kind is JumpKind.GAUSSIAN:
        return scale * math.sqrt(2.0 / math.pi)
    return scale


def standard_deviation(kind: JumpKind, scale: ArrayLike) -> ArrayLike:
    if kind is JumpKind.GAUSSIAN:
        return scale
    return math.sqrt(2.0) * scale


def scale_for_volatility(kind: JumpKind, alpha: ArrayLike) -> ArrayLike:
    if kind is JumpKind.GAUSSIAN:
        return alpha * math.sqrt(math.pi / 2.0)
    return alpha


# ===== Value object =====

@dataclass(frozen=True)
class JumpDistribution:
    """Zero-mean symmetric jump law; scale is sigma (Gaussian) or 1/lambda (double-exponential)."""

    kind: JumpKind
    scale: float

    def __post_init__(self):
        object.__setattr__(self, 'kind', JumpKind.parse(self.kind))
        if not (self.scale > 0.0) or not math.isfinite(self.scale):
            raise InvalidParameterError(f"Jump scale must be positive, got {self.scale}")

    @classmethod
    def from_volatility(cls, kind, alpha: float) -> 'JumpDistribution':
        kind = JumpKind.parse(kind)
        if not (alpha > 0.0):
            raise InvalidParameterError(f"Jump volatility must be positive, got {alpha}")
        return cls(kind, float(scale_for_volatility(kind, alpha)))

    def pdf(self, j: ArrayLike) -> np.ndarray:
        return pdf(self.kind, self.scale, j)

    def cdf(self, j: ArrayLike) -> np.ndarray:
        return cdf(self.kind, self.scale, j)

    def partial_moment(self, j: ArrayLike) -> np.ndarray:
        return partial_moment(self.kind, self.scale, j)

    @property
    def jump_volatility(self) -> float:
        return float(jump_volatility(self.kind, self.scale))

    @property
    def standard_deviation(self) -> float:
        return float(standard_deviation(self.kind, self.scale))

    @property
    def excess_kurtosis(self) -> float:
        return 0.0 if self.kind is JumpKind.GAUSSIAN else 3.0

    def scaled_to(self, alpha: float) -> 'JumpDistribution':
        """Same family with a different jump volatility."""
        return JumpDistribution.from_volatility(self.kind, alpha)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind is JumpKind.GAUSSIAN:
            return rng.normal(0.0, self.scale, size)
        return rng.laplace(0.0, self.scale, size)


def distribution_for(alpha: float, kind=None) -> JumpDistribution:
    """
    Build a jump law for a volatility that may be zero.

    Zero is replaced by the configured floor so callers needing a proper
    density (nonlinear and exact solvers) still get one.
    """
    from .utils import cube_setting

    kind = JumpKind.parse(kind or cube_setting('DEFAULT_JUMP_KIND'))
    floor = float(cube_setting('MIN_JUMP_VOLATILITY'))
    if alpha < 0.0:
        raise InvalidParameterError(f"Jump volatility must be nonnegative, got {alpha}")
    if alpha < floor:
        logger.debug(f"Jump volatility {alpha} below floor, using {floor}")
        alpha = floor
    return JumpDistribution.from_volatility(kind, alpha)
