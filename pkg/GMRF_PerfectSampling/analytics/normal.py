"""
Normal module
=============

Standard and truncated normal laws with unit variance: densities, CDFs,
interval masses accurate in both tails, and quantiles computed as generalized
inverses by bisection.
"""
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import ndtr

ArrayLike = Union[float, np.ndarray]

QUANTILE_TOLERANCE = 1e-12
_QUANTILE_RANGE = 40.0
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def bisect_inverse(
    func: Callable[[np.ndarray], np.ndarray],
    target: ArrayLike,
    lower: ArrayLike,
    upper: ArrayLike,
    tolerance: float = QUANTILE_TOLERANCE,
) -> np.ndarray:
    """
    Generalized inverse inf{x in [lower, upper] : func(x) > target} by bisection.

    `func` must be nondecreasing and vectorized. The returned point is the
    right end of the final bracket, so it never undershoots the infimum by more
    than `tolerance`. Where func(upper) <= target, `upper` is returned.

    Args:
        func (Callable[[np.ndarray], np.ndarray]): Nondecreasing function.
        target (ArrayLike): Level(s) to invert.
        lower (ArrayLike): Left end(s) of the search interval.
        upper (ArrayLike): Right end(s) of the search interval.
        tolerance (float, optional): Absolute tolerance on x. Defaults to 1e-12.

    Returns:
        np.ndarray: The inverse, broadcast to the shape of `target`.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lower, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(upper, dtype=float), target.shape).copy()
    width = float(np.max(hi - lo)) if hi.size else 0.0
    if not math.isfinite(width):
        raise ValueError(f"Bisection needs a finite search interval, got width {width}.")
    if width <= tolerance:
        return hi
    iterations = int(math.ceil(math.log2(width / tolerance)))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        above = func(mid) > target
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return hi


def std_normal_pdf(x: ArrayLike) -> ArrayLike:
    """Standard normal density."""
    return np.exp(-0.5 * np.square(x)) / _SQRT_2PI


def std_normal_cdf(x: ArrayLike) -> ArrayLike:
    """Standard normal CDF."""
    return ndtr(x)


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """
    Standard normal quantile, bisection on the CDF to 1e-12.

    Args:
        p (ArrayLike): Probability level(s) in (0, 1).

    Returns:
        ArrayLike: The quantile(s); a float for scalar input.

    Raises:
        ValueError: If a level lies outside the open interval (0, 1).
    """
    levels = np.asarray(p, dtype=float)
    if np.any(levels <= 0.0) or np.any(levels >= 1.0):
        raise ValueError(
            f"Quantile levels must lie in the open interval (0, 1), got {p}."
        )
    result = bisect_inverse(ndtr, levels, -_QUANTILE_RANGE, _QUANTILE_RANGE)
    return float(result) if np.ndim(p) == 0 else result


def interval_mass(lower: ArrayLike, upper: ArrayLike, mean: ArrayLike) -> ArrayLike:
    """
    P(N(mean, 1) in (lower, upper]), zero when upper <= lower.

    The difference is taken on the tail where both CDF values are small, so
    masses far in the upper tail keep their relative accuracy.
    """
    lo = np.asarray(lower, dtype=float) - mean
    hi = np.asarray(upper, dtype=float) - mean
    upper_tail = lo > 0
    mass = np.where(upper_tail, ndtr(-lo) - ndtr(-hi), ndtr(hi) - ndtr(lo))
    return np.where(hi > lo, np.maximum(mass, 0.0), 0.0)


@dataclass(frozen=True)
class TruncatedNormal:
    """
    N(mean, 1) conditioned on [-L, L].

    Attributes:
        mean (float): Mean m of the untruncated law.
        halfwidth (float): Truncation half-width L.
    """

    mean: float
    halfwidth: float

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ValueError(f"`halfwidth` must be positive, got {self.halfwidth}.")
        if not self.mass > np.finfo(float).tiny:
            raise ValueError(
                f"Normalizing mass P(N({self.mean}, 1) in [-{self.halfwidth}, "
                f"{self.halfwidth}]) underflows; the mean lies too far outside the "
                "truncation window."
            )

    @property
    def mass(self) -> float:
        """Z(m, L)."""
        return float(interval_mass(-self.halfwidth, self.halfwidth, self.mean))

    @property
    def expectation(self) -> float:
        """E[X] = m + (phi(-L - m) - phi(L - m)) / Z."""
        spread = std_normal_pdf(-self.halfwidth - self.mean) - std_normal_pdf(
            self.halfwidth - self.mean
        )
        return float(self.mean + spread / self.mass)

    def pdf(self, t: ArrayLike) -> ArrayLike:
        """Density on [-L, L], zero outside."""
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) <= self.halfwidth
        return np.where(inside, std_normal_pdf(t - self.mean) / self.mass, 0.0)

    def cdf(self, s: ArrayLike) -> ArrayLike:
        """CDF, clamped to 0 below -L and 1 above L."""
        clipped = np.clip(np.asarray(s, dtype=float), -self.halfwidth, self.halfwidth)
        return np.minimum(
            interval_mass(-self.halfwidth, clipped, self.mean) / self.mass, 1.0
        )

    def quantile(self, p: ArrayLike) -> ArrayLike:
        """Generalized inverse of the CDF on [-L, L]."""
        levels = np.asarray(p, dtype=float)
        if np.any(levels < 0.0) or np.any(levels > 1.0):
            raise ValueError(f"Probability levels must lie in [0, 1], got {p}.")
        result = bisect_inverse(self.cdf, levels, -self.halfwidth, self.halfwidth)
        return float(result) if np.ndim(p) == 0 else result


def trunc_cdf(tn: TruncatedNormal, s: ArrayLike) -> ArrayLike:
    """CDF of the truncated normal `tn` at `s`."""
    result = tn.cdf(s)
    return float(result) if np.ndim(s) == 0 else result


def trunc_quantile(tn: TruncatedNormal, p: ArrayLike) -> ArrayLike:
    """Generalized inverse of the CDF of `tn` at level `p`."""
    return tn.quantile(p)
