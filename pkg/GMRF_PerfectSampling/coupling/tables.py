"""
Tables module
=============

Dense monotone tables for the common-component CDFs: linear interpolation for
the forward map and a generalized inverse computed by searching the table.
"""
from dataclasses import dataclass

import numpy as np

from GMRF_PerfectSampling.analytics.normal import ArrayLike


@dataclass(frozen=True, eq=False)
class MonotoneTable:
    """
    Piecewise linear nondecreasing function given by its knots.

    Attributes:
        knots (np.ndarray): Strictly increasing abscissas.
        values (np.ndarray): Nondecreasing ordinates.
    """

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise ValueError(
                "`knots` and `values` must be 1D arrays of one common length >= 2, "
                f"got shapes {knots.shape} and {values.shape}."
            )
        if np.any(np.diff(knots) <= 0):
            raise ValueError("`knots` must be strictly increasing.")
        if np.any(np.diff(values) < 0):
            raise ValueError("`values` must be nondecreasing.")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    @property
    def total(self) -> float:
        """Value at the last knot."""
        return float(self.values[-1])

    def __call__(self, s: ArrayLike) -> ArrayLike:
        """Linear interpolation, constant outside the knot range."""
        return np.interp(s, self.knots, self.values)

    def inverse(self, u: ArrayLike) -> ArrayLike:
        """
        inf{s : table(s) >= u}, clamped to the knot range.

        Args:
            u (ArrayLike): Level(s) in [values[0], values[-1]].

        Returns:
            ArrayLike: The abscissa(s); a float for scalar input.
        """
        levels = np.asarray(u, dtype=float)
        upper = np.searchsorted(self.values, levels, side="left")
        upper = np.clip(upper, 1, self.knots.size - 1)
        lower = upper - 1
        rise = self.values[upper] - self.values[lower]
        fraction = np.where(
            rise > 0, (levels - self.values[lower]) / np.where(rise > 0, rise, 1.0), 0.0
        )
        fraction = np.clip(fraction, 0.0, 1.0)
        result = self.knots[lower] + fraction * (self.knots[upper] - self.knots[lower])
        result = np.where(levels <= self.values[0], self.knots[0], result)
        return float(result) if np.ndim(u) == 0 else result
