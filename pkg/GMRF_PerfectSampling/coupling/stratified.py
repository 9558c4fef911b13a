# pylint: disable=C0103
"""
Stratified coupler module
=========================

Update function of the unbounded model. The unit interval is cut at the band
masses q_n(eta) = P(N(m_eta, 1) in (-L_n, L_n]); a uniform in band n is mapped
into S_{n+1} minus S_n, so that boundaries inside S_{n+1} keep the output in S_n
whenever u <= q_n. Below gamma-tilde, boundaries inside S_1 share the common
value R-tilde^{-1}(u). For every eta the output is distributed as N(m_eta, 1).
"""
from typing import List

import numpy as np

from GMRF_PerfectSampling.analytics.coupling_mass import T_POINTS
from GMRF_PerfectSampling.analytics.normal import (
    bisect_inverse,
    interval_mass,
    std_normal_cdf,
)
from GMRF_PerfectSampling.coupling.boundary import Eta, as_boundary, check_uniform
from GMRF_PerfectSampling.coupling.tables import MonotoneTable
from GMRF_PerfectSampling.errors import CouplingError, ScheduleError
from GMRF_PerfectSampling.model.schedule import LevelSchedule

MAX_BANDS = 128
NEGATIVE_MASS_SLACK = 1e-12


def common_component_cdf(s: np.ndarray, epsilon: float, L1: float) -> np.ndarray:
    """
    R-tilde(s), the integral over (-L1, s] of min(phi(t - c), phi(t + c)), c = |epsilon| L1.
    """
    c = abs(epsilon) * L1
    s = np.clip(np.asarray(s, dtype=float), -L1, L1)
    left = std_normal_cdf(np.minimum(s, 0.0) - c) - std_normal_cdf(-L1 - c)
    right = std_normal_cdf(np.maximum(s, 0.0) + c) - std_normal_cdf(c)
    return left + right


class StratifiedCoupler:
    """
    Stratified update function driven by a level schedule.

    Attributes:
        schedule (LevelSchedule): The schedule (L_n, q_n); epsilon != 0.
        table (MonotoneTable): R-tilde on [-L1, L1].
        gamma_tilde (float): Total mass of R-tilde.
    """

    def __init__(self, schedule: LevelSchedule, knots: int = T_POINTS) -> None:
        if schedule.epsilon == 0:
            raise ScheduleError(
                "StratifiedCoupler is undefined for epsilon = 0; the field is i.i.d. "
                "standard normal."
            )
        self.schedule = schedule
        grid = np.linspace(-schedule.L1, schedule.L1, knots if knots % 2 else knots + 1)
        self.table = MonotoneTable(
            grid, common_component_cdf(grid, schedule.epsilon, schedule.L1)
        )
        self.gamma_tilde = self.table.total
        self._levels = [0.0] + [schedule.level_bound(n) for n in range(1, MAX_BANDS + 2)]

    @property
    def gamma(self) -> float:
        """Common mass, an alias of gamma_tilde."""
        return self.gamma_tilde

    def level(self, n: int) -> float:
        """L_n, n >= 1."""
        return self._levels[n]

    def mean_field(self, eta: Eta) -> float:
        """m_eta."""
        return as_boundary(eta).mean_field(self.schedule.epsilon)

    def band_mass(self, eta: Eta, n: int) -> float:
        """q_n(eta) = P(N(m_eta, 1) in (-L_n, L_n]), n >= 1."""
        level = self._levels[n]
        return float(interval_mass(-level, level, self.mean_field(eta)))

    def band_boundaries(self, eta: Eta, count: int = 8) -> List[float]:
        """q_0(eta), q_1(eta), ..., q_count(eta)."""
        boundary = as_boundary(eta)
        first = self.gamma_tilde if boundary.inside(self.schedule.L1) else 0.0
        return [first] + [self.band_mass(boundary, n) for n in range(1, count + 1)]

    def common_value(self, u: float) -> float:
        """
        R-tilde^{-1}(u) in [-L1, L1], the shared output for u <= gamma-tilde.

        Raises:
            CouplingError: If u lies outside [0, gamma-tilde].
        """
        if not 0.0 <= u <= self.gamma_tilde:
            raise CouplingError(
                f"common_value needs u in [0, gamma_tilde={self.gamma_tilde}], got u={u}."
            )
        return self.table.inverse(float(u))

    def locate_band(self, eta: Eta, u: float) -> int:
        """
        Band index n with q_n(eta) < u <= q_{n+1}(eta); -1 for the common branch.

        Raises:
            CouplingError: On negative band-0 mass or when no band up to 128 holds u.
        """
        boundary = as_boundary(eta)
        inside = boundary.inside(self.schedule.L1)
        mean = boundary.mean_field(self.schedule.epsilon)
        if inside:
            first_mass = float(interval_mass(-self._levels[1], self._levels[1], mean))
            if first_mass - self.gamma_tilde < -NEGATIVE_MASS_SLACK:
                raise CouplingError(
                    f"Band 0 has negative mass {first_mass - self.gamma_tilde} for "
                    f"boundary {boundary.values}; the schedule violates H1/H2."
                )
            if u <= self.gamma_tilde:
                return -1
        for n in range(1, MAX_BANDS + 1):
            level = self._levels[n]
            if u <= float(interval_mass(-level, level, mean)):
                return n - 1
        raise CouplingError(
            f"No band up to {MAX_BANDS} contains u={u!r} for mean {mean}; u is "
            "numerically indistinguishable from 1."
        )

    def update(self, eta: Eta, u: float) -> float:
        """
        phi(eta, u) of the stratified construction.

        Args:
            eta (Eta): Neighbour values.
            u (float): Uniform in [0, 1].

        Returns:
            float: The new value.
        """
        u = check_uniform(u)
        boundary = as_boundary(eta)
        band = self.locate_band(boundary, u)
        if band < 0:
            return self.common_value(u)
        mean = boundary.mean_field(self.schedule.epsilon)
        inner, outer = self._levels[band], self._levels[band + 1]
        if band == 0:
            inside = boundary.inside(self.schedule.L1)
            offset = self.gamma_tilde if inside else 0.0

            def residual(s):
                mass = interval_mass(-outer, np.minimum(s, outer), mean)
                return mass - self.table(s) if inside else mass

        else:
            offset = float(interval_mass(-inner, inner, mean))

            def residual(s):
                return interval_mass(-outer, np.minimum(s, outer), mean) - interval_mass(
                    -inner, np.minimum(s, inner), mean
                )

        return float(bisect_inverse(residual, u - offset, -outer, outer))

    def zero_update(self, u: float) -> float:
        """phi(0, u)."""
        return self.update((0.0,) * (2 * self.schedule.d), u)


def stratified_update(coupler: StratifiedCoupler, eta: Eta, u: float) -> float:
    """phi(eta, u) of the stratified coupler."""
    return coupler.update(eta, u)


def common_value(coupler, u: float) -> float:
    """The coalesced value of either coupler at u."""
    return coupler.common_value(u)
