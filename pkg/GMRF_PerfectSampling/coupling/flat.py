# pylint: disable=C0103
"""
Flat coupler module
===================

Maximal-coupling update function of the truncated model. A uniform below the
common mass gamma is mapped through the inverse of the common-component CDF R,
independently of the boundary; above gamma, the residual CDF F(. | eta) - R is
inverted at u - gamma. For fixed eta the output is distributed as N(m_eta, 1)
truncated to [-L, L].
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid

from GMRF_PerfectSampling.analytics.coupling_mass import (
    T_POINTS,
    X_POINTS,
    gamma_truncated,
    inf_truncated_density,
)
from GMRF_PerfectSampling.analytics.normal import (
    TruncatedNormal,
    bisect_inverse,
    trunc_quantile,
)
from GMRF_PerfectSampling.coupling.boundary import Eta, as_boundary, check_uniform
from GMRF_PerfectSampling.coupling.tables import MonotoneTable
from GMRF_PerfectSampling.errors import CouplingError
from GMRF_PerfectSampling.model.params import ModelParams

MASS_SLACK = 1e-12


class FlatCoupler:
    """
    Update function of the truncated model built on its greatest common component.

    Attributes:
        params (ModelParams): Truncated model parameters.
        gamma (float): Maximal coupling probability, the total mass of R.
        table (MonotoneTable): The common-component CDF R on [-L, L].
        route_common (bool): When False, the coalesced branch is replaced by the
            eta-dependent inverse CDF. Negative control only.
    """

    def __init__(
        self,
        params: ModelParams,
        t_points: int = T_POINTS,
        x_points: int = X_POINTS,
        route_common: bool = True,
    ) -> None:
        if not params.is_truncated:
            raise ValueError(
                "FlatCoupler needs a truncated model; the unbounded model has gamma = 0 "
                "and uses the StratifiedCoupler."
            )
        self.params = params
        self.route_common = route_common
        L = params.truncation
        knots = np.linspace(-L, L, t_points if t_points % 2 else t_points + 1)
        density = inf_truncated_density(knots, params.epsilon, L, x_points)
        cumulative = cumulative_trapezoid(density, knots, initial=0.0)
        self.gamma = gamma_truncated(params.epsilon, L, t_points, x_points)
        self.table = MonotoneTable(knots, cumulative * (self.gamma / cumulative[-1]))

    @property
    def halfwidth(self) -> float:
        """L."""
        return self.params.truncation

    def _law(self, eta: Eta) -> TruncatedNormal:
        boundary = as_boundary(eta)
        if not boundary.inside(self.halfwidth + MASS_SLACK):
            raise CouplingError(
                f"Boundary values {boundary.values} leave the state space "
                f"[-{self.halfwidth}, {self.halfwidth}]."
            )
        return TruncatedNormal(boundary.mean_field(self.params.epsilon), self.halfwidth)

    def common_value(self, u: float) -> float:
        """
        R^{-1}(u), the boundary-independent output for u <= gamma.

        Raises:
            CouplingError: If u lies outside [0, gamma].
        """
        if not 0.0 <= u <= self.gamma:
            raise CouplingError(
                f"common_value needs u in [0, gamma={self.gamma}], got u={u}."
            )
        return self.table.inverse(float(u))

    def residual_cdf(self, eta: Eta, s):
        """F(s | eta) - R(s)."""
        law = self._law(eta)
        return law.cdf(s) - self.table(s)

    def update(self, eta: Eta, u: float) -> float:
        """
        phi(eta, u).

        Args:
            eta (Eta): Neighbour values, in [-L, L].
            u (float): Uniform in [0, 1].

        Returns:
            float: The new value in [-L, L].
        """
        u = check_uniform(u)
        law = self._law(eta)
        if not self.route_common:
            return trunc_quantile(law, u)
        if u <= self.gamma:
            return self.common_value(u)
        return float(
            bisect_inverse(
                lambda s: law.cdf(s) - self.table(s),
                u - self.gamma,
                -self.halfwidth,
                self.halfwidth,
            )
        )

    def update_batch(self, eta: Eta, us: np.ndarray) -> np.ndarray:
        """Vectorized `update` over uniforms for one fixed boundary."""
        us = np.asarray(us, dtype=float)
        if np.any(us < 0.0) or np.any(us > 1.0):
            raise CouplingError("Uniform inputs must lie in [0, 1].")
        law = self._law(eta)
        if not self.route_common:
            return np.asarray(trunc_quantile(law, us), dtype=float)
        common = us <= self.gamma
        result = np.empty_like(us)
        result[common] = self.table.inverse(us[common])
        result[~common] = bisect_inverse(
            lambda s: law.cdf(s) - self.table(s),
            us[~common] - self.gamma,
            -self.halfwidth,
            self.halfwidth,
        )
        return result


def flat_update(coupler: FlatCoupler, eta: Eta, u: float) -> float:
    """phi(eta, u) of the flat coupler."""
    return coupler.update(eta, u)
