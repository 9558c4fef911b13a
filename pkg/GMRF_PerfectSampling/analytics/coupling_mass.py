"""
Coupling mass module
====================

Maximal coupling probabilities of the conditional laws of the model: the
truncated-model quantity gamma (integral of the infimum of the normalized
truncated densities), its unbounded counterpart, the restricted quantity
gamma-tilde of the stratified scheme, and the Lipschitz bound on 1 - gamma.
"""
import math

import numpy as np
from scipy.integrate import simpson

from GMRF_PerfectSampling.analytics.normal import (
    interval_mass,
    std_normal_cdf,
    std_normal_pdf,
)

T_POINTS = 4001
X_POINTS = 401


def _odd(points: int) -> int:
    """Rounds a grid size up to an odd count so the grid contains its midpoint."""
    return points if points % 2 == 1 else points + 1


def inf_truncated_density(
    t: np.ndarray, epsilon: float, L: float, x_points: int = X_POINTS
) -> np.ndarray:
    """
    Pointwise infimum over |x| <= L of the truncated density of N(epsilon x, 1).

    The scan runs over `x_points` equispaced boundary values, endpoints
    included.

    Args:
        t (np.ndarray): Evaluation points in [-L, L].
        epsilon (float): Interaction strength.
        L (float): Truncation half-width.
        x_points (int, optional): Size of the x grid. Defaults to 401.

    Returns:
        np.ndarray: The infimum density at every t.
    """
    means = epsilon * np.linspace(-L, L, _odd(x_points))
    masses = interval_mass(-L, L, means)
    densities = std_normal_pdf(t[:, None] - means[None, :]) / masses[None, :]
    return densities.min(axis=1)


def gamma_truncated(
    epsilon: float, L: float, t_points: int = T_POINTS, x_points: int = X_POINTS
) -> float:
    """
    Maximal coupling probability of the truncated model on [-L, L].

    Composite Simpson quadrature over t of the infimum density. The t grid
    has an odd number of points, so the kink of the infimum at t = 0 falls on
    a panel boundary.

    Args:
        epsilon (float): Interaction strength, |epsilon| < 1.
        L (float): Truncation half-width.
        t_points (int, optional): Quadrature points. Defaults to 4001.
        x_points (int, optional): Boundary grid size. Defaults to 401.

    Returns:
        float: gamma in [0, 1]; exactly 1 when epsilon = 0.

    Raises:
        ValueError: If |epsilon| >= 1 or L <= 0.
    """
    if not abs(epsilon) < 1:
        raise ValueError(f"`epsilon` must lie in (-1, 1), got {epsilon}.")
    if not L > 0:
        raise ValueError(f"`L` must be positive, got {L}.")
    if epsilon == 0:
        return 1.0
    t = np.linspace(-L, L, _odd(t_points))
    value = simpson(inf_truncated_density(t, epsilon, L, x_points), x=t)
    return float(min(max(value, 0.0), 1.0))


def eta_truncated(epsilon: float, L: float) -> float:
    """1 - gamma of the truncated model."""
    return 1.0 - gamma_truncated(epsilon, L)


def gamma_unbounded(epsilon: float) -> float:
    """
    Maximal coupling probability of the unbounded model.

    The means epsilon x range over the whole real line once epsilon != 0, so the
    infimum of the densities vanishes pointwise.
    """
    if not abs(epsilon) < 1:
        raise ValueError(f"`epsilon` must lie in (-1, 1), got {epsilon}.")
    return 1.0 if epsilon == 0 else 0.0


def inf_endpoint_density(t: np.ndarray, epsilon: float, L1: float) -> np.ndarray:
    """
    Infimum over |x| <= L1 of the unnormalized density of N(epsilon x, 1) at t.

    The density at fixed t is smallest at the admissible mean farthest from t,
    that is at one of the two endpoints x = +-L1.
    """
    shift = abs(epsilon) * L1
    return np.minimum(std_normal_pdf(t - shift), std_normal_pdf(t + shift))


def gamma_tilde(epsilon: float, L1: float, t_points: int = T_POINTS) -> float:
    """
    Common mass of the conditional laws with boundary values in [-L1, L1],
    restricted to [-L1, L1].

    Args:
        epsilon (float): Interaction strength.
        L1 (float): First level of the schedule.
        t_points (int, optional): Quadrature points. Defaults to 4001.

    Returns:
        float: gamma-tilde in [0, 1].
    """
    if not abs(epsilon) < 1:
        raise ValueError(f"`epsilon` must lie in (-1, 1), got {epsilon}.")
    if not L1 > 0:
        raise ValueError(f"`L1` must be positive, got {L1}.")
    t = np.linspace(-L1, L1, _odd(t_points))
    return float(simpson(inf_endpoint_density(t, epsilon, L1), x=t))


def gamma_tilde_exact(epsilon: float, L1: float) -> float:
    """Closed form 2 (Phi(L1 + c) - Phi(c)) of gamma-tilde, c = |epsilon| L1."""
    shift = abs(epsilon) * L1
    return float(2.0 * (std_normal_cdf(L1 + shift) - std_normal_cdf(shift)))


def lipschitz_eta_bound(epsilon: float, L: float) -> float:
    """
    Upper bound 6 max(L, 1)^3 c |epsilon| / lambda^2 on 1 - gamma of the
    truncated model.

    Here c = e^{-1/2} / sqrt(2 pi) bounds the derivative of the standard normal
    density and lambda = P(N(epsilon L, 1) in [-L, L]).

    Args:
        epsilon (float): Interaction strength, |epsilon| <= 1.
        L (float): Truncation half-width.

    Returns:
        float: The bound.
    """
    if not abs(epsilon) <= 1:
        raise ValueError(f"`epsilon` must lie in [-1, 1], got {epsilon}.")
    if not L > 0:
        raise ValueError(f"`L` must be positive, got {L}.")
    slope = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    mass = float(interval_mass(-L, L, epsilon * L))
    return 6.0 * max(L, 1.0) ** 3 * slope * abs(epsilon) / mass**2
