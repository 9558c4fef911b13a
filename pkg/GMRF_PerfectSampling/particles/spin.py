"""
Spin module
===========

Binary spin system read forward on a torus and its coalescing dual read
backward. A spin at 0 marks a space-time point where the field dynamics has
coalesced whatever the initial configuration.
"""
import math
from typing import Dict

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.particles.trajectory import BinarySpinTrajectory, DualTrajectory


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"`gamma` must lie in [0, 1], got {gamma}.")


def spin_update(u: float, gamma: float, any_neighbor_one: bool) -> int:
    """New spin 1{u > gamma} 1{some neighbour has spin 1}."""
    return int(u > gamma and any_neighbor_one)


def spin_rate(gamma: float, own: int, any_neighbor_one: bool) -> float:
    """
    Rate at which the spin flips under frozen neighbours.

    Args:
        gamma (float): Coalescence probability.
        own (int): Current spin, 0 or 1.
        any_neighbor_one (bool): Whether a neighbour has spin 1.

    Returns:
        float: gamma + (1 - gamma) 1{no neighbour at 1} for own = 1,
            (1 - gamma) 1{some neighbour at 1} for own = 0.
    """
    _check_gamma(gamma)
    if own not in (0, 1):
        raise ValueError(f"`own` must be 0 or 1, got {own}.")
    if own == 1:
        return gamma + (1.0 - gamma) * (not any_neighbor_one)
    return (1.0 - gamma) * bool(any_neighbor_one)


def forward_spin(
    window: TorusWindow, tau: float, gamma: float, store: MarkStore
) -> BinarySpinTrajectory:
    """
    Binary spin system from all 1 at tau, driven by the marks of (tau, 0].

    Args:
        window (TorusWindow): The torus.
        tau (float): Start time, negative.
        gamma (float): Coalescence probability.
        store (MarkStore): Mark source.

    Returns:
        BinarySpinTrajectory: The event record.
    """
    _check_gamma(gamma)
    if not tau < 0:
        raise ValueError(f"`tau` must be negative, got {tau}.")
    state: Dict[Site, int] = {site: 1 for site in window.sites}
    trajectory = BinarySpinTrajectory(window, tau, dict(state))
    for mark in window.marks_in_window(store, tau):
        new = spin_update(
            mark.u, gamma, any(state[n] == 1 for n in window.neighbors(mark.site))
        )
        state[mark.site] = new
        trajectory.record(mark.key, mark.time, mark.site, new)
    return trajectory


def backward_dual_binary(
    window: TorusWindow, tau: float, gamma: float, store: MarkStore
) -> DualTrajectory:
    """
    Coalescing dual from {0} at time 0 down to tau. A mark at an occupied site
    empties it when u <= gamma and otherwise moves the particle to every
    neighbour.

    Args:
        window (TorusWindow): The torus.
        tau (float): Lowest time, negative.
        gamma (float): Coalescence probability.
        store (MarkStore): Mark source.

    Returns:
        DualTrajectory: Occupied-site sets with their extinction time.
    """
    _check_gamma(gamma)
    if not tau < 0:
        raise ValueError(f"`tau` must be negative, got {tau}.")
    occupied = frozenset([window.origin])
    trajectory = DualTrajectory(window, tau, occupied)
    for mark in reversed(window.marks_in_window(store, tau)):
        trajectory.consumed.append(mark.key)
        if trajectory.extinction_time is not None or mark.site not in occupied:
            continue
        if mark.u <= gamma:
            occupied = occupied - {mark.site}
        else:
            occupied = (occupied - {mark.site}) | frozenset(window.neighbors(mark.site))
        trajectory.record(mark.time, occupied)
        if not occupied:
            trajectory.extinction_time = mark.time
    return trajectory


def estimate_spin_rate(
    store: MarkStore,
    site,
    gamma: float,
    own: int,
    any_neighbor_one: bool,
    count: int = 100_000,
) -> Dict[str, float]:
    """
    Monte Carlo flip rate of one spin under frozen neighbours, over the first
    `count` marks of its stream.

    Args:
        store (MarkStore): Mark source.
        site: Site whose stream drives the clock.
        gamma (float): Coalescence probability.
        own (int): Frozen current spin.
        any_neighbor_one (bool): Frozen neighbour pattern.
        count (int, optional): Number of marks. Defaults to 10^5.

    Returns:
        Dict[str, float]: Empirical rate, its standard error, the exact rate
            and whether they agree within 3 SE.
    """
    times, us = store.stream_arrays(site, count)
    elapsed = -float(times[-1])
    flips = int(
        np.sum(
            np.array([spin_update(u, gamma, any_neighbor_one) for u in us]) != own
        )
    )
    exact = spin_rate(gamma, own, any_neighbor_one)
    empirical = flips / elapsed
    se = math.sqrt(max(flips, 1)) / elapsed
    return {
        "own": own,
        "any_neighbor_one": bool(any_neighbor_one),
        "empirical": empirical,
        "se": se,
        "exact": exact,
        "passes": abs(empirical - exact) <= 3.0 * se,
    }


def spin_rate_table(
    store: MarkStore, gamma: float, count: int = 100_000
) -> pd.DataFrame:
    """Flip-rate estimates for the four frozen patterns, one stream site each."""
    rows = []
    for position, (own, neighbor_one) in enumerate(
        [(0, False), (0, True), (1, False), (1, True)]
    ):
        rows.append(estimate_spin_rate(store, (position,), gamma, own, neighbor_one, count))
    return pd.DataFrame(rows)
