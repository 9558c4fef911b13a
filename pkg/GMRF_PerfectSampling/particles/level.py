"""
Level module
============

Multi-level particle system read forward on a torus, and its dual read
backward. Spins live in N and +inf; the dual adds -inf. A mark with label u
reaches K(u) = inf{k : u <= q_k}: forward, a site whose neighbour maximum is m
moves to max(m - 1, K(u)), and +inf neighbours keep it at +inf.

The dual is given twice: by its transition rules, and by the distance/wetness
description over the cone of the origin's last mark.
"""
import math
from typing import Dict, Mapping, Union

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.marks.cone import ConeDag
from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.model.schedule import LevelSchedule
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.particles.trajectory import DualTrajectory, LevelTrajectory

Spin = Union[int, float]
INF = math.inf


def _check_spin(value: Spin) -> Spin:
    if value == INF:
        return INF
    if value < 0 or int(value) != value:
        raise ValueError(f"Spins are nonnegative integers or +inf, got {value!r}.")
    return int(value)


def level_update(neighbor_max: Spin, u: float, schedule: LevelSchedule) -> Spin:
    """
    New spin given the neighbour maximum m and the label u.

    Args:
        neighbor_max (Spin): m, in N or +inf.
        u (float): Uniform label.
        schedule (LevelSchedule): Provides q_k.

    Returns:
        Spin: +inf if m = +inf, K(u) if m = 0, max(m - 1, K(u)) otherwise.
    """
    if neighbor_max == INF:
        return INF
    reach = schedule.level_index(u)
    return max(int(neighbor_max) - 1, reach)


def level_rates(schedule: LevelSchedule, neighbor_max: Spin, k_max: int) -> Dict[Spin, float]:
    """
    Rates at which an update sets the spin to each value, for a frozen
    neighbour maximum.

    Args:
        schedule (LevelSchedule): Provides q_k.
        neighbor_max (Spin): m, in N or +inf.
        k_max (int): Largest target value listed.

    Returns:
        Dict[Spin, float]: Target value -> rate. Values below max(m - 1, 0)
            are unreachable and omitted.
    """
    if neighbor_max == INF:
        return {INF: 1.0}
    m = int(neighbor_max)
    probs = schedule.level_probs
    lowest = max(m - 1, 0)
    rates = {lowest: probs[lowest]}
    for k in range(lowest + 1, k_max + 1):
        rates[k] = probs[k] - probs[k - 1]
    return rates


def forward_level(
    window: TorusWindow,
    tau: float,
    kappa: Union[Spin, Mapping[Site, Spin]],
    schedule: LevelSchedule,
    store: MarkStore,
) -> LevelTrajectory:
    """
    Level system from kappa at tau, driven by the marks of (tau, 0].

    Args:
        window (TorusWindow): The torus.
        tau (float): Start time, negative.
        kappa (Spin | Mapping[Site, Spin]): Initial spins, or one spin for
            every site.
        schedule (LevelSchedule): Provides q_k.
        store (MarkStore): Mark source.

    Returns:
        LevelTrajectory: The event record.
    """
    if not tau < 0:
        raise ValueError(f"`tau` must be negative, got {tau}.")
    state = initial_spins(window, kappa)
    trajectory = LevelTrajectory(window, tau, dict(state))
    for mark in window.marks_in_window(store, tau):
        neighbor_max = max(state[n] for n in window.neighbors(mark.site))
        new = level_update(neighbor_max, mark.u, schedule)
        state[mark.site] = new
        trajectory.record(mark.key, mark.time, mark.site, new)
    return trajectory


def initial_spins(
    window: TorusWindow, kappa: Union[Spin, Mapping[Site, Spin]]
) -> Dict[Site, Spin]:
    """Full configuration from a constant or a mapping (missing sites at 0)."""
    if isinstance(kappa, Mapping):
        state = {site: 0 for site in window.sites}
        for site, value in kappa.items():
            state[window.wrap(site)] = _check_spin(value)
        return state
    value = _check_spin(kappa)
    return {site: value for site in window.sites}


def _dual_start(window: TorusWindow) -> Dict[Site, Spin]:
    state: Dict[Site, Spin] = {site: INF for site in window.sites}
    state[window.origin] = 0
    return state


def backward_dual_level(
    window: TorusWindow, tau: float, schedule: LevelSchedule, store: MarkStore
) -> DualTrajectory:
    """
    Level dual from (0 at the origin, +inf elsewhere) at time 0 down to tau,
    by its transition rules. A mark at i with spin s != +inf sends i to +inf and
    each neighbour j to min(sigma(j), s + 1) when s is finite and u <= q_s,
    to -inf otherwise.

    Args:
        window (TorusWindow): The torus.
        tau (float): Lowest time, negative.
        schedule (LevelSchedule): Provides q_s.
        store (MarkStore): Mark source.

    Returns:
        DualTrajectory: Full configurations after each effective mark.
    """
    if not tau < 0:
        raise ValueError(f"`tau` must be negative, got {tau}.")
    state = _dual_start(window)
    trajectory = DualTrajectory(window, tau, dict(state))
    for mark in reversed(window.marks_in_window(store, tau)):
        trajectory.consumed.append(mark.key)
        spin = state[mark.site]
        if spin == INF:
            continue
        if spin != -INF and mark.u <= schedule.level_prob(int(spin)):
            for neighbor in window.neighbors(mark.site):
                state[neighbor] = min(state[neighbor], spin + 1)
        else:
            for neighbor in window.neighbors(mark.site):
                state[neighbor] = -INF
        state[mark.site] = INF
        trajectory.record(mark.time, dict(state))
    return trajectory


def dual_level_from_cone(
    window: TorusWindow, tau: float, schedule: LevelSchedule, store: MarkStore
) -> Dict[Site, Spin]:
    """
    sigma-hat at tau from the cone of the origin's last mark. The cone is
    explored through marks above tau; a mark p wets the root when
    K(p) > dist(p), and a path carrying such a mark sends -inf. Each site j
    receives the minimum, over explored marks q whose arrow towards j lands
    at or below tau, of -inf if a wetting mark lies on a path to q and
    dist(q) + 1 otherwise.

    Args:
        window (TorusWindow): The torus.
        tau (float): Lowest time, negative.
        schedule (LevelSchedule): Provides K.
        store (MarkStore): Mark source.

    Returns:
        Dict[Site, Spin]: The configuration at tau.
    """
    if not tau < 0:
        raise ValueError(f"`tau` must be negative, got {tau}.")
    state = {site: INF for site in window.sites}
    root = store.last_mark_before(window.origin, 0.0)
    if root.time <= tau:
        state[window.origin] = 0
        return state
    cone = ConeDag(store, root, window, budget=10**9).deepen(
        expand=lambda node: node.mark.time > tau
    )
    wet_path: Dict = {}
    # parents precede children in decreasing time
    for node in reversed(cone.nodes_in_time_order()):
        wets = schedule.level_index(node.mark.u) > node.dist
        wet_path[node.mark.key] = wets or wet_path.get(node.mark.key, False)
        if node.expanded:
            for child in node.children:
                wet_path[child] = wet_path.get(child, False) or wet_path[node.mark.key]
    for node in cone.nodes.values():
        if not node.expanded:
            continue
        sent = -INF if wet_path[node.mark.key] else node.dist + 1
        for child in node.children:
            child_mark = cone[child].mark
            if child_mark.time <= tau:
                state[child_mark.site] = min(state[child_mark.site], sent)
    return state


def estimate_level_rates(
    store: MarkStore,
    site,
    schedule: LevelSchedule,
    neighbor_max: Spin,
    k_max: int = 3,
    count: int = 100_000,
) -> pd.DataFrame:
    """
    Monte Carlo rates of each target spin under a frozen neighbour maximum,
    over the first `count` marks of one stream.

    Args:
        store (MarkStore): Mark source.
        site: Site whose stream drives the clock.
        schedule (LevelSchedule): Provides q_k.
        neighbor_max (Spin): Frozen m.
        k_max (int, optional): Largest target value compared. Defaults to 3.
        count (int, optional): Number of marks. Defaults to 10^5.

    Returns:
        pd.DataFrame: One row per target value: empirical rate, SE, exact rate,
            agreement within 3 SE.
    """
    times, us = store.stream_arrays(site, count)
    elapsed = -float(times[-1])
    outcomes = [level_update(neighbor_max, u, schedule) for u in us]
    rows = []
    for target, exact in level_rates(schedule, neighbor_max, k_max).items():
        hits = int(np.sum(np.array(outcomes, dtype=float) == target))
        empirical = hits / elapsed
        se = math.sqrt(max(hits, 1)) / elapsed
        rows.append(
            {
                "neighbor_max": neighbor_max,
                "target": target,
                "empirical": empirical,
                "se": se,
                "exact": exact,
                "passes": abs(empirical - exact) <= 3.0 * se,
            }
        )
    return pd.DataFrame(rows)
