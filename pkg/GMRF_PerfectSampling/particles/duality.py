# pylint: disable=R0913
"""
Duality module
==============

Monte Carlo checks of the duality identities between the forward particle
systems and their backward explorations, and pathwise checks of the coupling
lemmas on shared marks.

Trial k draws the forward process from the store keyed (k, 0) and the dual
from an independent store keyed (k, 1); the pathwise checks run forward and
dual on the same (k, 0) store.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping, Union

from tqdm import tqdm

from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.model.schedule import LevelSchedule
from GMRF_PerfectSampling.particles.level import (
    INF,
    Spin,
    backward_dual_level,
    dual_level_from_cone,
    forward_level,
    initial_spins,
)
from GMRF_PerfectSampling.particles.spin import backward_dual_binary, forward_spin
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.particles.trajectory import DualTrajectory, ForwardTrajectory

logger = logging.getLogger(__name__)


@dataclass
class DualityReport:
    """
    Outcome of a duality check.

    Attributes:
        p_forward (float): Estimated probability of the forward event.
        p_dual (float): Estimated probability of the dual event.
        se (float): Combined standard error of the difference.
        passes (bool): |p_forward - p_dual| <= 3 se.
        trials (int): Number of trials.
        pathwise_violations (int): Violations of the coupling lemma.
        form_mismatches (int): Disagreements of the two dual implementations
            (level check only).
    """

    p_forward: float
    p_dual: float
    se: float
    passes: bool
    trials: int
    pathwise_violations: int = 0
    form_mismatches: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)


def _compare(hits_forward: int, hits_dual: int, trials: int) -> Dict[str, Any]:
    p_forward = hits_forward / trials
    p_dual = hits_dual / trials
    se = math.sqrt(
        (p_forward * (1.0 - p_forward) + p_dual * (1.0 - p_dual)) / trials
    )
    gap = abs(p_forward - p_dual)
    passes = gap == 0.0 if se == 0.0 else gap <= 3.0 * se
    return {"p_forward": p_forward, "p_dual": p_dual, "se": se, "passes": passes}


def _checkpoints(forward: ForwardTrajectory, dual: DualTrajectory):
    return sorted(set([forward.tau, 0.0] + list(forward.times) + list(dual.times)))


def disjointness_violations(spin: ForwardTrajectory, dual: DualTrajectory) -> int:
    """
    Number of checkpoint times t in [tau, 0] where the forward spins at 1 meet
    the dual set, counted only when the forward spin at the origin ends at 0.
    """
    if spin.final[spin.window.origin] != 0:
        return 0
    violations = 0
    for t, state in spin.iter_states(_checkpoints(spin, dual)):
        occupied = dual.state_at(t)
        if any(state[site] == 1 for site in occupied):
            violations += 1
    return violations


def domination_violations(level: ForwardTrajectory, dual: DualTrajectory) -> int:
    """
    Number of checkpoint times t in [tau, 0] where some forward spin exceeds
    the dual spin, counted only when the forward spin at the origin ends at 0.
    """
    if level.final[level.window.origin] != 0:
        return 0
    violations = 0
    for t, state in level.iter_states(_checkpoints(level, dual)):
        sigma = dual.state_at(t)
        if any(state[site] > sigma[site] for site in state):
            violations += 1
    return violations


def attractiveness_violations(
    window: TorusWindow, tau: float, tau_prime: float, gamma: float, store: MarkStore
) -> int:
    """
    Number of (checkpoint, site) pairs with t >= tau where the system started
    at tau_prime <= tau exceeds the system started at tau.
    """
    if tau_prime > tau:
        raise ValueError(f"Expected tau_prime <= tau, got {tau_prime} > {tau}.")
    late = forward_spin(window, tau, gamma, store)
    early = forward_spin(window, tau_prime, gamma, store)
    checkpoints = sorted(set([tau, 0.0] + list(late.times)))
    violations = 0
    for (_, high), (_, low) in zip(
        late.iter_states(checkpoints), early.iter_states(checkpoints)
    ):
        violations += sum(1 for site in window.sites if low[site] > high[site])
    return violations


def duality_check_binary(
    window: TorusWindow,
    tau: float,
    gamma: float,
    trials: int,
    master_seed: int = 0,
    pathwise: bool = True,
) -> DualityReport:
    """
    Compares P(omega_0(0) = 0) and P(sigma-hat_tau is empty) by Monte Carlo.

    Args:
        window (TorusWindow): The torus.
        tau (float): Start time, negative.
        gamma (float): Coalescence probability.
        trials (int): Number of trials.
        master_seed (int, optional): Seed of every store. Defaults to 0.
        pathwise (bool, optional): Also count disjointness violations. Defaults to True.

    Returns:
        DualityReport: Estimates, combined SE, verdict, pathwise violations.
    """
    if trials < 1:
        raise ValueError(f"`trials` must be positive, got {trials}.")
    hits_forward = hits_dual = violations = 0
    for k in tqdm(range(trials), desc="Binary duality", leave=False):
        shared = MarkStore(master_seed, stream_key=(k, 0))
        spin = forward_spin(window, tau, gamma, shared)
        hits_forward += spin.final[window.origin] == 0
        independent = MarkStore(master_seed, stream_key=(k, 1))
        hits_dual += not backward_dual_binary(window, tau, gamma, independent).final
        if pathwise:
            violations += disjointness_violations(
                spin, backward_dual_binary(window, tau, gamma, shared)
            )
    report = DualityReport(
        **_compare(hits_forward, hits_dual, trials),
        trials=trials,
        pathwise_violations=violations,
    )
    logger.debug("Binary duality check: %s", report)
    return report


def kappa_below(kappa: Mapping[Site, Spin], sigma: Mapping[Site, Spin]) -> bool:
    """Whether kappa <= sigma at every site."""
    return all(kappa[site] <= sigma[site] for site in kappa)


def duality_check_level(
    window: TorusWindow,
    tau: float,
    kappa: Union[Spin, Mapping[Site, Spin]],
    schedule: LevelSchedule,
    trials: int,
    master_seed: int = 0,
    pathwise: bool = True,
) -> DualityReport:
    """
    Compares P(omega^kappa_0(0) = 0) and P(kappa <= sigma-hat_tau) by Monte
    Carlo; on the shared stores also counts domination violations and
    disagreements between the rule-based and the cone-based duals.

    Args:
        window (TorusWindow): The torus.
        tau (float): Start time, negative.
        kappa (Spin | Mapping[Site, Spin]): Initial spins, finite.
        schedule (LevelSchedule): Provides q_k.
        trials (int): Number of trials.
        master_seed (int, optional): Seed of every store. Defaults to 0.
        pathwise (bool, optional): Also run the pathwise checks. Defaults to True.

    Returns:
        DualityReport: Estimates, combined SE, verdict, pathwise counts.
    """
    if trials < 1:
        raise ValueError(f"`trials` must be positive, got {trials}.")
    start = initial_spins(window, kappa)
    if any(value == INF for value in start.values()):
        raise ValueError("The level duality check needs a finite initial configuration.")
    hits_forward = hits_dual = violations = mismatches = 0
    for k in tqdm(range(trials), desc="Level duality", leave=False):
        shared = MarkStore(master_seed, stream_key=(k, 0))
        level = forward_level(window, tau, start, schedule, shared)
        hits_forward += level.final[window.origin] == 0
        independent = MarkStore(master_seed, stream_key=(k, 1))
        hits_dual += kappa_below(
            start, backward_dual_level(window, tau, schedule, independent).final
        )
        if pathwise:
            dual = backward_dual_level(window, tau, schedule, shared)
            violations += domination_violations(level, dual)
            mismatches += dual.final != dual_level_from_cone(window, tau, schedule, shared)
    report = DualityReport(
        **_compare(hits_forward, hits_dual, trials),
        trials=trials,
        pathwise_violations=violations,
        form_mismatches=mismatches,
    )
    logger.debug("Level duality check: %s", report)
    return report
