# pylint: disable=R0913, R0914
"""
Properties module
=================

Randomized property checks of the update functions: exact coalescence below
the common mass, level containment of the stratified coupler, and KS checks of
the output law for fixed boundaries.
"""
import logging
from typing import Any, Dict, Sequence

import numpy as np

from GMRF_PerfectSampling.analytics.normal import (
    TruncatedNormal,
    std_normal_cdf,
)
from GMRF_PerfectSampling.coupling.flat import FlatCoupler
from GMRF_PerfectSampling.coupling.stratified import StratifiedCoupler
from GMRF_PerfectSampling.validation.statistics import bonferroni, ks_test

logger = logging.getLogger(__name__)


def _law_cdf(coupler, eta: Sequence[float]):
    if isinstance(coupler, FlatCoupler):
        law = TruncatedNormal(coupler.params.mean_field(float(np.sum(eta))), coupler.halfwidth)
        return law.cdf
    mean = coupler.mean_field(eta)
    return lambda s: std_normal_cdf(np.asarray(s, dtype=float) - mean)


def _random_boundary(rng: np.random.Generator, size: int, bound: float) -> np.ndarray:
    return rng.uniform(-bound, bound, size)


def coalescence_violations(coupler, trials: int, seed: int = 0) -> int:
    """
    Number of random (eta, u) with u <= gamma where phi(eta, u) differs from
    the common value; boundaries range over [-L, L] (flat) or S_1 (stratified).
    """
    rng = np.random.default_rng(seed)
    if isinstance(coupler, FlatCoupler):
        size, bound, mass = coupler.params.neighborhood.size, coupler.halfwidth, coupler.gamma
    else:
        size, bound, mass = 2 * coupler.schedule.d, coupler.schedule.L1, coupler.gamma_tilde
    violations = 0
    for _ in range(trials):
        eta = _random_boundary(rng, size, bound)
        u = float(rng.uniform(0.0, mass))
        if coupler.update(eta, u) != coupler.common_value(u):
            violations += 1
    return violations


def containment_violations(
    coupler: StratifiedCoupler, trials: int, max_level: int = 5, seed: int = 0
) -> int:
    """
    Number of random (n, eta, u) with n <= max_level, eta in S_{n+1}^B and
    u <= q_n where phi(eta, u) leaves S_n.
    """
    rng = np.random.default_rng(seed)
    schedule = coupler.schedule
    violations = 0
    for _ in range(trials):
        n = int(rng.integers(1, max_level + 1))
        eta = _random_boundary(rng, 2 * schedule.d, coupler.level(n + 1))
        u = float(rng.uniform(0.0, schedule.level_prob(n)))
        if abs(coupler.update(eta, u)) > coupler.level(n):
            violations += 1
    return violations


def law_checks(
    coupler,
    boundaries: Sequence[Sequence[float]],
    draws: int,
    alpha: float = 0.01,
    seed: int = 0,
) -> Dict[str, Any]:
    """
    KS checks of phi(eta, U) against the conditional law for each fixed eta,
    at the Bonferroni-corrected level.
    """
    rng = np.random.default_rng(seed)
    level = bonferroni(alpha, len(boundaries)) if len(boundaries) > 5 else alpha
    results = []
    for eta in boundaries:
        outputs = [coupler.update(eta, float(u)) for u in rng.random(draws)]
        results.append(ks_test(outputs, _law_cdf(coupler, eta), level).to_dict())
    return {"passes": all(result["passes"] for result in results), "tests": results}


def coupler_property_check(
    coupler, trials: int = 10_000, draws: int = 2000, seed: int = 0
) -> Dict[str, Any]:
    """
    Runs the coalescence, containment (stratified only) and law checks.

    Args:
        coupler (FlatCoupler | StratifiedCoupler): The update function.
        trials (int, optional): Random (eta, u) pairs per check. Defaults to 10^4.
        draws (int, optional): Draws per fixed-boundary KS test. Defaults to 2000.
        seed (int, optional): Seed of the random inputs. Defaults to 0.

    Returns:
        Dict[str, Any]: Violation counts, KS outcomes and the overall verdict.
    """
    report: Dict[str, Any] = {
        "coalescence_violations": coalescence_violations(coupler, trials, seed)
    }
    if isinstance(coupler, FlatCoupler):
        L = coupler.halfwidth
        size = coupler.params.neighborhood.size
        boundaries = [[0.0] * size, [L] * size, [-L] + [L / 2] * (size - 1)]
    else:
        report["containment_violations"] = containment_violations(coupler, trials, seed=seed)
        size = 2 * coupler.schedule.d
        L1, L2 = coupler.schedule.L1, coupler.level(2)
        boundaries = [[0.0] * size, [L1] * size, [L2] * size]
    report["law"] = law_checks(coupler, boundaries, draws, seed=seed + 1)
    report["passes"] = (
        report["coalescence_violations"] == 0
        and report.get("containment_violations", 0) == 0
        and report["law"]["passes"]
    )
    logger.debug(
        "Coupler property check: %d coalescence violations, verdict %s",
        report["coalescence_violations"],
        report["passes"],
    )
    return report
