# pylint: disable=R0913, R0914
"""
Acceptance module
=================

The acceptance suite: each criterion runs one experiment at full size and
returns a JSON-ready dictionary holding its verdict under "passes", the
quantities it was decided on, and its runtime.

Criteria that draw replicas go through `ReplicaRunner`, so a suite run honours
the GMRF_WORKERS environment variable and every replica seed derives from the
suite seed.
"""
import logging
import math
import time
from dataclasses import asdict, dataclass, replace
from functools import partial
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import optimize, stats

from GMRF_PerfectSampling.analytics.coupling_mass import (
    T_POINTS,
    X_POINTS,
    gamma_truncated,
    lipschitz_eta_bound,
)
from GMRF_PerfectSampling.analytics.covariance import (
    CovarianceQuery,
    covariance,
    dense_covariance_entry,
)
from GMRF_PerfectSampling.analytics.normal import TruncatedNormal, std_normal_cdf
from GMRF_PerfectSampling.coupling.flat import FlatCoupler
from GMRF_PerfectSampling.coupling.stratified import StratifiedCoupler
from GMRF_PerfectSampling.errors import PerfectSamplingError
from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.params import ModelParams
from GMRF_PerfectSampling.model.schedule import LevelSchedule
from GMRF_PerfectSampling.particles.duality import duality_check_binary, duality_check_level
from GMRF_PerfectSampling.particles.glauber import forward_glauber
from GMRF_PerfectSampling.particles.level import estimate_level_rates
from GMRF_PerfectSampling.particles.spin import spin_rate_table
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.sampling.gaussian import LDependentSampler, validate_schedule
from GMRF_PerfectSampling.sampling.reports import FieldSample
from GMRF_PerfectSampling.sampling.runner import ReplicaRunner, replica_seed
from GMRF_PerfectSampling.sampling.window import SamplerOptions, sample_window
from GMRF_PerfectSampling.validation.batch import SampleBatch
from GMRF_PerfectSampling.validation.properties import (
    coalescence_violations,
    coupler_property_check,
)
from GMRF_PerfectSampling.validation.statistics import (
    bonferroni,
    conditional_regression,
    independence_test,
    ks_test,
    radius_tv_bound,
    tail_curve,
    tv_discretized,
)

logger = logging.getLogger(__name__)

REFERENCE_SCHEDULE = LevelSchedule(a=0.09, L1=3.5, epsilon=0.01, d=1)
TRUNCATED_REFERENCE = ModelParams(d=1, epsilon=0.2, truncation=2.0)
QUADRATURE_EPSILONS = (0.2, 0.1, 0.05, 0.025)
QUADRATURE_HALFWIDTH = 2.0
QUADRATURE_STABILITY = 1e-6
ORACLE_AGREEMENT = 1e-10
TAIL_GAMMA = 0.8
ALPHA = 0.01
CENTRE = (0,)


@dataclass(frozen=True)
class SuiteSettings:
    """
    Sizes and experiment knobs of the acceptance suite.

    Attributes:
        truncated_samples (int): Window samples of the truncated sampler.
        glauber_runs (int): Forward-Glauber oracle runs.
        glauber_side (int): Torus side of the oracle.
        glauber_sweeps (int): Burn-in of the oracle, in sweeps.
        tail_reports (int): Coding reports of the tail experiment.
        gaussian_samples (int): Window samples of the gaussian sampler.
        duality_trials (int): Trials of each duality check.
        torus_side (int): Torus side of the duality checks.
        tau (float): Start time of the duality checks.
        spin_gamma (float): Coalescence probability of the binary system.
        kappa (int): Constant initial spin of the level system.
        rate_marks (int): Marks per frozen-pattern rate estimate.
        approx_replicas (int): Replicas of the l-dependent experiment.
        approx_ls (Tuple[int, ...]): Values of l compared.
        coupler_trials (int): Random (eta, u) per coupler property.
        coupler_draws (int): Draws per fixed-boundary KS test.
        determinism_replicas (int): Replicas rerun by the determinism check.
        translation_pairs (int): Random (seed, shift) pairs.
    """

    truncated_samples: int = 200_000
    glauber_runs: int = 10
    glauber_side: int = 1000
    glauber_sweeps: int = 50
    tail_reports: int = 100_000
    gaussian_samples: int = 100_000
    duality_trials: int = 100_000
    torus_side: int = 8
    tau: float = -3.0
    spin_gamma: float = 0.8
    kappa: int = 1
    rate_marks: int = 100_000
    approx_replicas: int = 100_000
    approx_ls: Tuple[int, ...] = (2, 4, 6, 8)
    coupler_trials: int = 10_000
    coupler_draws: int = 2000
    determinism_replicas: int = 1000
    translation_pairs: int = 100

    def __post_init__(self):
        for name in self.counts():
            if getattr(self, name) < 1:
                raise ValueError(f"`{name}` must be positive, got {getattr(self, name)}.")
        if not self.tau < 0:
            raise ValueError(f"`tau` must be negative, got {self.tau}.")
        if not 0.0 <= self.spin_gamma <= 1.0:
            raise ValueError(f"`spin_gamma` must lie in [0, 1], got {self.spin_gamma}.")
        if self.torus_side < 3:
            raise ValueError(f"`torus_side` must be at least 3, got {self.torus_side}.")
        if not self.approx_ls or min(self.approx_ls) < 2:
            raise ValueError(f"`approx_ls` must hold values l >= 2, got {self.approx_ls}.")

    @staticmethod
    def counts() -> Tuple[str, ...]:
        """Fields scaled by `scaled`."""
        return (
            "truncated_samples",
            "glauber_runs",
            "tail_reports",
            "gaussian_samples",
            "duality_trials",
            "rate_marks",
            "approx_replicas",
            "coupler_trials",
            "coupler_draws",
            "determinism_replicas",
            "translation_pairs",
        )

    def scaled(self, factor: float, floor: int = 100) -> "SuiteSettings":
        """
        Settings with every count multiplied by `factor`.

        Args:
            factor (float): Positive multiplier.
            floor (int, optional): Smallest count kept, except for the
                Glauber runs which keep at least one. Defaults to 100.

        Returns:
            SuiteSettings: The scaled settings.
        """
        if not factor > 0:
            raise ValueError(f"`factor` must be positive, got {factor}.")
        changes = {}
        for name in self.counts():
            lowest = 1 if name == "glauber_runs" else floor
            changes[name] = max(lowest, int(round(getattr(self, name) * factor)))
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        settings = asdict(self)
        settings["approx_ls"] = list(self.approx_ls)
        return settings


def _window_values(
    options: SamplerOptions, mode: str, window: Sequence, index: int, seed: int
) -> Tuple[float, ...]:
    del index
    return tuple(sample_window(MarkStore(seed), window, mode, options).as_array())


def _site_report(options: SamplerOptions, mode: str, index: int, seed: int):
    del index
    return options.build_sampler(MarkStore(seed), mode).sample(CENTRE)[1]


def _glauber_oracle(coupler: FlatCoupler, side: int, sweeps: int, index: int, seed: int):
    del index
    window = TorusWindow(1, side)
    start = FieldSample(window.sites, {site: 0.0 for site in window.sites})
    field = forward_glauber(window, start, -float(sweeps), 0.0, MarkStore(seed), coupler)
    return np.asarray(field.as_array())


def approximation_replica(
    options: SamplerOptions, ls: Sequence[int], far_site, index: int, seed: int
) -> Dict[str, Any]:
    """
    X_0 with the root distance of its cutset and coding radius, Y_0 for every l
    in `ls`, and Y at `far_site` for the largest l, all from one store.
    """
    del index
    origin = (0,) * len(far_site)
    store = MarkStore(seed)
    exact = options.build_sampler(store, "gaussian")
    x0, report, _ = exact.sample(origin)
    approximations = {
        l: LDependentSampler(
            store, options.schedule, l, budget=options.budget, coupler=options.coupler
        ).sample(origin)[0]
        for l in ls
    }
    far = LDependentSampler(
        store, options.schedule, max(ls), budget=options.budget, coupler=options.coupler
    ).sample(far_site)[0]
    return {
        "x0": x0,
        "cut_reach": max(exact.cutset(origin).values(), default=0),
        "radius": report.radius,
        "y0": approximations,
        "y_far": far,
    }


def _batch_csv(batch: SampleBatch) -> str:
    """Rendering of a batch of tuple payloads, the bytes a rerun must reproduce."""
    frame = pd.DataFrame({"replica": batch.replicas, "seed": batch.seeds})
    width = len(batch.payload[0]) if batch.payload else 0
    for position in range(width):
        frame[f"x{position}"] = batch.column(position)
    return frame.to_csv(index=False, float_format="%.17g")


def _strictly_decreasing_to_zero(counts: Sequence[int]) -> bool:
    """Strictly decreasing while positive, then zero."""
    for before, after in zip(counts, counts[1:]):
        if after != 0 and after >= before:
            return False
    return True


def _gaussian_options(schedule: LevelSchedule) -> SamplerOptions:
    validate_schedule(schedule, schedule.b_size)
    options = SamplerOptions(
        ModelParams(schedule.d, schedule.epsilon),
        schedule,
        delta_fail=1e-9,
        check_hypotheses=False,
    )
    options.get_coupler("gaussian")
    return options


def check_quadrature(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """
    Maximal coupling quadrature: exact value at epsilon = 0, monotonicity in
    epsilon, the Lipschitz bound and stability under grid doubling.
    """
    del settings, seed, schedule
    L = QUADRATURE_HALFWIDTH
    gammas = [gamma_truncated(epsilon, L) for epsilon in QUADRATURE_EPSILONS]
    refined = [
        gamma_truncated(epsilon, L, 2 * T_POINTS, 2 * X_POINTS)
        for epsilon in QUADRATURE_EPSILONS
    ]
    bounds = [lipschitz_eta_bound(epsilon, L) for epsilon in QUADRATURE_EPSILONS]
    zero = gamma_truncated(0.0, L)
    increasing = all(b > a for a, b in zip(gammas, gammas[1:]))
    bounded = all(1.0 - g <= bound for g, bound in zip(gammas, bounds))
    drift = max(abs(a - b) for a, b in zip(gammas, refined))
    return {
        "passes": zero == 1.0 and increasing and bounded and drift <= QUADRATURE_STABILITY,
        "epsilons": list(QUADRATURE_EPSILONS),
        "gammas": gammas,
        "eta_bounds": bounds,
        "gamma_at_zero": zero,
        "increasing": increasing,
        "bounded": bounded,
        "grid_doubling_drift": drift,
    }


def check_truncated_exactness(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """
    Truncated CFTP at d = 1, epsilon = 0.2, L = 2: range, one-site marginal
    against a forward-Glauber oracle, and the conditional mean.

    The conditional mean of X_0 given the neighbour sum S is the truncated
    normal mean m(S), which is not linear in S, so the neighbour-sum slope
    differs from epsilon / 2. The verdict requires X_0 against m(S) to have
    slope 1, and X_0 - m(S) against S to have slope 0 and intercept 0.
    """
    del schedule
    params = TRUNCATED_REFERENCE
    L = params.truncation
    options = SamplerOptions(params)
    coupler = options.get_coupler("truncated")
    window = ((-1,), CENTRE, (1,))
    batch = ReplicaRunner(
        partial(_window_values, options, "truncated", window),
        seed,
        description="Truncated samples",
    )(0, settings.truncated_samples)
    values = batch.values()
    oracle_batch = ReplicaRunner(
        partial(_glauber_oracle, coupler, settings.glauber_side, settings.glauber_sweeps),
        seed + 1,
        description="Glauber oracle",
    )(0, settings.glauber_runs)
    oracle = np.concatenate(oracle_batch.payload)
    in_range = bool(np.all(np.abs(values) <= L))
    tv = tv_discretized(values[:, 1], oracle, bins=32, seed=seed)
    sums = values[:, 0] + values[:, 2]
    expected = np.array([TruncatedNormal(params.mean_field(s), L).expectation for s in sums])
    conditional = conditional_regression(values[:, 1], expected)
    linear = conditional_regression(values[:, 1], sums)
    residual = conditional_regression(values[:, 1] - expected, sums)
    return {
        "passes": coupler.gamma > params.high_noise_gate
        and in_range
        and tv.consistent()
        and conditional.slope_matches(1.0)
        and residual.slope_matches(0.0)
        and residual.intercept_matches(0.0)
        and not batch.failures,
        "gamma": coupler.gamma,
        "gate": params.high_noise_gate,
        "samples": len(batch),
        "failures": len(batch.failures),
        "in_range": in_range,
        "oracle_values": int(oracle.size),
        "tv": tv.to_dict(),
        "conditional_mean_regression": conditional.to_dict(),
        "neighbor_sum_regression": linear.to_dict(),
        "residual_regression": residual.to_dict(),
    }


def check_radius_tail(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """Coding-depth tail of the truncated sampler at gamma = 0.8 against its bound."""
    del schedule
    L = QUADRATURE_HALFWIDTH
    epsilon = optimize.brentq(lambda e: gamma_truncated(e, L) - TAIL_GAMMA, 1e-3, 0.95)
    params = ModelParams(1, epsilon, L)
    options = SamplerOptions(params)
    coupler = options.get_coupler("truncated")
    batch = ReplicaRunner(
        partial(_site_report, options, "truncated"), seed, description="Coding reports"
    )(0, settings.tail_reports)
    curve = tail_curve(
        batch.payload, r=1, gamma=coupler.gamma, b_size=params.neighborhood.size
    )
    return {
        "passes": bool(curve["checked"].any())
        and not bool(curve["flagged"].any())
        and not batch.failures,
        "epsilon": epsilon,
        "gamma": coupler.gamma,
        "reports": len(batch),
        "failures": len(batch.failures),
        "curve": curve.to_dict(orient="records"),
    }


def check_gaussian_sampler(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """
    Unbounded sampler: KS of X_0 against N(0, Gamma(0, 0)), the empirical
    covariance of (X_0, X_1) against Gamma(0, 1), and the conditional law at
    the centre: X_0 regressed on X_{-1} + X_1 has slope epsilon / 2 and
    intercept 0.
    """
    options = _gaussian_options(schedule)
    epsilon = schedule.epsilon
    batch = ReplicaRunner(
        partial(_window_values, options, "gaussian", ((-1,), CENTRE, (1,))),
        seed,
        description="Gaussian samples",
    )(0, settings.gaussian_samples)
    left, x0, x1 = batch.column(0), batch.column(1), batch.column(2)
    dlr = conditional_regression(x0, left + x1)
    variance = covariance(CovarianceQuery(epsilon, CENTRE, CENTRE))
    dense = dense_covariance_entry(epsilon, CENTRE, CENTRE)
    neighbor = covariance(CovarianceQuery(epsilon, CENTRE, (1,)))
    ks = ks_test(x0, lambda s: std_normal_cdf(np.asarray(s) / math.sqrt(variance)), ALPHA)
    products = (x0 - x0.mean()) * (x1 - x1.mean())
    empirical = float(products.mean())
    se = float(products.std(ddof=1) / math.sqrt(products.size))
    return {
        "passes": ks.passes
        and abs(variance - dense) <= ORACLE_AGREEMENT
        and abs(empirical - neighbor) <= 3.0 * se
        and dlr.slope_matches(epsilon / 2.0)
        and dlr.intercept_matches(0.0)
        and not batch.failures,
        "samples": len(batch),
        "failures": len(batch.failures),
        "variance": variance,
        "variance_dense": dense,
        "ks": ks.to_dict(),
        "covariance_01": neighbor,
        "empirical_covariance_01": empirical,
        "covariance_se": se,
        "neighbor_sum_regression": dlr.to_dict(),
    }


def check_duality(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """Binary and level duality identities, with the pathwise lemmas on shared marks."""
    window = TorusWindow(1, settings.torus_side)
    binary = duality_check_binary(
        window, settings.tau, settings.spin_gamma, settings.duality_trials, master_seed=seed
    )
    level = duality_check_level(
        window,
        settings.tau,
        settings.kappa,
        schedule,
        settings.duality_trials,
        master_seed=seed,
    )
    return {
        "passes": binary.passes
        and level.passes
        and binary.pathwise_violations == 0
        and level.pathwise_violations == 0
        and level.form_mismatches == 0,
        "binary": binary.to_dict(),
        "level": level.to_dict(),
    }


def check_rates(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """Empirical transition rates of both particle systems under frozen neighbours."""
    spin = spin_rate_table(
        MarkStore(seed, stream_key=(0,)), settings.spin_gamma, settings.rate_marks
    )
    level = pd.concat(
        [
            estimate_level_rates(
                MarkStore(seed, stream_key=(1,)),
                (m,),
                schedule,
                m,
                k_max=3,
                count=settings.rate_marks,
            )
            for m in (0, 1, 2)
        ],
        ignore_index=True,
    )
    tests = len(spin) + len(level)
    width = float(stats.norm.isf(bonferroni(ALPHA, tests) / 2.0))
    for table in (spin, level):
        table["passes"] = (table["empirical"] - table["exact"]).abs() <= width * table["se"]
    return {
        "passes": bool(spin["passes"].all() and level["passes"].all()),
        "z_width": width,
        "spin": spin.to_dict(orient="records"),
        "level": level.to_dict(orient="records"),
    }


def check_approximation(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """
    l-dependent truncation: decay of P(X_0 != Y_0) in l, independence beyond the
    dependence range, and bitwise agreement when the cutset fits below the cut.
    """
    options = _gaussian_options(schedule)
    ls = tuple(sorted(settings.approx_ls))
    far_site = (2 * (max(ls) // 2) + 1,)
    batch = ReplicaRunner(
        partial(approximation_replica, options, ls, far_site),
        seed,
        description="Approximation replicas",
    )(0, settings.approx_replicas)
    total = len(batch)
    disagreements, counterexamples, events = [], {}, {}
    for l in ls:
        disagreements.append(sum(1 for row in batch.payload if row["x0"] != row["y0"][l]))
        fitting = [row for row in batch.payload if row["cut_reach"] < l // 2]
        events[l] = len(fitting)
        counterexamples[l] = sum(1 for row in fitting if row["x0"] != row["y0"][l])
    frequencies = [count / total for count in disagreements]
    ratios = [b / a if a else 0.0 for a, b in zip(frequencies, frequencies[1:])]
    independence = independence_test(
        [row["y0"][max(ls)] for row in batch.payload],
        [row["y_far"] for row in batch.payload],
    )
    radii = [row["radius"] for row in batch.payload]
    return {
        "passes": _strictly_decreasing_to_zero(disagreements)
        and independence.passes
        and sum(counterexamples.values()) == 0
        and not batch.failures,
        "replicas": total,
        "failures": len(batch.failures),
        "ls": list(ls),
        "disagreement_frequency": frequencies,
        "ratios": ratios,
        "radius_bound": [radius_tv_bound(radii, 1, l) for l in ls],
        "far_site": list(far_site),
        "independence": independence.to_dict(),
        "fitting_events": {str(l): count for l, count in events.items()},
        "counterexamples": {str(l): count for l, count in counterexamples.items()},
    }


def check_couplers(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """Coalescence, containment and law checks of both update functions."""
    flat = coupler_property_check(
        FlatCoupler(TRUNCATED_REFERENCE),
        settings.coupler_trials,
        settings.coupler_draws,
        seed,
    )
    stratified = coupler_property_check(
        StratifiedCoupler(schedule), settings.coupler_trials, settings.coupler_draws, seed
    )
    return {
        "passes": flat["passes"] and stratified["passes"],
        "flat": flat,
        "stratified": stratified,
    }


def check_determinism(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """Byte-identical reruns of both samplers and bitwise translation covariance."""
    truncated = SamplerOptions(TRUNCATED_REFERENCE)
    truncated.get_coupler("truncated")
    gaussian = _gaussian_options(schedule)
    reruns = {}
    for mode, options in (("truncated", truncated), ("gaussian", gaussian)):
        run = ReplicaRunner(
            partial(_window_values, options, mode, (CENTRE, (1,))),
            seed,
            description=f"{mode} rerun",
        )
        reruns[mode] = _batch_csv(run(0, settings.determinism_replicas)) == _batch_csv(
            run(0, settings.determinism_replicas)
        )
    rng = np.random.default_rng(seed)
    mismatches = 0
    for pair in range(settings.translation_pairs):
        store_seed = int(rng.integers(0, 2**63 - 1))
        shift = (int(rng.integers(-1000, 1001)),)
        mode, options = ("truncated", truncated) if pair % 2 else ("gaussian", gaussian)
        moved = options.build_sampler(MarkStore(store_seed), mode).sample(shift)[0]
        shifted_store = MarkStore(store_seed, shift=shift)
        shifted = options.build_sampler(shifted_store, mode).sample(CENTRE)[0]
        mismatches += moved != shifted
    return {
        "passes": all(reruns.values()) and mismatches == 0,
        "identical_reruns": reruns,
        "translation_pairs": settings.translation_pairs,
        "translation_mismatches": mismatches,
    }


def check_negative_control(settings: SuiteSettings, seed: int, schedule: LevelSchedule):
    """A coupler that skips the common-value routing must fail the coalescence property."""
    del schedule
    violations = coalescence_violations(
        FlatCoupler(TRUNCATED_REFERENCE, route_common=False), settings.coupler_trials, seed
    )
    return {"passes": violations > 0, "coalescence_violations": violations}


Criterion = Callable[[SuiteSettings, int, LevelSchedule], Dict[str, Any]]

CRITERIA: Dict[str, Criterion] = {
    "quadrature": check_quadrature,
    "truncated": check_truncated_exactness,
    "tail": check_radius_tail,
    "gaussian": check_gaussian_sampler,
    "duality": check_duality,
    "rates": check_rates,
    "approximation": check_approximation,
    "couplers": check_couplers,
    "determinism": check_determinism,
    "negative_control": check_negative_control,
}


def select_criteria(suite: Union[str, Sequence[str]] = "all") -> List[str]:
    """
    Criterion names of a suite.

    Args:
        suite (str | Sequence[str]): "all", a single criterion name, a
            comma-separated list, or a sequence of names.

    Returns:
        List[str]: The names, in suite order.

    Raises:
        ValueError: On an unknown name.
    """
    if isinstance(suite, str):
        names = list(CRITERIA) if suite == "all" else [s.strip() for s in suite.split(",")]
    else:
        names = list(suite)
    unknown = [name for name in names if name not in CRITERIA]
    if unknown or not names:
        raise ValueError(f"Unknown criteria {unknown}; expected names among {list(CRITERIA)}.")
    return [name for name in CRITERIA if name in names]


def run_suite(
    suite: Union[str, Sequence[str]] = "all",
    settings: SuiteSettings = None,
    master_seed: int = 0,
    schedule: LevelSchedule = None,
    logger: logging.Logger = None,
) -> Dict[str, Dict[str, Any]]:
    """
    Runs the selected criteria.

    Each criterion gets its own seed derived from `master_seed` and its
    position in the full suite, so a criterion gives the same verdict whether
    it runs alone or with the others. A domain failure inside a criterion
    fails that criterion only.

    Args:
        suite (str | Sequence[str], optional): Criteria to run. Defaults to "all".
        settings (SuiteSettings, optional): Sizes. Defaults to the full sizes.
        master_seed (int, optional): Suite seed. Defaults to 0.
        schedule (LevelSchedule, optional): Schedule of the unbounded
            experiments. Defaults to the reference schedule.
        logger (logging.Logger, optional): Logger instance. If None, a default
            logger is created.

    Returns:
        Dict[str, Dict[str, Any]]: Criterion name -> outcome with "passes" and
            "runtime_s".
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = SuiteSettings() if settings is None else settings
    schedule = REFERENCE_SCHEDULE if schedule is None else schedule
    verdicts = {}
    positions = {name: position for position, name in enumerate(CRITERIA)}
    for name in select_criteria(suite):
        seed = replica_seed(master_seed, positions[name]) % 2**63
        start = time.perf_counter()
        try:
            outcome = CRITERIA[name](settings, seed, schedule)
        except PerfectSamplingError as error:
            logger.error("Criterion %s aborted: %s", name, error)
            outcome = {"passes": False, "error": f"{type(error).__name__}: {error}"}
        outcome["passes"] = bool(outcome["passes"])
        outcome["seed"] = seed
        outcome["runtime_s"] = time.perf_counter() - start
        logger.info(
            "Criterion %s: %s in %.1f s",
            name,
            "pass" if outcome["passes"] else "FAIL",
            outcome["runtime_s"],
        )
        verdicts[name] = outcome
    return verdicts
