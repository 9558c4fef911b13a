# pylint: disable=C0103
"""
Hypotheses module
=================

Numeric checkers for the four hypotheses under which the stratified coupling
yields a dry cutset almost surely:

* H1: the restricted common mass gamma-tilde dominates q_0;
* H2: boundary values in S_{n+1} keep the update in S_n with probability q_n
  (see `GMRF_PerfectSampling.analytics.bounds.check_h2`);
* H3: 4 sum_n |B|^{2n+1} (1 - q_n) < 1 and sum_n |B|^n (1 - q_n) e^{t (2d)^n}
  converges for some t > 0 (certified at t = 1/2);
* H4: the union bound on the probability that the field leaves the levels
  tends to zero.

The growth condition on L_n, which implies H2 for the explicit schedule, has
its own checker.
"""
import math
from dataclasses import dataclass, field
from typing import Tuple

from GMRF_PerfectSampling.analytics.coupling_mass import gamma_tilde
from GMRF_PerfectSampling.errors import ScheduleError
from GMRF_PerfectSampling.model.lattice import ball_count, sphere_count
from GMRF_PerfectSampling.model.params import ModelParams
from GMRF_PerfectSampling.model.schedule import MAX_LEVEL, LevelSchedule

RELATIVE_CUTOFF = 1e-16
H3_WITNESS = 0.5
H4_TOLERANCE = 1e-12


@dataclass(frozen=True)
class H1Report:
    """gamma-tilde against q_0."""

    gamma_tilde: float
    q0: float
    passes: bool


@dataclass(frozen=True)
class H3Report:
    """
    Outcome of the H3 check.

    Attributes:
        sum4 (float): 4 sum_n |B|^{2n+1} (1 - q_n).
        passes (bool): Whether sum4 < 1.
        t_exists (bool): Whether the exponential moment series converges at t = 1/2.
        terms (int): Number of terms summed.
    """

    sum4: float
    passes: bool
    t_exists: bool
    terms: int


@dataclass(frozen=True)
class GrowthReport:
    """
    Outcome of the growth check L_n - |epsilon| L_{n+1} >= sqrt(2) sqrt((2d)^n - log a).

    Attributes:
        min_slack (float): Smallest difference between both sides over n = 1..64.
        passes (bool): Whether no n <= 64 violates the condition and the tail
            beyond n = 64 is certified.
        first_violation (int | None): First violating n.
        tail_certified (bool): Whether the growth rates rule out a violation
            beyond n = 64.
        slacks (Tuple[float, ...]): Differences for n = 1..64.
    """

    min_slack: float
    passes: bool
    first_violation: int = None
    tail_certified: bool = False
    slacks: Tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class H4Report:
    """
    Union bounds on 1 - mu(A_n) for n = 1..64.

    Attributes:
        bounds (Tuple[float, ...]): The bound at each n, index 0 holding n = 1.
        passes (bool): Whether the bounds are nonincreasing and reach zero (below
            1e-12) by n = 64.
        sigma2 (float): Variance bound 1 / (1 - epsilon^2) used in the bound.
    """

    bounds: Tuple[float, ...]
    passes: bool
    sigma2: float

    def bound_at(self, n: int) -> float:
        """Bound at level n >= 1."""
        if not 1 <= n <= len(self.bounds):
            raise ValueError(f"Level must lie in [1, {len(self.bounds)}], got {n}.")
        return self.bounds[n - 1]

    @property
    def decreasing(self) -> bool:
        """Whether the bound sequence is nonincreasing."""
        return all(b <= a for a, b in zip(self.bounds, self.bounds[1:]))


def check_h1(schedule: LevelSchedule, params: ModelParams = None) -> H1Report:
    """
    Checks gamma-tilde(epsilon, L1) >= q_0.

    Args:
        schedule (LevelSchedule): The schedule.
        params (ModelParams, optional): Model parameters; when given, their
            interaction must match the schedule's.

    Returns:
        H1Report: The comparison.
    """
    if params is not None and params.epsilon != schedule.epsilon:
        raise ValueError(
            f"Schedule epsilon {schedule.epsilon} differs from model epsilon "
            f"{params.epsilon}."
        )
    common = gamma_tilde(schedule.epsilon, schedule.L1)
    q0 = schedule.level_prob(0)
    return H1Report(gamma_tilde=common, q0=q0, passes=common >= q0)


def _series_converges(log_terms) -> Tuple[float, int, bool]:
    """Sums exp(log_terms) until a term drops below 1e-16 of the running sum."""
    total = 0.0
    count = 0
    for count, log_term in enumerate(log_terms, 1):
        term = math.exp(log_term) if log_term > -745.0 else 0.0
        total += term
        if term < RELATIVE_CUTOFF * total or (term == 0.0 and count > 1):
            return total, count, True
    return total, count, False


def check_h3(schedule: LevelSchedule, b_size: int) -> H3Report:
    """
    Checks both conditions of H3.

    Args:
        schedule (LevelSchedule): The schedule.
        b_size (int): |B| >= 2.

    Returns:
        H3Report: The partial sum and the verdicts.

    Raises:
        ScheduleError: If the partial sums are not Cauchy within 64 terms.
    """
    if b_size < 2:
        raise ValueError(f"`b_size` must be at least 2, got {b_size}.")
    growth = 2 * schedule.d
    log_a = math.log(schedule.a)
    main_terms = (
        math.log(4.0) + (2 * n + 1) * math.log(b_size) + log_a - float(growth**n)
        for n in range(MAX_LEVEL)
    )
    sum4, count, converged = _series_converges(main_terms)
    if not converged:
        raise ScheduleError(
            f"H3 series did not converge within {MAX_LEVEL} terms "
            f"(partial sum {sum4})."
        )
    moment_terms = (
        log_a + n * math.log(b_size) + (H3_WITNESS - 1.0) * float(growth**n)
        for n in range(MAX_LEVEL)
    )
    _, _, t_exists = _series_converges(moment_terms)
    return H3Report(sum4=sum4, passes=sum4 < 1.0, t_exists=t_exists, terms=count)


def check_growth(schedule: LevelSchedule) -> GrowthReport:
    """
    Checks the growth condition of the levels for n = 1..64.

    Beyond n = 64 the left side grows by |epsilon|^{-1/2} per level while the
    right side grows by at most sqrt(r), r being the supremum of the ratio of
    consecutive radicands; the tail is certified when |epsilon|^{-1} >= r and
    n = 64 holds. Without that certificate the right side outgrows the left
    one, so the condition fails at some n > 64 and the schedule is rejected.

    Args:
        schedule (LevelSchedule): The schedule, epsilon != 0.

    Returns:
        GrowthReport: Slacks and verdicts.
    """
    if schedule.epsilon == 0:
        raise ScheduleError(
            "The growth condition is undefined for epsilon = 0; use the i.i.d. mode."
        )
    growth = 2 * schedule.d
    log_a = math.log(schedule.a)
    slacks = []
    for n in range(1, MAX_LEVEL + 1):
        lhs = schedule.level_bound(n) * (1.0 - math.sqrt(abs(schedule.epsilon)))
        rhs = math.sqrt(2.0) * math.sqrt(max(float(growth**n) - log_a, 0.0))
        slacks.append(lhs - rhs)
    first_violation = next((n for n, s in enumerate(slacks, 1) if s < 0), None)
    last = float(growth**MAX_LEVEL)
    ratio = max((growth * last - log_a) / (last - log_a), float(growth))
    tail_certified = slacks[-1] >= 0 and abs(schedule.epsilon) ** -1.0 >= ratio
    return GrowthReport(
        min_slack=min(slacks),
        passes=first_violation is None and tail_certified,
        first_violation=first_violation,
        tail_certified=tail_certified,
        slacks=tuple(slacks),
    )


def check_h4(schedule: LevelSchedule, params: ModelParams) -> H4Report:
    """
    Evaluates the union bound
    c |B_n| e^{-L_n^2 / 2 sigma^2} / L_n + c sum_{k>n} |S_k| e^{-L_k^2 / 2 sigma^2} / L_k
    with c = 2 sigma / sqrt(2 pi), exact ball and sphere counts, and
    sigma^2 = 1 / (1 - epsilon^2).

    Args:
        schedule (LevelSchedule): The schedule.
        params (ModelParams): Unbounded model parameters.

    Returns:
        H4Report: The bound sequence.
    """
    if params.is_truncated:
        raise ValueError("H4 concerns the unbounded model; got a truncated one.")
    sigma2 = 1.0 / (1.0 - params.epsilon**2)
    sigma = math.sqrt(sigma2)
    c = 2.0 * sigma / math.sqrt(2.0 * math.pi)

    def level_term(k: int) -> float:
        level = schedule.level_bound(k)
        if level > 1e150:
            return 0.0
        return math.exp(-(level**2) / (2.0 * sigma2)) / level

    terms = [level_term(k) for k in range(1, MAX_LEVEL + 1)]
    tails = [0.0] * (MAX_LEVEL + 1)
    for k in range(MAX_LEVEL, 0, -1):
        tails[k - 1] = tails[k] + sphere_count(params.d, k) * terms[k - 1]
    bounds = tuple(
        c * ball_count(params.d, n) * terms[n - 1] + c * tails[n]
        for n in range(1, MAX_LEVEL + 1)
    )
    decreasing = all(b <= a for a, b in zip(bounds, bounds[1:]))
    return H4Report(
        bounds=bounds, passes=decreasing and bounds[-1] < H4_TOLERANCE, sigma2=sigma2
    )
