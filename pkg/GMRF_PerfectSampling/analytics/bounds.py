"""
Bounds module
=============

Gaussian tail bounds and the schedule-level checks built on them: the level
link (H2), and the tail of the dryness certificate.
"""
import math

from scipy.special import log_ndtr

from GMRF_PerfectSampling.errors import ScheduleError
from GMRF_PerfectSampling.model.schedule import MAX_LEVEL, LevelSchedule


def gaussian_tail_bound(L: float, sigma: float) -> float:
    """
    Bound (2 sigma / (sqrt(2 pi) L)) e^{-L^2 / 2 sigma^2} on P(|N(0, sigma^2)| > L).

    Args:
        L (float): Threshold, positive.
        sigma (float): Standard deviation, positive.

    Returns:
        float: The bound.
    """
    if not L > 0 or not sigma > 0:
        raise ValueError(f"`L` and `sigma` must be positive, got L={L}, sigma={sigma}.")
    return 2.0 * sigma / (math.sqrt(2.0 * math.pi) * L) * math.exp(-(L**2) / (2.0 * sigma**2))


def log_tail_prob(schedule: LevelSchedule, n: int) -> float:
    """log(1 - q_n) = log a - (2d)^n."""
    return math.log(schedule.a) - float((2 * schedule.d) ** n)


def check_h2(schedule: LevelSchedule, n: int) -> bool:
    """
    Sufficient symmetrized check of the level link at level n.

    True iff 2 (1 - Phi(L_n - |epsilon| L_{n+1})) <= 1 - q_n, i.e. the output of
    an update with boundary values in S_{n+1} leaves S_n with probability at most
    1 - q_n. Compared in log space.

    Args:
        schedule (LevelSchedule): The schedule.
        n (int): Level, n >= 1.

    Returns:
        bool: Whether the bound holds at level n.
    """
    if n < 1:
        raise ValueError(f"Levels are indexed from 1, got n={n}.")
    # L_n - |epsilon| L_{n+1} = L_n (1 - sqrt|epsilon|)
    gap = schedule.level_bound(n) * (1.0 - math.sqrt(abs(schedule.epsilon)))
    if math.isinf(gap):
        return True
    return bool(math.log(2.0) + log_ndtr(-gap) <= log_tail_prob(schedule, n))


def certificate_tail(schedule: LevelSchedule, b_size: int, depth: int) -> float:
    """
    sum_{k >= depth} |B|^k (1 - q_k), the probability bound that an unexplored
    mark at distance at least `depth` wets a given mark.

    Args:
        schedule (LevelSchedule): The schedule.
        b_size (int): |B|.
        depth (int): Certification depth D >= 0.

    Returns:
        float: The tail sum.
    """
    if depth < 0:
        raise ValueError(f"`depth` must be nonnegative, got {depth}.")
    terms = []
    for k in range(depth, depth + MAX_LEVEL + 1):
        log_term = k * math.log(b_size) + log_tail_prob(schedule, k)
        if log_term < -745.0:
            break
        terms.append(math.exp(log_term))
    return math.fsum(terms)


def certification_depth(
    schedule: LevelSchedule, b_size: int, delta_fail: float, marks: int = 1
) -> int:
    """
    Smallest D with marks * certificate_tail(D) <= delta_fail.

    Raises:
        ScheduleError: If no D <= 64 meets the bound.
    """
    if not delta_fail > 0:
        raise ValueError(f"`delta_fail` must be positive, got {delta_fail}.")
    for depth in range(MAX_LEVEL + 1):
        if max(marks, 1) * certificate_tail(schedule, b_size, depth) <= delta_fail:
            return depth
    raise ScheduleError(
        f"No certification depth up to {MAX_LEVEL} reaches delta_fail={delta_fail} "
        f"for {marks} marks."
    )
