"""
Schedule module
===============

Level schedule of the stratified coupling: nested value bands
S_n = [-L_n, L_n] with L_n = L1 |epsilon|^{-(n-1)/2}, and the probabilities
q_n = 1 - a exp(-(2d)^n) that an update keeps its output inside S_n.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Tuple

from GMRF_PerfectSampling.errors import ScheduleError

MAX_LEVEL = 64


@dataclass(frozen=True)
class LevelSchedule:
    """
    Explicit schedule (L_n, q_n).

    Attributes:
        a (float): Tail constant of q_n, positive with a / e < 1.
        L1 (float): First level.
        epsilon (float): Interaction strength of the model.
        d (int): Lattice dimension (enters q_n through (2d)^n).
    """

    a: float
    L1: float
    epsilon: float
    d: int = 1

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"`a` must be positive, got {self.a}.")
        if not self.a * math.exp(-1.0) < 1:
            raise ValueError(
                f"`a` must satisfy a * e^-1 < 1 so that q_0 lies in (0, 1), got a={self.a}."
            )
        if not self.L1 > 0:
            raise ValueError(f"`L1` must be positive, got {self.L1}.")
        if not abs(self.epsilon) < 1:
            raise ValueError(f"`epsilon` must lie in (-1, 1), got {self.epsilon}.")
        if self.d < 1:
            raise ValueError(f"`d` must be positive, got {self.d}.")

    @property
    def b_size(self) -> int:
        """|B| of the nearest-neighbour model."""
        return 2 * self.d

    def tail_prob(self, n: int) -> float:
        """1 - q_n = a exp(-(2d)^n), computed without cancellation."""
        if n < 0:
            raise ValueError(f"Level index must be nonnegative, got {n}.")
        # (2d)^n beyond ~750 makes the exponential vanish in double precision
        if n * math.log(2 * self.d) > math.log(750.0):
            return 0.0
        return self.a * math.exp(-float((2 * self.d) ** n))

    def level_prob(self, n: int) -> float:
        """q_n."""
        return 1.0 - self.tail_prob(n)

    def level_bound(self, n: int) -> float:
        """L_n, for n >= 1."""
        if n < 1:
            raise ValueError(f"Levels are indexed from 1, got n={n}.")
        if self.epsilon == 0:
            raise ScheduleError(
                "The level schedule is undefined for epsilon = 0; the field is "
                "i.i.d. standard normal and needs no stratification."
            )
        try:
            return self.L1 * abs(self.epsilon) ** (-(n - 1) / 2.0)
        except OverflowError:
            return math.inf

    @cached_property
    def level_probs(self) -> Tuple[float, ...]:
        """q_0, ..., q_64."""
        return tuple(self.level_prob(n) for n in range(MAX_LEVEL + 1))

    def level_index(self, u: float) -> int:
        """
        Smallest k with u <= q_k.

        Raises:
            ScheduleError: If no k <= 64 qualifies.
        """
        for k, q_k in enumerate(self.level_probs):
            if u <= q_k:
                return k
        raise ScheduleError(
            f"Uniform u={u!r} lies above q_{MAX_LEVEL}; such a draw has probability "
            "below 1e-100 and points to a misused schedule."
        )

    def to_dict(self) -> Dict[str, Any]:
        """Config keys of the schedule."""
        return {"a": self.a, "L1": self.L1, "epsilon": self.epsilon, "d": self.d}


def level_bound(schedule: LevelSchedule, n: int) -> float:
    """
    L_n = L1 |epsilon|^{-(n-1)/2}.

    Args:
        schedule (LevelSchedule): The schedule.
        n (int): Level index, n >= 1.

    Returns:
        float: The half-width of S_n.
    """
    return schedule.level_bound(n)


def level_prob(schedule: LevelSchedule, n: int) -> float:
    """
    q_n = 1 - a exp(-(2d)^n).

    Args:
        schedule (LevelSchedule): The schedule.
        n (int): Level index, n >= 0.

    Returns:
        float: The probability attached to level n.
    """
    return schedule.level_prob(n)
