"""
Params module
=============

Model parameters of the nearest-neighbour Gaussian field: the lattice
dimension, the interaction and the optional truncation selecting the compact
model on [-L, L].
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional

from GMRF_PerfectSampling.model.lattice import NeighborhoodSpec


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters selecting the truncated or the unbounded model.

    Attributes:
        d (int): Lattice dimension.
        epsilon (float): Interaction strength, |epsilon| < 1.
        truncation (Optional[float]): Half-width L of the compact state space;
            None selects the unbounded model.
    """

    d: int
    epsilon: float
    truncation: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.d, int) or isinstance(self.d, bool):
            raise TypeError(f"`d` must be an int, but got type {type(self.d)} instead.")
        if self.d < 1:
            raise ValueError(f"`d` must be positive, got {self.d}.")
        if not abs(self.epsilon) < 1:
            raise ValueError(
                f"`epsilon` must lie in (-1, 1), got {self.epsilon}. "
                "The interaction operator is not a contraction otherwise."
            )
        if self.truncation is not None and not self.truncation > 0:
            raise ValueError(
                f"`truncation` must be a positive half-width, got {self.truncation}."
            )
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if self.truncation is not None:
            object.__setattr__(self, "truncation", float(self.truncation))

    @property
    def is_truncated(self) -> bool:
        """Whether the state space is [-L, L]."""
        return self.truncation is not None

    @property
    def neighborhood(self) -> NeighborhoodSpec:
        """The nearest-neighbour set B."""
        return NeighborhoodSpec.default(self.d)

    @property
    def high_noise_gate(self) -> float:
        """Threshold 1 - 1/|B| that the maximal coupling probability must exceed."""
        return 1.0 - 1.0 / (2 * self.d)

    def mean_field(self, total: float) -> float:
        """Conditional mean (epsilon / 2d) * sum of the neighbour values."""
        return self.epsilon * total / (2 * self.d)

    def to_dict(self) -> Dict[str, Any]:
        """Config keys of the model."""
        return {"d": self.d, "epsilon": self.epsilon, "truncation": self.truncation}
