"""
Boundary module
===============

Boundary configurations (the field on i + B) fed to the update functions, and
the helpers shared by both couplers.
"""
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from GMRF_PerfectSampling.errors import CouplingError
from GMRF_PerfectSampling.model.lattice import NeighborhoodSpec, Site


@dataclass(frozen=True)
class BoundaryConfig:
    """
    Values of the field at the neighbours of a site, in canonical offset order.

    Attributes:
        values (Tuple[float, ...]): One value per offset of B.
    """

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("A boundary configuration needs at least one value.")
        if not all(np.isfinite(values)):
            raise ValueError(f"Boundary values must be finite, got {values}.")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[Site, float], spec: NeighborhoodSpec
    ) -> "BoundaryConfig":
        """Builds the configuration from an offset -> value mapping."""
        missing = [offset for offset in spec.offsets if offset not in mapping]
        if missing or len(mapping) != spec.size:
            raise ValueError(
                f"The mapping must have exactly the offsets {spec.offsets}, "
                f"missing {missing}."
            )
        return cls(tuple(mapping[offset] for offset in spec.offsets))

    @classmethod
    def zero(cls, size: int) -> "BoundaryConfig":
        """The all-zero configuration."""
        return cls((0.0,) * size)

    def mean_field(self, epsilon: float) -> float:
        """m_eta = (epsilon / |B|) * sum of the values."""
        return epsilon * sum(self.values) / len(self.values)

    def inside(self, bound: float) -> bool:
        """Whether every value lies in [-bound, bound]."""
        return max(abs(v) for v in self.values) <= bound


Eta = Union[BoundaryConfig, Sequence[float]]


def as_boundary(eta: Eta) -> BoundaryConfig:
    """Accepts a configuration or a plain sequence of neighbour values."""
    if isinstance(eta, BoundaryConfig):
        return eta
    return BoundaryConfig(tuple(eta))


def check_uniform(u: float) -> float:
    """Rejects uniforms outside [0, 1]."""
    if not 0.0 <= u <= 1.0:
        raise CouplingError(f"The uniform input must lie in [0, 1], got u={u}.")
    return float(u)
