"""
Covariance module
=================

Covariance of the unbounded field through the Neumann series of the
interaction operator T (T(i, j) = epsilon / 2d for nearest neighbours):
Gamma = sum_n T^n, so Gamma(i, j) = sum_n epsilon^n P(simple random walk goes
from i to j in n steps). A dense inverse of I - T on a finite box serves as an
independent oracle.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from GMRF_PerfectSampling.model.lattice import Site, unit_offsets

MAX_TERMS = 128
MAX_DENSE_SITES = 5000


@dataclass(frozen=True)
class CovarianceQuery:
    """
    Request for one covariance entry.

    Attributes:
        epsilon (float): Interaction strength, |epsilon| < 1.
        i (Site): First lattice point.
        j (Site): Second lattice point.
        tolerance (float): Bound on the truncation error of the series.
    """

    epsilon: float
    i: Site
    j: Site
    tolerance: float = 1e-12

    def __post_init__(self):
        if not abs(self.epsilon) < 1:
            raise ValueError(f"`epsilon` must lie in (-1, 1), got {self.epsilon}.")
        if len(self.i) != len(self.j) or not self.i:
            raise ValueError(
                f"Sites {self.i} and {self.j} must be nonempty and share one dimension."
            )
        if not self.tolerance > 0:
            raise ValueError(f"`tolerance` must be positive, got {self.tolerance}.")
        object.__setattr__(self, "i", tuple(int(c) for c in self.i))
        object.__setattr__(self, "j", tuple(int(c) for c in self.j))

    @property
    def offset(self) -> Site:
        """j - i."""
        return tuple(b - a for a, b in zip(self.i, self.j))


def series_length(epsilon: float, tolerance: float) -> int:
    """
    Smallest N with |epsilon|^{N+1} / (1 - |epsilon|) < tolerance.

    Raises:
        ValueError: If N would exceed 128.
    """
    for n in range(MAX_TERMS + 1):
        if abs(epsilon) ** (n + 1) / (1.0 - abs(epsilon)) < tolerance:
            return n
    raise ValueError(
        f"Tolerance {tolerance} is not reachable within {MAX_TERMS} terms of the "
        f"Neumann series for epsilon={epsilon}."
    )


def covariance(query: CovarianceQuery) -> float:
    """
    Gamma(i, j) by the Neumann series.

    Walk probabilities are propagated on the box of radius N by dynamic
    programming; the n-th term is epsilon^n p_n(j - i) and the terms are added
    with compensated summation.

    Args:
        query (CovarianceQuery): The entry to compute.

    Returns:
        float: Gamma(i, j), within `query.tolerance`.
    """
    terms_count = series_length(query.epsilon, query.tolerance)
    offset = query.offset
    d = len(offset)
    if sum(abs(c) for c in offset) > terms_count:
        return 0.0
    side = 2 * terms_count + 1
    probs = np.zeros((side,) * d)
    centre = (terms_count,) * d
    probs[centre] = 1.0
    target = tuple(terms_count + c for c in offset)
    moves = unit_offsets(d)
    terms = [float(probs[target])]
    for n in range(1, terms_count + 1):
        stepped = np.zeros_like(probs)
        for move in moves:
            stepped += np.roll(probs, shift=move, axis=tuple(range(d)))
        probs = stepped / len(moves)
        terms.append(query.epsilon**n * float(probs[target]))
    return math.fsum(terms)


def box_sites(d: int, radius: int) -> Tuple[Site, ...]:
    """Sites of [-radius, radius]^d in lexicographic order."""
    return tuple(itertools.product(range(-radius, radius + 1), repeat=d))


def dense_covariance(epsilon: float, radius: int = 200, d: int = 1) -> np.ndarray:
    """
    Inverse of I - T restricted to the box [-radius, radius]^d.

    Args:
        epsilon (float): Interaction strength.
        radius (int, optional): Half-side of the box. Defaults to 200.
        d (int, optional): Dimension. Defaults to 1.

    Returns:
        np.ndarray: The (2 radius + 1)^d square matrix, rows and columns in
            the order of `box_sites`.

    Raises:
        ValueError: If the box holds more than 5000 sites.
    """
    sites = box_sites(d, radius)
    if len(sites) > MAX_DENSE_SITES:
        raise ValueError(
            f"The box [-{radius}, {radius}]^{d} holds {len(sites)} sites; the dense "
            f"oracle is limited to {MAX_DENSE_SITES}."
        )
    index = {site: k for k, site in enumerate(sites)}
    operator = np.eye(len(sites))
    weight = epsilon / (2 * d)
    for site, k in index.items():
        for move in unit_offsets(d):
            other = tuple(s + m for s, m in zip(site, move))
            if other in index:
                operator[k, index[other]] -= weight
    return linalg.inv(operator)


def dense_covariance_entry(
    epsilon: float, i: Site, j: Site, radius: int = 200
) -> float:
    """Entry (i, j) of `dense_covariance` for points inside the box."""
    d = len(i)
    sites = box_sites(d, radius)
    index = {site: k for k, site in enumerate(sites)}
    matrix = dense_covariance(epsilon, radius=radius, d=d)
    return float(matrix[index[tuple(i)], index[tuple(j)]])
