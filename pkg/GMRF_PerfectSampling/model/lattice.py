"""
Lattice module
==============

Neighbourhood geometry of Z^d: the symmetric offset set B, the canonical
(lexicographic) order of the neighbours of a site, and the ball counts used by
the hypothesis checkers.
"""
from dataclasses import dataclass
from math import comb
from typing import List, Sequence, Tuple

Site = Tuple[int, ...]


def unit_offsets(d: int) -> Tuple[Site, ...]:
    """
    The 2d vectors of the unit l1-sphere of Z^d, in lexicographic order.

    Args:
        d (int): Lattice dimension.

    Returns:
        Tuple[Site, ...]: The offsets.
    """
    if d < 1:
        raise ValueError(f"Lattice dimension must be positive, got d={d}.")
    offsets = []
    for axis in range(d):
        for sign in (-1, 1):
            offset = [0] * d
            offset[axis] = sign
            offsets.append(tuple(offset))
    return tuple(sorted(offsets))


@dataclass(frozen=True)
class NeighborhoodSpec:
    """
    Finite symmetric neighbourhood B of the origin.

    Attributes:
        offsets (Tuple[Site, ...]): The offsets, stored in lexicographic order.
    """

    offsets: Tuple[Site, ...]

    def __post_init__(self):
        offsets = tuple(tuple(int(c) for c in offset) for offset in self.offsets)
        if not offsets:
            raise ValueError("A neighbourhood needs at least one offset.")
        dims = {len(offset) for offset in offsets}
        if len(dims) != 1:
            raise ValueError(
                f"All offsets must share one dimension, got dimensions {sorted(dims)}."
            )
        if len(set(offsets)) != len(offsets):
            raise ValueError(f"Offsets must be distinct, got {offsets}.")
        offset_set = set(offsets)
        for offset in offsets:
            if not any(offset):
                raise ValueError("The origin cannot belong to the neighbourhood B.")
            if tuple(-c for c in offset) not in offset_set:
                raise ValueError(
                    f"Neighbourhood must be symmetric: {offset} is present but "
                    f"{tuple(-c for c in offset)} is not."
                )
        object.__setattr__(self, "offsets", tuple(sorted(offsets)))

    @classmethod
    def default(cls, d: int) -> "NeighborhoodSpec":
        """Nearest-neighbour neighbourhood of Z^d (|B| = 2d)."""
        return cls(unit_offsets(d))

    @property
    def dimension(self) -> int:
        """Dimension of the lattice."""
        return len(self.offsets[0])

    @property
    def size(self) -> int:
        """|B|."""
        return len(self.offsets)

    @property
    def radius(self) -> int:
        """Largest l1 norm over B (the `r` of the coding-radius bound)."""
        return max(sum(abs(c) for c in offset) for offset in self.offsets)

    def neighbors(self, site: Sequence[int]) -> List[Site]:
        """Sites `site + b` for b in B, in canonical offset order."""
        if len(site) != self.dimension:
            raise ValueError(
                f"Site {tuple(site)} has dimension {len(site)}, the neighbourhood "
                f"lives in dimension {self.dimension}."
            )
        return [
            tuple(int(s) + b for s, b in zip(site, offset)) for offset in self.offsets
        ]


def neighbors(site: Sequence[int], spec: NeighborhoodSpec) -> List[Site]:
    """
    Returns {site + b : b in B} in lexicographic order of the offsets.

    Args:
        site (Sequence[int]): Lattice point.
        spec (NeighborhoodSpec): The neighbourhood.

    Returns:
        List[Site]: The neighbours of `site`.
    """
    return spec.neighbors(site)


def l1_distance(site: Sequence[int], other: Sequence[int]) -> int:
    """l1 distance between two lattice points."""
    return sum(abs(int(a) - int(b)) for a, b in zip(site, other))


def sphere_count(d: int, k: int) -> int:
    """Number of points of Z^d at l1 norm exactly k."""
    if k == 0:
        return 1
    return sum(2**j * comb(d, j) * comb(k - 1, j - 1) for j in range(1, min(d, k) + 1))


def ball_count(d: int, n: int) -> int:
    """Number of points of Z^d at l1 norm at most n."""
    return sum(sphere_count(d, k) for k in range(n + 1))
