"""
Torus module
============

Finite periodic window standing in for Z^d in the particle simulations. The
window exposes the same `neighbors`/`size` interface as `NeighborhoodSpec`, so
mark stores and cones can run on it directly.
"""
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

from GMRF_PerfectSampling.marks.store import MarkStore, UpdateMark
from GMRF_PerfectSampling.model.lattice import Site, unit_offsets


@dataclass(frozen=True)
class TorusWindow:
    """
    The torus (Z / side Z)^d with nearest-neighbour wrapping.

    Attributes:
        d (int): Dimension.
        side (int): Side length, at least 3 so that B wraps injectively.
    """

    d: int
    side: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"`d` must be positive, got {self.d}.")
        if self.side < 3:
            raise ValueError(
                f"`side` must be at least 3 for the neighbourhood to wrap injectively, "
                f"got {self.side}."
            )

    @cached_property
    def sites(self) -> Tuple[Site, ...]:
        """Every site, in lexicographic order."""
        return tuple(itertools.product(range(self.side), repeat=self.d))

    @cached_property
    def _index(self) -> Dict[Site, int]:
        return {site: k for k, site in enumerate(self.sites)}

    @property
    def size(self) -> int:
        """|B|, the number of neighbours of a site."""
        return 2 * self.d

    @property
    def volume(self) -> int:
        """Number of sites, side^d."""
        return self.side**self.d

    @property
    def origin(self) -> Site:
        """The site 0."""
        return (0,) * self.d

    def wrap(self, site: Sequence[int]) -> Site:
        """Representative of `site` in [0, side)^d."""
        if len(site) != self.d:
            raise ValueError(f"Expected a site of dimension {self.d}, got {tuple(site)}.")
        return tuple(int(c) % self.side for c in site)

    def index(self, site: Sequence[int]) -> int:
        """Position of `site` in `sites`."""
        return self._index[self.wrap(site)]

    def neighbors(self, site: Sequence[int]) -> List[Site]:
        """Wrapped neighbours in canonical offset order."""
        return [
            self.wrap([s + b for s, b in zip(site, offset)]) for offset in unit_offsets(self.d)
        ]

    def marks_in_window(
        self, store: MarkStore, tau: float, t_end: float = 0.0
    ) -> List[UpdateMark]:
        """
        Every mark of the window with time in (tau, t_end], in increasing time.

        Args:
            store (MarkStore): Mark source.
            tau (float): Start time, negative.
            t_end (float, optional): End time, at most 0. Defaults to 0.

        Returns:
            List[UpdateMark]: The marks ordered by (time, site, index).
        """
        if t_end > 0:
            raise ValueError(
                f"Marks live at negative times; `t_end` must be <= 0, got {t_end}."
            )
        marks = [mark for site in self.sites for mark in store.marks_between(site, tau, t_end)]
        return sorted(marks, key=UpdateMark.order_key)
