# pylint: disable=R0902
"""
Store module
============

Lazy, memoized generation of the Poisson update marks. Every site carries its
own backward stream of marks at negative times with Exp(1) gaps and uniform
labels, produced by a counter-based Philox generator keyed by the master seed
and the site coordinates. Queries in any order reveal the same streams.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.model.lattice import Site

DEFAULT_BLOCK = 64

MarkKey = Tuple[Site, int]


@dataclass(frozen=True)
class UpdateMark:
    """
    One Poisson event of the graphical representation.

    Attributes:
        site (Site): Lattice point carrying the mark.
        index (int): Position in the site's backward stream (0 is the latest).
        time (float): Negative event time.
        u (float): Uniform label in [0, 1).
    """

    site: Site
    index: int
    time: float
    u: float

    @property
    def key(self) -> MarkKey:
        """Identity of the mark inside its store."""
        return (self.site, self.index)

    def order_key(self) -> Tuple[float, Site, int]:
        """Time ordering with ties broken by (site, index)."""
        return (self.time, self.site, self.index)


def zigzag(value: int) -> int:
    """Bijection Z -> N used to turn coordinates into seed words."""
    return 2 * value if value >= 0 else -2 * value - 1


class _SiteStream:
    """Backward stream of one site, extended block by block."""

    def __init__(self, generator: np.random.Generator, block_size: int) -> None:
        self.generator = generator
        self.block_size = block_size
        self.ages = np.empty(0)
        self.us = np.empty(0)
        self.count = 0

    def extend(self) -> None:
        gaps = self.generator.standard_exponential(self.block_size)
        labels = self.generator.random(self.block_size)
        last = self.ages[self.count - 1] if self.count else 0.0
        fresh = last + np.cumsum(gaps)
        if self.count + self.block_size > self.ages.size:
            capacity = max(2 * self.ages.size, self.count + self.block_size)
            ages = np.empty(capacity)
            us = np.empty(capacity)
            ages[: self.count] = self.ages[: self.count]
            us[: self.count] = self.us[: self.count]
            self.ages, self.us = ages, us
        self.ages[self.count : self.count + self.block_size] = fresh
        self.us[self.count : self.count + self.block_size] = labels
        self.count += self.block_size

    def ensure_count(self, count: int) -> None:
        while self.count < count:
            self.extend()

    def ensure_age(self, age: float) -> None:
        while self.count == 0 or self.ages[self.count - 1] < age:
            self.extend()


class MarkStore:
    """
    Memoized per-site streams of update marks.

    Attributes:
        master_seed (int): 64-bit seed of the whole realization.
        shift (Site | None): Translation applied to the generator keys: the
            stream of site x is the one an unshifted store assigns to x + shift.
        stream_key (Tuple[int, ...]): Extra words prepended to every generator
            key, used to derive independent stores from one master seed.
        block_size (int): Marks generated per extension.
    """

    def __init__(
        self,
        master_seed: int,
        shift: Optional[Sequence[int]] = None,
        stream_key: Sequence[int] = (),
        block_size: int = DEFAULT_BLOCK,
        logger: logging.Logger = None,
    ) -> None:
        if not isinstance(master_seed, (int, np.integer)) or master_seed < 0:
            raise ValueError(
                f"`master_seed` must be a nonnegative integer, got {master_seed!r}."
            )
        if block_size < 1:
            raise ValueError(f"`block_size` must be positive, got {block_size}.")
        self.master_seed = int(master_seed)
        self.shift = None if shift is None else tuple(int(c) for c in shift)
        self.stream_key = tuple(int(k) for k in stream_key)
        self.block_size = block_size
        self._streams: Dict[Site, _SiteStream] = {}
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger

    def _stream(self, site: Sequence[int]) -> _SiteStream:
        site = tuple(int(c) for c in site)
        stream = self._streams.get(site)
        if stream is None:
            keyed = site if self.shift is None else tuple(
                s + k for s, k in zip(site, self.shift)
            )
            seed = np.random.SeedSequence(
                entropy=self.master_seed,
                spawn_key=self.stream_key + tuple(zigzag(c) for c in keyed),
            )
            stream = _SiteStream(np.random.Generator(np.random.Philox(seed)), self.block_size)
            self._streams[site] = stream
        return stream

    def mark(self, site: Sequence[int], index: int) -> UpdateMark:
        """The `index`-th latest mark at `site`."""
        if index < 0:
            raise ValueError(f"Stream indices are nonnegative, got {index}.")
        stream = self._stream(site)
        stream.ensure_count(index + 1)
        return UpdateMark(
            tuple(int(c) for c in site),
            int(index),
            -float(stream.ages[index]),
            float(stream.us[index]),
        )

    def last_mark_before(self, site: Sequence[int], t: float) -> UpdateMark:
        """
        rho(site, t): the mark at `site` with the largest time <= t.

        Args:
            site (Sequence[int]): Lattice point.
            t (float): Time bound.

        Returns:
            UpdateMark: The mark.
        """
        stream = self._stream(site)
        age = max(-float(t), 0.0)
        stream.ensure_age(age)
        index = int(np.searchsorted(stream.ages[: stream.count], age, side="left"))
        return self.mark(site, index)

    def children(self, mark: UpdateMark, spec) -> List[UpdateMark]:
        """
        Marks reached from `mark` by one arrow: rho(site + b, time(mark)) for b in B.

        Args:
            mark (UpdateMark): Parent mark.
            spec: Any neighbourhood exposing `neighbors(site)`, such as a
                `NeighborhoodSpec` or a `TorusWindow`.

        Returns:
            List[UpdateMark]: One child per offset, in canonical order.
        """
        return [self.last_mark_before(site, mark.time) for site in spec.neighbors(mark.site)]

    def marks_between(
        self, site: Sequence[int], lower: float, upper: float
    ) -> List[UpdateMark]:
        """Marks at `site` with time in (lower, upper], latest first."""
        if lower >= upper:
            return []
        stream = self._stream(site)
        stream.ensure_age(-lower)
        ages = stream.ages[: stream.count]
        first = int(np.searchsorted(ages, max(-upper, 0.0), side="left"))
        stop = int(np.searchsorted(ages, -lower, side="left"))
        return [self.mark(site, k) for k in range(first, stop)]

    def stream_arrays(self, site: Sequence[int], count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Times and labels of the `count` latest marks at `site`."""
        stream = self._stream(site)
        stream.ensure_count(count)
        return -stream.ages[:count].copy(), stream.us[:count].copy()

    @property
    def sites(self) -> List[Site]:
        """Sites whose stream has been touched."""
        return sorted(self._streams)

    @property
    def marks_generated(self) -> int:
        """Total number of marks materialized so far."""
        return sum(stream.count for stream in self._streams.values())

    def iter_marks(self) -> Iterator[UpdateMark]:
        """Every materialized mark, site by site, latest first."""
        for site in self.sites:
            for index in range(self._streams[site].count):
                yield self.mark(site, index)

    def dump_trace(self, path: Path) -> pd.DataFrame:
        """
        Writes every materialized mark to a CSV file.

        Args:
            path (Path): Output file.

        Returns:
            pd.DataFrame: The table written.
        """
        rows = [
            {
                **{f"x{axis}": c for axis, c in enumerate(mark.site)},
                "stream_index": mark.index,
                "time": mark.time,
                "u": mark.u,
            }
            for mark in self.iter_marks()
        ]
        frame = pd.DataFrame(rows)
        frame.to_csv(path, index=False, float_format="%.17g")
        self.logger.debug("Dumped %d marks to %s", len(frame), path)
        return frame
