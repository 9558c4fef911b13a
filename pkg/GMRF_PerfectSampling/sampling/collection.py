"""
CodingReportCollection module
=============================

This module provides the `CodingReportCollection` class, which gathers the
coding reports of many replicas (one report per replica, usually the origin
query). It exposes the depth, radius and mark-count arrays used by the tail
experiments and writes the per-replica CSV table.
"""
from pathlib import Path
from typing import Dict, Iterator, List, Tuple

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.sampling.reports import CodingReport


class CodingReportCollection:
    """
    Coding reports indexed by replica.

    Attributes:
        replica_reports (Dict[int, CodingReport]): Replica index -> report.
    """

    def __init__(self, replica_reports: Dict[int, CodingReport]):
        """
        Initializes the CodingReportCollection.

        Args:
            replica_reports (Dict[int, CodingReport]): A dictionary mapping replica
                indices to their coding reports.
        """
        for key, val in replica_reports.items():
            if not isinstance(key, (int, np.integer)) or isinstance(key, bool):
                raise TypeError(
                    f"Invalid dictionary key: Expected `int`, but got {type(key)} for key "
                    f"`{key}`. Ensure all keys in `replica_reports` are replica indices."
                )
            if not isinstance(val, CodingReport):
                raise TypeError(
                    f"Invalid dictionary value for key `{key}`: Expected `CodingReport`, "
                    f"but got {type(val)}. Ensure all values in `replica_reports` are "
                    "instances of the `CodingReport` class."
                )
        self.replica_reports = dict(sorted(replica_reports.items()))

    def __len__(self) -> int:
        return len(self.replica_reports)

    @property
    def replicas(self) -> List[int]:
        """
        Retrieves the replica indices in increasing order.

        Returns:
            List[int]: The indices.
        """
        return list(self.replica_reports.keys())

    @property
    def reports(self) -> List[CodingReport]:
        """
        Retrieves the reports in replica order.

        Returns:
            List[CodingReport]: The reports.
        """
        return list(self.replica_reports.values())

    def items(self) -> Iterator[Tuple[int, CodingReport]]:
        """
        Provides an iterator over (replica, report) pairs.

        Returns:
            Iterator[Tuple[int, CodingReport]]: The pairs.
        """
        return self.replica_reports.items()

    def __iter__(self) -> Iterator[CodingReport]:
        return iter(self.reports)

    @property
    def depths(self) -> np.ndarray:
        """Max arrow distances, one per replica."""
        return np.array([report.depth for report in self.reports], dtype=int)

    @property
    def radii(self) -> np.ndarray:
        """Coding radii, one per replica."""
        return np.array([report.radius for report in self.reports], dtype=int)

    @property
    def marks(self) -> np.ndarray:
        """Marks revealed, one per replica."""
        return np.array([report.marks_revealed for report in self.reports], dtype=int)

    @property
    def wet_depths(self) -> np.ndarray:
        """Wet chain lengths; -1 where the sampler does not record them."""
        return np.array(
            [-1 if report.wet_depth is None else report.wet_depth for report in self.reports],
            dtype=int,
        )

    def exceedance(self, n: int) -> float:
        """
        Empirical P(depth >= n).

        Args:
            n (int): Depth threshold.

        Returns:
            float: The frequency over the replicas.
        """
        if not self.replica_reports:
            raise ValueError("The collection is empty.")
        return float(np.mean(self.depths >= n))

    def to_frame(self) -> pd.DataFrame:
        """
        One row per replica: replica, radius, depth, marks, wet depth.

        Returns:
            pd.DataFrame: The table.
        """
        return pd.DataFrame(
            {
                "replica": self.replicas,
                "radius": self.radii,
                "depth": self.depths,
                "marks": self.marks,
                "wet_depth": self.wet_depths,
            }
        )

    def write_csv(self, path: Path) -> pd.DataFrame:
        """Writes the table to `path` and returns it."""
        frame = self.to_frame()
        frame.to_csv(path, index=False)
        return frame
