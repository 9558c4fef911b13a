"""
Batch module
============

Container of the replicate payloads produced by a replica runner, with the
replica indices and the seeds they were generated from.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np


@dataclass
class SampleBatch:
    """
    Replicates of one experiment.

    Attributes:
        replicas (List[int]): Replica indices of the successful replicates.
        seeds (List[int]): Seed of each successful replicate.
        payload (List[Any]): One payload per successful replicate (scalar,
            pair, window sample or report).
        failures (Dict[int, str]): Replica index -> failure message.
    """

    replicas: List[int]
    seeds: List[int]
    payload: List[Any]
    failures: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.replicas) == len(self.seeds) == len(self.payload):
            raise ValueError(
                f"Replicas ({len(self.replicas)}), seeds ({len(self.seeds)}) and payload "
                f"({len(self.payload)}) must have the same length."
            )
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("Replicates must be generated from distinct seeds.")
        overlap = set(self.replicas) & set(self.failures)
        if overlap:
            raise ValueError(f"Replicas {sorted(overlap)} are both successful and failed.")

    def __len__(self) -> int:
        return len(self.payload)

    @property
    def seed_range(self) -> tuple:
        """Smallest and largest replica index attempted."""
        attempted = list(self.replicas) + list(self.failures)
        if not attempted:
            return ()
        return (min(attempted), max(attempted))

    def values(self) -> np.ndarray:
        """Payload as a float array (scalars, or one row per pair)."""
        return np.asarray(self.payload, dtype=float)

    def column(self, index: int) -> np.ndarray:
        """Component `index` of tuple payloads."""
        return np.array([item[index] for item in self.payload], dtype=float)

    def merge(self, other: "SampleBatch") -> "SampleBatch":
        """Concatenation of two batches over disjoint replica ranges, in replica order."""
        rows = sorted(
            zip(
                list(self.replicas) + list(other.replicas),
                list(self.seeds) + list(other.seeds),
                list(self.payload) + list(other.payload),
            ),
            key=lambda row: row[0],
        )
        return SampleBatch(
            [row[0] for row in rows],
            [row[1] for row in rows],
            [row[2] for row in rows],
            {**self.failures, **other.failures},
        )
