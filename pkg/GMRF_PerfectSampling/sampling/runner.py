# pylint: disable=R0913
"""
Runner module
=============

Drives a per-replica function over a range of replica indices. Each replica
receives its own seed derived from the master seed and its index, so a range
can be split across invocations and reassembled. Replicas run sequentially or
in parallel with joblib; failures are recorded per replica.
"""
import logging
import os
from typing import Any, Callable, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from GMRF_PerfectSampling.errors import PerfectSamplingError
from GMRF_PerfectSampling.validation.batch import SampleBatch

WORKERS_ENV = "GMRF_WORKERS"

ReplicaFunction = Callable[[int, int], Any]


def replica_seed(master_seed: int, index: int) -> int:
    """
    Seed of replica `index`, drawn from SeedSequence(master_seed, spawn_key=(index,)).

    Args:
        master_seed (int): Experiment seed.
        index (int): Replica index, nonnegative.

    Returns:
        int: A 64-bit seed.
    """
    if index < 0:
        raise ValueError(f"Replica indices are nonnegative, got {index}.")
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def worker_count(default: int = 1) -> int:
    """Number of workers read from the GMRF_WORKERS environment variable."""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw == "":
        return default
    try:
        workers = int(raw)
    except ValueError as error:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}.") from error
    if workers == 0:
        raise ValueError(f"{WORKERS_ENV} must be nonzero.")
    return workers


def _run_one(func: ReplicaFunction, index: int, seed: int) -> Tuple[int, int, Any, str]:
    try:
        return index, seed, func(index, seed), None
    except PerfectSamplingError as error:
        return index, seed, None, f"{type(error).__name__}: {error}"


class ReplicaRunner:
    """
    Replica driver.

    Attributes:
        func (ReplicaFunction): Called as func(index, seed) for every replica.
        master_seed (int): Experiment seed.
        workers (int): joblib worker count; 1 runs in-process.
        description (str): tqdm label.
        logger (logging.Logger): Logger instance.
    """

    def __init__(
        self,
        func: ReplicaFunction,
        master_seed: int,
        workers: int = None,
        description: str = "Replicas",
        logger: logging.Logger = None,
    ) -> None:
        """
        Initializes the runner.

        Args:
            func (ReplicaFunction): Per-replica function.
            master_seed (int): Experiment seed.
            workers (int, optional): Worker count. Defaults to GMRF_WORKERS or 1.
            description (str, optional): Progress-bar label. Defaults to "Replicas".
            logger (logging.Logger, optional): Logger instance. If None, a default
                logger is created.
        """
        if not isinstance(master_seed, (int, np.integer)) or master_seed < 0:
            raise ValueError(
                f"`master_seed` must be a nonnegative integer, got {master_seed!r}."
            )
        self.func = func
        self.master_seed = int(master_seed)
        self.workers = worker_count() if workers is None else workers
        self.description = description
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger

    def __call__(self, start: int, stop: int) -> SampleBatch:
        """
        Runs replicas start, ..., stop - 1.

        Args:
            start (int): First replica index.
            stop (int): One past the last replica index.

        Returns:
            SampleBatch: Payloads of the successful replicas and the failures.
        """
        if not 0 <= start <= stop:
            raise ValueError(f"Invalid replica range [{start}, {stop}).")
        jobs = [(index, replica_seed(self.master_seed, index)) for index in range(start, stop)]
        self.logger.debug(
            "Running replicas [%d, %d) with %d worker(s)", start, stop, self.workers
        )
        if self.workers == 1:
            outcomes = [
                _run_one(self.func, index, seed)
                for index, seed in tqdm(jobs, desc=self.description, leave=False)
            ]
        else:
            outcomes = Parallel(n_jobs=self.workers)(
                delayed(_run_one)(self.func, index, seed)
                for index, seed in tqdm(jobs, desc=self.description, leave=False)
            )
        replicas, seeds, payload, failures = [], [], [], {}
        for index, seed, result, failure in outcomes:
            if failure is not None:
                self.logger.debug("Replica %d failed: %s", index, failure)
                failures[index] = failure
                continue
            replicas.append(index)
            seeds.append(seed)
            payload.append(result)
        if failures:
            self.logger.warning(
                "%d of %d replicas failed; see the failure table", len(failures), len(jobs)
            )
        return SampleBatch(replicas, seeds, payload, failures)
