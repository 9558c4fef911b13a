# pylint: disable=R0902
"""
Config module
=============

This module contains the `ExperimentConfig` dataclass: one JSON file with flat
keys describing the model, the level schedule, the sampler options and the
replica range of a batch experiment. Command-line flags override file values
through `ExperimentConfig.override`.
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from GMRF_PerfectSampling.marks.cone import DEFAULT_BUDGET
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.model.params import ModelParams
from GMRF_PerfectSampling.model.schedule import LevelSchedule
from GMRF_PerfectSampling.sampling.window import SamplerOptions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything a command needs; two equal configs produce identical outputs.

    Attributes:
        d (int): Lattice dimension.
        epsilon (float): Interaction strength.
        truncation (Optional[float]): Half-width L; None selects the unbounded model.
        a (Optional[float]): Tail constant of the level schedule.
        L1 (Optional[float]): First level of the schedule.
        budget (int): Mark cap per site query.
        delta_fail (float): Certificate bound of the unbounded sampler.
        l (int): Dependence range of the l-dependent approximation.
        replicas (int): Number of replicas.
        replica_start (int): First replica index, for resumable ranges.
        master_seed (int): Experiment seed.
        output_dir (str): Directory receiving CSV, JSON and log files.
        window (List[List[int]]): Sites sampled by `cmd_sample`.
        torus_side (int): Torus side of the particle experiments.
        tau (float): Start time of the particle experiments.
        trials (int): Monte Carlo trials of the duality checks.
        spin_gamma (float): Coalescence probability of the binary system.
        suite (str): Acceptance criteria run by `cmd_validate`.
        suite_scale (float): Multiplier applied to the acceptance sizes.
        force (bool): Run the truncated sampler below the high-noise gate.
    """

    d: int = 1
    epsilon: float = 0.2
    truncation: Optional[float] = 2.0
    a: Optional[float] = None
    L1: Optional[float] = None
    budget: int = DEFAULT_BUDGET
    delta_fail: float = 1e-9
    l: int = 4
    replicas: int = 1000
    replica_start: int = 0
    master_seed: int = 0
    output_dir: str = "output"
    window: List[List[int]] = field(default_factory=lambda: [[0]])
    torus_side: int = 8
    tau: float = -3.0
    trials: int = 100_000
    spin_gamma: float = 0.8
    suite: str = "all"
    suite_scale: float = 1.0
    force: bool = False

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError(f"`replicas` must be positive, got {self.replicas}.")
        if self.replica_start < 0:
            raise ValueError(f"`replica_start` must be nonnegative, got {self.replica_start}.")
        if self.master_seed < 0:
            raise ValueError(f"`master_seed` must be nonnegative, got {self.master_seed}.")
        if (self.a is None) != (self.L1 is None):
            raise ValueError(
                f"`a` and `L1` must be given together, got a={self.a}, L1={self.L1}."
            )
        if not self.window:
            raise ValueError("`window` must contain at least one site.")
        for site in self.window:
            if len(site) != self.d:
                raise ValueError(
                    f"Window site {site} does not have dimension d={self.d}."
                )
        if self.trials < 1:
            raise ValueError(f"`trials` must be positive, got {self.trials}.")
        if not self.suite_scale > 0:
            raise ValueError(f"`suite_scale` must be positive, got {self.suite_scale}.")
        # builds the model and the schedule, raising on invalid values
        _ = self.params
        _ = self.schedule

    @property
    def params(self) -> ModelParams:
        """The model."""
        return ModelParams(self.d, self.epsilon, self.truncation)

    @property
    def schedule(self) -> Optional[LevelSchedule]:
        """The level schedule, None when `a` and `L1` are absent."""
        if self.a is None:
            return None
        return LevelSchedule(a=self.a, L1=self.L1, epsilon=self.epsilon, d=self.d)

    @property
    def sites(self) -> Tuple[Site, ...]:
        """The window as a tuple of sites."""
        return tuple(tuple(int(c) for c in site) for site in self.window)

    @property
    def replica_range(self) -> Tuple[int, int]:
        """[replica_start, replica_start + replicas)."""
        return self.replica_start, self.replica_start + self.replicas

    @property
    def sampling_mode(self) -> str:
        """"truncated" for the truncated model, "gaussian" otherwise."""
        return "truncated" if self.params.is_truncated else "gaussian"

    @property
    def output_path(self) -> Path:
        """`output_dir` as an absolute path."""
        return Path(self.output_dir).absolute()

    def sampler_options(self, l: int = None) -> SamplerOptions:
        """
        Sampler options of the config.

        Args:
            l (int, optional): Overrides the dependence range. Defaults to `l`.

        Returns:
            SamplerOptions: The options, with hypothesis checks enabled.
        """
        return SamplerOptions(
            self.params,
            self.schedule,
            budget=self.budget,
            delta_fail=self.delta_fail,
            l=self.l if l is None else l,
            force=self.force,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Flat dictionary of the config keys."""
        return asdict(self)

    def config_hash(self) -> str:
        """SHA-256 of the sorted-key JSON dump."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def override(self, **overrides: Any) -> "ExperimentConfig":
        """
        Copy with the given keys replaced; None values are ignored.

        Raises:
            ValueError: On an unknown key.
        """
        known = {item.name for item in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ValueError(f"Unknown config keys {unknown}.")
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    @classmethod
    def load(cls, path: Path, **overrides: Any) -> "ExperimentConfig":
        """
        Reads a JSON experiment file.

        Args:
            path (Path): The JSON file, one object with flat keys.
            **overrides: Values taking precedence over the file (None ignored).

        Returns:
            ExperimentConfig: The validated config.

        Raises:
            FileNotFoundError: If `path` does not exist.
            ValueError: On malformed JSON, unknown keys or invalid values.
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"The config file does not exist: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ValueError(f"Malformed config file {path}: {error}") from error
        if not isinstance(raw, dict):
            raise ValueError(f"The config file {path} must hold a JSON object.")
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"Unknown config keys {unknown} in {path}.")
        logger.debug("Loaded config %s with keys %s", path, sorted(raw))
        return cls(**raw).override(**overrides)
