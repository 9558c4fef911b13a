"""CLI test module"""
import json
from pathlib import Path

import pandas as pd
import pytest

from GMRF_PerfectSampling import (
    ExperimentConfig,
    cmd_approx,
    cmd_check,
    cmd_duality,
    cmd_gamma,
    cmd_radius,
    cmd_sample,
    cmd_validate,
    gamma_truncated,
)
from GMRF_PerfectSampling.model.schedule import MAX_LEVEL
from main import main, parse_args


@pytest.fixture(name="truncated_config")
def create_truncated_config(tmp_path: Path) -> ExperimentConfig:
    """Fixture: Truncated model at epsilon = 0.2, L = 2, writing into tmp_path."""
    return ExperimentConfig(replicas=5, output_dir=str(tmp_path), window=[[0], [1]])


@pytest.fixture(name="gaussian_config")
def create_gaussian_config(tmp_path: Path) -> ExperimentConfig:
    """Fixture: Unbounded model with the reference schedule, writing into tmp_path."""
    return ExperimentConfig(
        epsilon=0.01,
        truncation=None,
        a=0.09,
        L1=3.5,
        replicas=3,
        output_dir=str(tmp_path),
    )


def write_config(path: Path, **keys) -> Path:
    """Writes a JSON experiment file and returns its path."""
    path.write_text(json.dumps(keys), encoding="utf-8")
    return path


def read_json(path: Path) -> dict:
    """Loads a JSON report."""
    return json.loads(path.read_text(encoding="utf-8"))


def test_config_defaults(truncated_config, tmp_path):
    """Test: Derived model, mode, sites and replica range."""
    assert truncated_config.params.is_truncated
    assert truncated_config.schedule is None
    assert truncated_config.sampling_mode == "truncated"
    assert truncated_config.sites == ((0,), (1,))
    assert truncated_config.replica_range == (0, 5)
    assert truncated_config.output_path == tmp_path.absolute()
    assert truncated_config.sampler_options(l=6).l == 6


def test_config_gaussian(gaussian_config):
    """Test: The schedule is built from `a`, `L1`, epsilon and d."""
    assert gaussian_config.sampling_mode == "gaussian"
    expected = {"a": 0.09, "L1": 3.5, "epsilon": 0.01, "d": 1}
    assert gaussian_config.schedule.to_dict() == expected


def test_config_load(tmp_path):
    """Test: Loading applies the file, then the non-None overrides."""
    path = write_config(tmp_path / "config.json", epsilon=0.1, replicas=20, master_seed=3)
    config = ExperimentConfig.load(path, replicas=7, master_seed=None)
    assert config.epsilon == 0.1
    assert config.replicas == 7
    assert config.master_seed == 3


def test_config_hash(truncated_config):
    """Test: Equal configs share a hash, any changed key changes it."""
    assert truncated_config.config_hash() == truncated_config.override().config_hash()
    reseeded = truncated_config.override(master_seed=1)
    assert reseeded.config_hash() != truncated_config.config_hash()
    assert len(truncated_config.config_hash()) == 64


@pytest.mark.parametrize(
    "keys",
    [
        {"replicas": 0},
        {"replica_start": -1},
        {"master_seed": -2},
        {"a": 0.09},
        {"window": []},
        {"window": [[0, 0]]},
        {"trials": 0},
        {"suite_scale": 0.0},
        {"epsilon": 1.5},
    ],
)
def test_config_invalid(keys):
    """Test: Invalid values raise a ValueError."""
    with pytest.raises(ValueError):
        ExperimentConfig(**keys)


def test_config_load_errors(tmp_path):
    """Test: Missing files, malformed JSON and unknown keys are rejected."""
    with pytest.raises(FileNotFoundError):
        ExperimentConfig.load(tmp_path / "missing.json")
    malformed = tmp_path / "malformed.json"
    malformed.write_text("{epsilon: ", encoding="utf-8")
    with pytest.raises(ValueError):
        ExperimentConfig.load(malformed)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        ExperimentConfig.load(listed)
    with pytest.raises(ValueError):
        ExperimentConfig.load(write_config(tmp_path / "unknown.json", colour="red"))
    with pytest.raises(ValueError):
        ExperimentConfig().override(colour="red")


def test_cmd_gamma(truncated_config, tmp_path, capsys):
    """Test: gamma of the truncated model clears the high-noise gate."""
    assert cmd_gamma(truncated_config) == 0
    report = read_json(tmp_path / "gamma.json")
    assert report["gamma"] == pytest.approx(gamma_truncated(0.2, 2.0))
    assert report["gate"] == pytest.approx(0.5)
    assert report["gate_passes"] is True
    assert report["config_hash"] == truncated_config.config_hash()
    assert "pass" in capsys.readouterr().out


def test_cmd_gamma_unbounded(gaussian_config, tmp_path):
    """Test: The unbounded model reports gamma = 0 and gamma-tilde."""
    assert cmd_gamma(gaussian_config) == 0
    report = read_json(tmp_path / "gamma.json")
    assert report["gamma"] == 0.0
    assert report["gamma_tilde"] == pytest.approx(0.97167, abs=1e-4)
    assert report["gate_passes"] is False


def test_cmd_check(gaussian_config, tmp_path):
    """Test: The reference schedule passes and the level table is dumped."""
    assert cmd_check(gaussian_config, debug_dump=True) == 0
    report = read_json(tmp_path / "check.json")
    assert report["passes"] is True
    assert set(report["checks"]) == {"H1", "H2", "H3", "growth", "H4"}
    levels = pd.read_csv(tmp_path / "check_levels.csv")
    assert len(levels) == MAX_LEVEL
    assert levels["h2_passes"].all()


def test_cmd_check_invalid(truncated_config, gaussian_config):
    """Test: A missing schedule or epsilon = 0 is rejected."""
    with pytest.raises(ValueError):
        cmd_check(truncated_config)
    with pytest.raises(ValueError):
        cmd_check(gaussian_config.override(epsilon=0.0))


def test_cmd_sample_truncated(truncated_config, tmp_path):
    """Test: One row per replica and site; reruns write identical bytes."""
    assert cmd_sample(truncated_config, debug_dump=True) == 0
    samples_path = tmp_path / "samples_0-5.csv"
    samples = pd.read_csv(samples_path)
    assert len(samples) == 10
    assert list(samples.columns) == ["replica", "seed", "x0", "value"]
    assert samples["value"].abs().max() <= 2.0
    assert len(pd.read_csv(tmp_path / "coding_reports_0-5.csv")) == 10
    assert (tmp_path / "traces" / "marks_0.csv").exists()
    moments = pd.read_csv(tmp_path / "moments_0-5.csv")
    assert list(moments.columns) == ["column", "n", "mean", "std", "se_mean"]
    assert len(moments) == 2
    assert (moments["n"] == 5).all()
    first = samples_path.read_bytes()
    cmd_sample(truncated_config)
    assert samples_path.read_bytes() == first


def test_cmd_sample_gaussian(gaussian_config, tmp_path):
    """Test: The unbounded model samples through the stratified sampler."""
    assert cmd_sample(gaussian_config.override(replica_start=4)) == 0
    samples = pd.read_csv(tmp_path / "samples_4-7.csv")
    assert list(samples["replica"]) == [4, 5, 6]
    assert len(pd.read_csv(tmp_path / "coding_reports_4-7.csv")) == 3


def test_cmd_radius(truncated_config, tmp_path):
    """Test: Few reports leave every tail row unchecked."""
    assert cmd_radius(truncated_config.override(replicas=40)) == 0
    report = read_json(tmp_path / "radius_0-40.json")
    assert report["reports"] + report["failures"] == 40
    assert report["passes"] is True
    curve = pd.read_csv(tmp_path / "radius_tail_0-40.csv")
    assert not curve["flagged"].any()


def test_cmd_duality(truncated_config, tmp_path):
    """Test: Binary duality report and rate table without a schedule."""
    config = truncated_config.override(trials=50, torus_side=5)
    assert cmd_duality(config, debug_dump=True) in (0, 1)
    report = read_json(tmp_path / "duality.json")
    assert report["binary"]["trials"] == 50
    assert report["binary"]["pathwise_violations"] == 0
    assert "level" not in report
    assert len(pd.read_csv(tmp_path / "rates.csv")) == 4
    assert (tmp_path / "spin_forward.csv").exists()
    assert (tmp_path / "duality_marks.csv").exists()


def test_cmd_approx(gaussian_config, tmp_path):
    """Test: Replicas whose cutset fits below the cut never disagree."""
    assert cmd_approx(gaussian_config) == 0
    table = pd.read_csv(tmp_path / "approx_0-3.csv")
    assert list(table["l"]) == [2, 4]
    assert (table["counterexamples"] == 0).all()
    assert table["radius_bound"].between(0, 1).all()


def test_cmd_approx_needs_schedule(truncated_config):
    """Test: The approximation experiment needs the unbounded model's schedule."""
    with pytest.raises(ValueError):
        cmd_approx(truncated_config)


def test_cmd_validate(truncated_config, tmp_path):
    """Test: A scaled-down suite writes its verdicts and schedule."""
    config = truncated_config.override(suite="quadrature,negative_control", suite_scale=1e-6)
    assert cmd_validate(config) == 0
    report = read_json(tmp_path / "validate.json")
    assert list(report["verdicts"]) == ["quadrature", "negative_control"]
    assert report["schedule"]["L1"] == 3.5
    assert report["settings"]["coupler_trials"] == 100


def test_parse_args(tmp_path):
    """Test: Flags map onto config overrides."""
    args = parse_args(
        ["--config", str(tmp_path / "c.json"), "--cmd", "sample", "--seed", "9", "--l", "6"]
    )
    assert args.cmd == "sample"
    assert args.seed == 9
    assert args.l == 6
    assert args.replicas is None
    assert not args.debug_dump
    with pytest.raises(SystemExit):
        parse_args(["--config", "c.json", "--cmd", "unknown"])


def test_main_invalid_config(tmp_path, capsys):
    """Test: A missing or invalid config exits with code 2."""
    assert main(["--config", str(tmp_path / "missing.json"), "--cmd", "gamma"]) == 2
    path = write_config(tmp_path / "config.json", epsilon=2.0)
    assert main(["--config", str(path), "--cmd", "gamma"]) == 2
    assert "Invalid configuration" in capsys.readouterr().err


def test_main_gamma(tmp_path):
    """Test: A valid run writes its report and log into the output directory."""
    path = write_config(tmp_path / "config.json", epsilon=0.2, truncation=2.0)
    out = tmp_path / "out"
    assert main(["--config", str(path), "--cmd", "gamma", "--out", str(out)]) == 0
    assert (out / "gamma.json").exists()
    assert (out / "gamma.log").exists()
