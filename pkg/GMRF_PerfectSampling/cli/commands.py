# pylint: disable=R0913, R0914
"""
Commands module
===============

The batch subcommands. Each command reads an `ExperimentConfig`, writes its CSV
and JSON outputs into the configured output directory, prints a summary table
and returns the process exit code.

Every JSON report embeds the config hash; CSV floats are written with 17
significant digits so reruns are byte-identical.
"""
import json
import logging
import math
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Sequence

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.analytics.coupling_mass import (
    gamma_tilde,
    gamma_truncated,
    gamma_unbounded,
    lipschitz_eta_bound,
)
from GMRF_PerfectSampling.analytics.bounds import check_h2
from GMRF_PerfectSampling.cli.config import ExperimentConfig
from GMRF_PerfectSampling.errors import ScheduleError
from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.hypotheses import (
    check_growth,
    check_h1,
    check_h3,
    check_h4,
)
from GMRF_PerfectSampling.model.schedule import MAX_LEVEL
from GMRF_PerfectSampling.particles.duality import duality_check_binary, duality_check_level
from GMRF_PerfectSampling.particles.level import (
    backward_dual_level,
    estimate_level_rates,
    forward_level,
    initial_spins,
)
from GMRF_PerfectSampling.particles.spin import (
    backward_dual_binary,
    forward_spin,
    spin_rate_table,
)
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.sampling.collection import CodingReportCollection
from GMRF_PerfectSampling.sampling.gaussian import validate_schedule
from GMRF_PerfectSampling.sampling.runner import ReplicaRunner
from GMRF_PerfectSampling.sampling.window import SamplerOptions, sample_window
from GMRF_PerfectSampling.validation.acceptance import (
    REFERENCE_SCHEDULE,
    SuiteSettings,
    approximation_replica,
    run_suite,
)
from GMRF_PerfectSampling.validation.batch import SampleBatch
from GMRF_PerfectSampling.validation.statistics import (
    radius_tv_bound,
    tail_curve,
    wilson_interval,
)
from GMRF_PerfectSampling.validation.tables import (
    format_scientific,
    generate_check_table,
    generate_moment_table,
    generate_verdict_table,
)

FLOAT_FORMAT = "%.17g"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"Object of type {type(value)} is not JSON serializable.")


def write_json(
    path: Path, payload: Dict[str, Any], config: ExperimentConfig
) -> Dict[str, Any]:
    """
    Writes `payload` with the config and its hash.

    Args:
        path (Path): Output file.
        payload (Dict[str, Any]): Report body.
        config (ExperimentConfig): The config the report was produced from.

    Returns:
        Dict[str, Any]: The document written.
    """
    document = {"config": config.to_dict(), "config_hash": config.config_hash(), **payload}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True, indent=2, default=_json_default)
    return document


def write_csv(path: Path, frame: pd.DataFrame) -> pd.DataFrame:
    """Writes `frame` with a header row and 17-digit floats."""
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return frame


def _prepare_output(config: ExperimentConfig) -> Path:
    output = config.output_path
    output.mkdir(parents=True, exist_ok=True)
    return output


def _range_suffix(config: ExperimentConfig) -> str:
    start, stop = config.replica_range
    return f"{start}-{stop}"


def _require_schedule(config: ExperimentConfig, command: str):
    if config.schedule is None:
        raise ValueError(f"{command} needs the schedule keys `a` and `L1`.")
    return config.schedule


def _sample_replica(
    options: SamplerOptions,
    mode: str,
    window: Sequence,
    dump_dir: Path,
    index: int,
    seed: int,
):
    store = MarkStore(seed)
    sample = sample_window(store, window, mode, options)
    if dump_dir is not None:
        store.dump_trace(dump_dir / f"marks_{index}.csv")
    return sample


def _failure_frame(batch: SampleBatch) -> pd.DataFrame:
    return pd.DataFrame(
        {"replica": list(batch.failures), "error": list(batch.failures.values())},
        columns=["replica", "error"],
    )


def _prebuilt_options(config: ExperimentConfig, mode: str, l: int = None) -> SamplerOptions:
    """Options whose coupler is built and whose schedule is validated once."""
    options = config.sampler_options(l)
    options.require(mode)
    if mode != "truncated" and config.epsilon != 0:
        validate_schedule(options.schedule, options.schedule.b_size)
        options.check_hypotheses = False
    options.get_coupler(mode)
    return options


def cmd_gamma(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Prints the maximal coupling probability and the high-noise gate.

    Args:
        config (ExperimentConfig): The experiment.
        debug_dump (bool, optional): Unused. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0.
    """
    del debug_dump
    if logger is None:
        logger = logging.getLogger(__name__)
    params = config.params
    rows: Dict[str, Any] = {"gate": params.high_noise_gate}
    if params.is_truncated:
        rows["gamma"] = gamma_truncated(params.epsilon, params.truncation)
        rows["eta_bound"] = lipschitz_eta_bound(params.epsilon, params.truncation)
        remark = "truncated model"
    else:
        rows["gamma"] = gamma_unbounded(params.epsilon)
        remark = (
            "unbounded model: gamma vanishes for every epsilon != 0, the stratified "
            "coupling runs on gamma-tilde instead"
        )
        if config.schedule is not None:
            rows["gamma_tilde"] = gamma_tilde(params.epsilon, config.L1)
            rows["q0"] = config.schedule.level_prob(0)
    passes = rows["gamma"] > rows["gate"]
    table = pd.DataFrame([{"quantity": k, "value": v} for k, v in rows.items()])
    print(table.to_markdown(index=False))
    print(f"High-noise gate gamma > 1 - 1/|B|: {'pass' if passes else 'fail'} ({remark})")
    write_json(
        _prepare_output(config) / "gamma.json",
        {**rows, "gate_passes": passes, "remark": remark},
        config,
    )
    logger.info("gamma=%.6f, gate %.6f, passes %s", rows["gamma"], rows["gate"], passes)
    return 0


def cmd_check(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Runs the H3, growth, H2 and H4 checks and prints the pass matrix; H1 is
    printed as an extra row but does not enter the exit code.

    Args:
        config (ExperimentConfig): The experiment, with a schedule.
        debug_dump (bool, optional): Write the per-level H2 verdicts and H4
            bounds to CSV. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0 iff the four checks pass.

    Raises:
        ValueError: If the schedule is missing or epsilon = 0.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    schedule = _require_schedule(config, "cmd_check")
    if schedule.epsilon == 0:
        raise ValueError(
            "epsilon = 0 makes the field i.i.d. standard normal and the hypotheses "
            "moot; cmd_sample runs that case in i.i.d. mode."
        )
    params = config.params
    checks: Dict[str, Dict[str, Any]] = {}
    h1 = check_h1(schedule, params)
    checks["H1"] = {"passes": h1.passes, "value": h1.gamma_tilde, "q0": h1.q0, "gated": False}
    h2 = [check_h2(schedule, n) for n in range(1, MAX_LEVEL + 1)]
    first_h2 = next((n for n, ok in enumerate(h2, 1) if not ok), None)
    checks["H2"] = {"passes": all(h2), "value": sum(h2), "first_violation": first_h2}
    try:
        h3 = check_h3(schedule, params.neighborhood.size)
        checks["H3"] = {"passes": h3.passes, "value": h3.sum4, "t_exists": h3.t_exists}
    except ScheduleError as error:
        checks["H3"] = {"passes": False, "value": math.nan, "error": str(error)}
    growth = check_growth(schedule)
    checks["growth"] = {
        "passes": growth.passes,
        "value": growth.min_slack,
        "first_violation": growth.first_violation,
        "tail_certified": growth.tail_certified,
    }
    h4 = check_h4(schedule, params)
    checks["H4"] = {"passes": h4.passes, "value": h4.bounds[-1], "decreasing": h4.decreasing}
    table = generate_check_table(checks)
    print(table.to_markdown())
    passes = all(checks[name]["passes"] for name in ("H2", "H3", "growth", "H4"))
    output = _prepare_output(config)
    write_json(output / "check.json", {"checks": checks, "passes": passes}, config)
    if debug_dump:
        write_csv(
            output / "check_levels.csv",
            pd.DataFrame(
                {
                    "n": range(1, MAX_LEVEL + 1),
                    "h2_passes": h2,
                    "h4_bound": h4.bounds,
                    "growth_slack": growth.slacks,
                }
            ),
        )
    logger.info("Hypotheses check: %s", "pass" if passes else "fail")
    return 0 if passes else 1


def cmd_sample(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Samples the window for every replica of the configured range and writes
    the samples, the coding reports, the failures and the per-site moments.

    Args:
        config (ExperimentConfig): The experiment.
        debug_dump (bool, optional): Write every replica's mark trace. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0; replica failures are recorded, not fatal.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    mode = config.sampling_mode
    options = _prebuilt_options(config, mode)
    output = _prepare_output(config)
    dump_dir = None
    if debug_dump:
        dump_dir = output / "traces"
        dump_dir.mkdir(exist_ok=True)
    runner = ReplicaRunner(
        partial(_sample_replica, options, mode, config.sites, dump_dir),
        config.master_seed,
        description="Samples",
        logger=logger,
    )
    batch = runner(*config.replica_range)
    samples, reports = [], []
    for replica, seed, sample in zip(batch.replicas, batch.seeds, batch.payload):
        frame = sample.to_frame()
        frame.insert(0, "seed", seed)
        frame.insert(0, "replica", replica)
        samples.append(frame)
        reports.extend({"replica": replica, **report.to_dict()} for report in sample.reports)
    suffix = _range_suffix(config)
    columns = ["replica", "seed"] + [f"x{axis}" for axis in range(config.d)] + ["value"]
    write_csv(
        output / f"samples_{suffix}.csv",
        pd.concat(samples, ignore_index=True) if samples else pd.DataFrame(columns=columns),
    )
    write_csv(output / f"coding_reports_{suffix}.csv", pd.DataFrame(reports))
    write_csv(output / f"failures_{suffix}.csv", _failure_frame(batch))
    if batch.payload:
        values = np.array([sample.as_array() for sample in batch.payload], dtype=float)
        moments = generate_moment_table(
            {str(site): values[:, k] for k, site in enumerate(batch.payload[0].window)}
        )
        write_csv(output / f"moments_{suffix}.csv", moments.reset_index())
        print(format_scientific(moments).to_markdown())
    logger.info(
        "Sampled %d replicas in %s mode, %d failures", len(batch), mode, len(batch.failures)
    )
    return 0


def _depth_tail_table(collection: CodingReportCollection) -> pd.DataFrame:
    depths, wet, radii = collection.depths, collection.wet_depths, collection.radii
    rows = []
    for n in range(1, max(int(depths.max()), 1) + 1):
        events = int(np.sum(depths >= n))
        low, high = wilson_interval(events, depths.size)
        rows.append(
            {
                "n": n,
                "events": events,
                "empirical": events / depths.size,
                "wilson_low": low,
                "wilson_high": high,
                "wet_empirical": float(np.mean(wet >= n)),
                "radius_empirical": float(np.mean(radii >= n)),
            }
        )
    return pd.DataFrame(rows)


def cmd_radius(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Coding-radius tail experiment at the origin: the truncated model is
    compared with |B|^{n-1} (1 - gamma)^n, the unbounded model reports the
    depth, wet-chain and radius tails.

    Args:
        config (ExperimentConfig): The experiment.
        debug_dump (bool, optional): Unused. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0, or 1 when a checked row of the truncated tail exceeds the bound.
    """
    del debug_dump
    if logger is None:
        logger = logging.getLogger(__name__)
    mode = config.sampling_mode
    options = _prebuilt_options(config, mode)
    batch = ReplicaRunner(
        partial(_sample_replica, options, mode, ((0,) * config.d,), None),
        config.master_seed,
        description="Coding reports",
        logger=logger,
    )(*config.replica_range)
    collection = CodingReportCollection(
        {replica: sample.reports[0] for replica, sample in zip(batch.replicas, batch.payload)}
    )
    if not len(collection):
        raise ValueError("Every replica failed; no coding report to analyse.")
    output = _prepare_output(config)
    suffix = _range_suffix(config)
    collection.write_csv(output / f"coding_reports_{suffix}.csv")
    if mode == "truncated":
        gamma = options.coupler.gamma
        b_size = config.params.neighborhood.size
        curve = tail_curve(collection, r=1, gamma=gamma, b_size=b_size)
        passes = not bool(curve["flagged"].any())
    else:
        gamma = 0.0
        curve = _depth_tail_table(collection)
        passes = True
    write_csv(output / f"radius_tail_{suffix}.csv", curve)
    print(format_scientific(curve).to_markdown(index=False))
    write_json(
        output / f"radius_{suffix}.json",
        {
            "gamma": gamma,
            "reports": len(collection),
            "failures": len(batch.failures),
            "mean_depth": float(collection.depths.mean()),
            "mean_radius": float(collection.radii.mean()),
            "passes": passes,
        },
        config,
    )
    logger.info("Radius tail over %d reports: %s", len(collection), passes)
    return 0 if passes else 1


def _dump_duality_traces(
    output: Path, window: TorusWindow, config: ExperimentConfig
) -> None:
    store = MarkStore(config.master_seed, stream_key=(0, 0))
    forward_spin(window, config.tau, config.spin_gamma, store).dump(
        output / "spin_forward.csv"
    )
    backward_dual_binary(window, config.tau, config.spin_gamma, store).dump(
        output / "spin_dual.csv"
    )
    if config.schedule is not None:
        start = initial_spins(window, 1)
        forward_level(window, config.tau, start, config.schedule, store).dump(
            output / "level_forward.csv"
        )
        backward_dual_level(window, config.tau, config.schedule, store).dump(
            output / "level_dual.csv"
        )
    store.dump_trace(output / "duality_marks.csv")


def cmd_duality(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Duality checks of the binary system and, when a schedule is given, of the
    level system, plus the frozen-neighbour rate tables.

    Args:
        config (ExperimentConfig): The experiment.
        debug_dump (bool, optional): Write the trajectories of trial 0 and
            their marks. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0 iff every identity and pathwise check passes.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    window = TorusWindow(config.d, config.torus_side)
    output = _prepare_output(config)
    results = {
        "binary": duality_check_binary(
            window, config.tau, config.spin_gamma, config.trials, config.master_seed
        ).to_dict()
    }
    rates = [
        spin_rate_table(MarkStore(config.master_seed, stream_key=(2,)), config.spin_gamma)
    ]
    if config.schedule is not None:
        results["level"] = duality_check_level(
            window, config.tau, 1, config.schedule, config.trials, config.master_seed
        ).to_dict()
        rates.extend(
            estimate_level_rates(
                MarkStore(config.master_seed, stream_key=(3,)), (m,), config.schedule, m
            )
            for m in (0, 1, 2)
        )
    else:
        logger.warning("No schedule given; the level duality check is skipped.")
    passes = all(
        result["passes"]
        and result["pathwise_violations"] == 0
        and result["form_mismatches"] == 0
        for result in results.values()
    )
    table = pd.DataFrame(results).T
    print(table.to_markdown())
    write_csv(output / "rates.csv", pd.concat(rates, ignore_index=True))
    write_json(output / "duality.json", {**results, "passes": passes}, config)
    if debug_dump:
        _dump_duality_traces(output, window, config)
    logger.info("Duality checks: %s", "pass" if passes else "fail")
    return 0 if passes else 1


def cmd_approx(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Compares X_0 with its l-dependent truncations Y_0 for l = 2, 4, ..., `l`.

    Args:
        config (ExperimentConfig): The experiment, unbounded with a schedule.
        debug_dump (bool, optional): Unused. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0 iff no replica whose cutset fits below the cut disagrees.
    """
    del debug_dump
    if logger is None:
        logger = logging.getLogger(__name__)
    _require_schedule(config, "cmd_approx")
    options = _prebuilt_options(config, "gaussian")
    ls = tuple(range(2, max(config.l, 2) + 1, 2))
    far_site = (2 * (max(ls) // 2) + 1,) + (0,) * (config.d - 1)
    batch = ReplicaRunner(
        partial(approximation_replica, options, ls, far_site),
        config.master_seed,
        description="Approximation",
        logger=logger,
    )(*config.replica_range)
    if not len(batch):
        raise ValueError("Every replica failed; nothing to compare.")
    radii = [row["radius"] for row in batch.payload]
    rows = []
    for l in ls:
        disagreements = sum(1 for row in batch.payload if row["x0"] != row["y0"][l])
        fitting = [row for row in batch.payload if row["cut_reach"] < l // 2]
        low, high = wilson_interval(disagreements, len(batch))
        rows.append(
            {
                "l": l,
                "disagreements": disagreements,
                "frequency": disagreements / len(batch),
                "wilson_low": low,
                "wilson_high": high,
                "radius_bound": radius_tv_bound(radii, 1, l),
                "fitting_events": len(fitting),
                "counterexamples": sum(1 for row in fitting if row["x0"] != row["y0"][l]),
            }
        )
    table = pd.DataFrame(rows)
    output = _prepare_output(config)
    suffix = _range_suffix(config)
    write_csv(output / f"approx_{suffix}.csv", table)
    print(table.to_markdown(index=False))
    passes = int(table["counterexamples"].sum()) == 0
    write_json(
        output / f"approx_{suffix}.json",
        {
            "rows": table.to_dict(orient="records"),
            "failures": len(batch.failures),
            "passes": passes,
        },
        config,
    )
    logger.info("l-dependent approximation over %d replicas: %s", len(batch), passes)
    return 0 if passes else 1


def cmd_validate(
    config: ExperimentConfig, debug_dump: bool = False, logger: logging.Logger = None
) -> int:
    """
    Runs the acceptance suite selected by `suite` and writes the verdicts.

    The unbounded experiments use the config's schedule when the config
    describes the unbounded model with one, the reference schedule otherwise.

    Args:
        config (ExperimentConfig): The experiment.
        debug_dump (bool, optional): Unused. Defaults to False.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        int: 0 iff every selected criterion passes.
    """
    del debug_dump
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = SuiteSettings(
        duality_trials=config.trials,
        torus_side=config.torus_side,
        tau=config.tau,
        spin_gamma=config.spin_gamma,
    )
    if config.suite_scale != 1.0:
        settings = settings.scaled(config.suite_scale)
    schedule = config.schedule
    if schedule is None or config.params.is_truncated:
        schedule = REFERENCE_SCHEDULE
    verdicts = run_suite(config.suite, settings, config.master_seed, schedule, logger)
    passes = all(outcome["passes"] for outcome in verdicts.values())
    print(generate_verdict_table(verdicts).to_markdown())
    write_json(
        _prepare_output(config) / "validate.json",
        {
            "settings": settings.to_dict(),
            "schedule": schedule.to_dict(),
            "verdicts": verdicts,
            "passes": passes,
        },
        config,
    )
    return 0 if passes else 1


Command = Callable[..., int]

COMMANDS: Dict[str, Command] = {
    "gamma": cmd_gamma,
    "check": cmd_check,
    "sample": cmd_sample,
    "radius": cmd_radius,
    "duality": cmd_duality,
    "approx": cmd_approx,
    "validate": cmd_validate,
}
