# pylint: disable=R0914
"""Main module"""
import argparse
import logging
import sys
import traceback
from pathlib import Path

from GMRF_PerfectSampling import COMMANDS, ExperimentConfig


def setup_logger(log_file: Path):
    """
    Configures the root logger to write to a log file and, at INFO level, to the console.
    """
    console = logging.StreamHandler()
    console.setLevel(logging.INFO)
    logging.basicConfig(
        level=logging.DEBUG,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_file, mode="w"),
            console,
        ],
    )


def parse_args(argv=None) -> argparse.Namespace:
    """Command-line flags; every flag but --config and --cmd overrides a config key."""
    parser = argparse.ArgumentParser(
        description="Perfect sampling of Gaussian Markov random fields on Z^d."
    )
    parser.add_argument("--config", type=Path, required=True, help="JSON experiment file.")
    parser.add_argument("--cmd", choices=sorted(COMMANDS), required=True, help="Subcommand.")
    parser.add_argument("--replicas", type=int, default=None, help="Number of replicas.")
    parser.add_argument("--seed", type=int, default=None, help="Master seed.")
    parser.add_argument("--out", type=str, default=None, help="Output directory.")
    parser.add_argument("--budget", type=int, default=None, help="Mark cap per site query.")
    parser.add_argument(
        "--delta-fail", type=float, default=None, help="Dryness certificate bound."
    )
    parser.add_argument("--l", type=int, default=None, help="Dependence range l.")
    parser.add_argument(
        "--debug-dump",
        action="store_true",
        help="Write mark traces and trajectories next to the outputs.",
    )
    return parser.parse_args(argv)


def main(argv=None) -> int:
    """Main"""
    args = parse_args(argv)
    try:
        config = ExperimentConfig.load(
            args.config,
            replicas=args.replicas,
            master_seed=args.seed,
            output_dir=args.out,
            budget=args.budget,
            delta_fail=args.delta_fail,
            l=args.l,
        )
    except (FileNotFoundError, TypeError, ValueError) as error:
        print(f"Invalid configuration: {error}", file=sys.stderr)
        return 2
    output_path = config.output_path
    output_path.mkdir(parents=True, exist_ok=True)

    # Setup logger
    setup_logger(output_path / f"{args.cmd}.log")
    logger = logging.getLogger(__name__)
    logger.debug("Running %s with config hash %s", args.cmd, config.config_hash())

    try:
        return COMMANDS[args.cmd](config, debug_dump=args.debug_dump, logger=logger)
    except Exception as exception:  # pylint: disable=W0718
        logger.error("An error occurred during processing: %s", exception)
        logger.error("%s", traceback.format_exc())
        return 1


if __name__ == "__main__":
    sys.exit(main())
