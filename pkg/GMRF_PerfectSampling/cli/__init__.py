# pylint: disable=C0114
from .commands import (
    COMMANDS,
    cmd_approx,
    cmd_check,
    cmd_duality,
    cmd_gamma,
    cmd_radius,
    cmd_sample,
    cmd_validate,
    write_csv,
    write_json,
)
from .config import ExperimentConfig
