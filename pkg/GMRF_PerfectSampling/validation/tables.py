"""
Tables module
=============

Post-processing producing dataframes for the terminal pass matrices and the
CSV summaries of the experiments.
"""
from typing import Any, Dict, List, Mapping

import numpy as np
import pandas as pd


def generate_check_table(
    checks: Mapping[str, Mapping[str, Any]],
    verdict_name: str = "passes",
    value_name: str = "value",
) -> pd.DataFrame:
    """
    Generates the pass matrix of the hypothesis checks.

    Args:
        checks (Mapping[str, Mapping[str, Any]]): Check name -> {"passes": bool,
            "value": float, ...}; extra keys become a "detail" column.
        verdict_name (str, optional): Column name of the verdict. Defaults to "passes".
        value_name (str, optional): Column name of the headline value.
            Defaults to "value".

    Returns:
        pd.DataFrame: One row per check, indexed by check name.
    """
    rows = []
    for name, outcome in checks.items():
        detail = {key: val for key, val in outcome.items() if key not in ("passes", "value")}
        rows.append(
            {
                "check": name,
                value_name: outcome.get("value"),
                verdict_name: bool(outcome["passes"]),
                "detail": ", ".join(f"{key}={val}" for key, val in detail.items()),
            }
        )
    return pd.DataFrame(rows).set_index("check")


def generate_verdict_table(verdicts: Mapping[str, Mapping[str, Any]]) -> pd.DataFrame:
    """
    Generates the summary of an acceptance run.

    Args:
        verdicts (Mapping[str, Mapping[str, Any]]): Criterion -> {"passes": bool,
            "runtime_s": float, ...}.

    Returns:
        pd.DataFrame: One row per criterion with its verdict and runtime.
    """
    return pd.DataFrame(
        [
            {
                "criterion": name,
                "passes": bool(outcome["passes"]),
                "runtime_s": outcome.get("runtime_s", np.nan),
            }
            for name, outcome in verdicts.items()
        ]
    ).set_index("criterion")


def generate_moment_table(columns: Dict[str, np.ndarray]) -> pd.DataFrame:
    """
    Mean, standard deviation and standard error of each sample column.

    Args:
        columns (Dict[str, np.ndarray]): Column name -> samples.

    Returns:
        pd.DataFrame: One row per column.
    """
    rows: List[Dict[str, Any]] = []
    for name, values in columns.items():
        values = np.asarray(values, dtype=float)
        rows.append(
            {
                "column": name,
                "n": values.size,
                "mean": float(values.mean()),
                "std": float(values.std(ddof=1)) if values.size > 1 else np.nan,
                "se_mean": float(values.std(ddof=1) / np.sqrt(values.size))
                if values.size > 1
                else np.nan,
            }
        )
    return pd.DataFrame(rows).set_index("column")


def format_scientific(dataframe: pd.DataFrame) -> pd.DataFrame:
    """Float cells rendered as `x.xxe+yy` for terminal display."""
    return dataframe.map(lambda x: f"{x:.2e}" if isinstance(x, float) else x)
