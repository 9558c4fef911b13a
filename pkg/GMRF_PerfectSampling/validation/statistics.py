# pylint: disable=R0902, R0913
"""
Statistics module
=================

Estimators and hypothesis tests shared by the acceptance experiments:
Kolmogorov-Smirnov against a reference CDF, discretized total variation with
a bootstrap standard error, the conditional-mean regression, coding-depth tail
curves with Wilson intervals, and single-site independence tests.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Iterable, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

logger = logging.getLogger(__name__)

KS_CONSTANTS = {0.01: 1.628, 0.05: 1.358}
MAX_TV_DIMENSION = 2
MAX_TV_BINS = 32


def ks_constant(alpha: float) -> float:
    """c(alpha) of the asymptotic KS threshold c(alpha) / sqrt(N)."""
    if alpha in KS_CONSTANTS:
        return KS_CONSTANTS[alpha]
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"`alpha` must lie in (0, 1), got {alpha}.")
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


@dataclass
class KSResult:
    """
    One-sample Kolmogorov-Smirnov outcome.

    Attributes:
        statistic (float): sup |F_N - F|.
        threshold (float): c(alpha) / sqrt(N).
        passes (bool): statistic <= threshold.
        n (int): Sample size.
        alpha (float): Level.
    """

    statistic: float
    threshold: float
    passes: bool
    n: int
    alpha: float

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)


def ks_test(
    samples: Sequence[float], cdf: Callable[[np.ndarray], np.ndarray], alpha: float = 0.01
) -> KSResult:
    """
    One-sample KS test of `samples` against `cdf`.

    Args:
        samples (Sequence[float]): At least 100 values.
        cdf (Callable): Vectorized monotone CDF.
        alpha (float, optional): Level. Defaults to 0.01.

    Returns:
        KSResult: Statistic, threshold and verdict.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size < 100:
        raise ValueError(f"The KS test needs at least 100 samples, got {samples.size}.")
    statistic = float(stats.kstest(samples, cdf).statistic)
    threshold = ks_constant(alpha) / math.sqrt(samples.size)
    return KSResult(statistic, threshold, statistic <= threshold, int(samples.size), alpha)


@dataclass
class TVEstimate:
    """
    Discretized total-variation distance.

    Attributes:
        tv (float): Half L1 distance between the binned empirical laws.
        se (float): Bootstrap standard error.
        bins (int): Bins per axis.
        floor (float): Expected estimate when both batches share one law,
            the binning noise floor.
    """

    tv: float
    se: float
    bins: int
    floor: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)

    def consistent(self, width: float = 3.0) -> bool:
        """Whether the estimate stays below the floor plus `width` SE."""
        return self.tv <= self.floor + width * self.se


def _as_columns(samples) -> np.ndarray:
    array = np.asarray(samples, dtype=float)
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2:
        raise ValueError(f"Expected one row per window sample, got shape {array.shape}.")
    return array


def _binned_tv(a: np.ndarray, b: np.ndarray, edges) -> float:
    hist_a, _ = np.histogramdd(a, bins=edges)
    hist_b, _ = np.histogramdd(b, bins=edges)
    return 0.5 * float(np.abs(hist_a / a.shape[0] - hist_b / b.shape[0]).sum())


def tv_discretized(
    samples_a, samples_b, bins: int = 16, bootstrap: int = 200, seed: int = 0
) -> TVEstimate:
    """
    Half L1 distance between binned empirical joint laws of windows of at most
    two sites, on shared bins spanning the pooled range (outermost bins open).

    Args:
        samples_a: Array (N,) or (N, k) of window samples, k <= 2.
        samples_b: Array with the same k.
        bins (int, optional): Bins per axis, at most 32. Defaults to 16.
        bootstrap (int, optional): Bootstrap resamples. Defaults to 200.
        seed (int, optional): Bootstrap seed. Defaults to 0.

    Returns:
        TVEstimate: The estimate and its bootstrap SE.

    Raises:
        ValueError: On windows of more than two sites or more than 32 bins.
    """
    a, b = _as_columns(samples_a), _as_columns(samples_b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"Window sizes differ: {a.shape[1]} and {b.shape[1]}.")
    if a.shape[1] > MAX_TV_DIMENSION:
        raise ValueError(
            f"Discretized TV is limited to windows of {MAX_TV_DIMENSION} sites, "
            f"got {a.shape[1]}."
        )
    if not 1 <= bins <= MAX_TV_BINS:
        raise ValueError(f"`bins` must lie in [1, {MAX_TV_BINS}], got {bins}.")
    pooled = np.vstack([a, b])
    edges = []
    for axis in range(a.shape[1]):
        inner = np.linspace(pooled[:, axis].min(), pooled[:, axis].max(), bins + 1)
        inner[0], inner[-1] = -np.inf, np.inf
        edges.append(inner)
    tv = _binned_tv(a, b, edges)
    rng = np.random.default_rng(seed)
    replicates = [
        _binned_tv(
            a[rng.integers(0, a.shape[0], a.shape[0])],
            b[rng.integers(0, b.shape[0], b.shape[0])],
            edges,
        )
        for _ in range(bootstrap)
    ]
    se = float(np.std(replicates, ddof=1)) if bootstrap > 1 else 0.0
    pooled_hist, _ = np.histogramdd(pooled, bins=edges)
    cells = pooled_hist.ravel() / pooled.shape[0]
    # 0.5 sum E|N(0, p (1/n_a + 1/n_b))|
    floor = 0.5 * math.sqrt(2.0 / math.pi) * float(
        np.sum(np.sqrt(cells * (1.0 / a.shape[0] + 1.0 / b.shape[0])))
    )
    return TVEstimate(tv, se, bins, floor)


@dataclass
class RegressionResult:
    """
    Least squares of the centre value on the neighbour sum.

    Attributes:
        slope (float): Fitted slope, expected epsilon / 2d.
        intercept (float): Fitted intercept, expected 0.
        slope_se (float): Standard error of the slope.
        intercept_se (float): Standard error of the intercept.
        residual_variance (float): Expected 1 for the unbounded model.
        residual_variance_se (float): Its standard error under normal residuals.
        n (int): Sample size.
    """

    slope: float
    intercept: float
    slope_se: float
    intercept_se: float
    residual_variance: float
    residual_variance_se: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)

    def slope_matches(self, expected: float, width: float = 3.0) -> bool:
        """Whether the slope lies within `width` SE of `expected`."""
        return abs(self.slope - expected) <= width * self.slope_se

    def intercept_matches(self, expected: float = 0.0, width: float = 3.0) -> bool:
        """Whether the intercept lies within `width` SE of `expected`."""
        return abs(self.intercept - expected) <= width * self.intercept_se


def conditional_regression(
    centers: Sequence[float], neighbor_sums: Sequence[float]
) -> RegressionResult:
    """
    Regresses X_0 on S = sum of its neighbours.

    Args:
        centers (Sequence[float]): X_0 per window sample.
        neighbor_sums (Sequence[float]): S per window sample.

    Returns:
        RegressionResult: Slope, intercept, residual variance and their SEs.
    """
    x = np.asarray(neighbor_sums, dtype=float)
    y = np.asarray(centers, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(
            f"Expected two 1-d arrays of equal length, got {x.shape} and {y.shape}."
        )
    if x.size < 3:
        raise ValueError(f"The regression needs at least 3 samples, got {x.size}.")
    if x.size < 10_000:
        logger.debug("Conditional regression on only %d samples", x.size)
    fit = stats.linregress(x, y)
    residuals = y - (fit.intercept + fit.slope * x)
    variance = float(np.sum(residuals**2) / (x.size - 2))
    return RegressionResult(
        float(fit.slope),
        float(fit.intercept),
        float(fit.stderr),
        float(fit.intercept_stderr),
        variance,
        variance * math.sqrt(2.0 / (x.size - 2)),
        int(x.size),
    )


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> Tuple[float, float]:
    """Wilson score interval of a binomial proportion."""
    if trials < 1:
        raise ValueError(f"`trials` must be positive, got {trials}.")
    interval = stats.binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(interval.low), float(interval.high)


def tail_bound(n: int, gamma: float, b_size: int) -> float:
    """|B|^{n-1} (1 - gamma)^n."""
    return float(b_size) ** (n - 1) * (1.0 - gamma) ** n


def tail_curve(
    reports: Iterable,
    r: int,
    gamma: float,
    b_size: int,
    n_max: int = None,
    min_events: int = 30,
) -> pd.DataFrame:
    """
    Empirical coding-depth tail against the bound |B|^{n-1} (1 - gamma)^n.

    Args:
        reports (Iterable): Coding reports (or anything with `depth` and `radius`).
        r (int): Max l1 norm over B; the radius column counts radius >= r n.
        gamma (float): Coalescence probability.
        b_size (int): |B|.
        n_max (int, optional): Last n listed. Defaults to the largest observed depth.
        min_events (int, optional): Events needed before a row is checked. Defaults to 30.

    Returns:
        pd.DataFrame: One row per n >= 1: exceedances of the depth and the
            radius, the Wilson interval of the depth frequency, the bound, and
            `flagged` where the lower Wilson bound exceeds the bound on a row
            with at least `min_events` events.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("The tail curve needs at least one report.")
    depths = np.array([report.depth for report in reports])
    radii = np.array([report.radius for report in reports])
    total = depths.size
    if n_max is None:
        n_max = max(int(depths.max()), 1)
    rows = []
    for n in range(1, n_max + 1):
        events = int(np.sum(depths >= n))
        low, high = wilson_interval(events, total)
        bound = tail_bound(n, gamma, b_size)
        rows.append(
            {
                "n": n,
                "events": events,
                "empirical": events / total,
                "wilson_low": low,
                "wilson_high": high,
                "radius_empirical": float(np.mean(radii >= r * n)),
                "bound": bound,
                "checked": events >= min_events,
                "flagged": events >= min_events and low > bound,
            }
        )
    return pd.DataFrame(rows)


@dataclass
class IndependenceResult:
    """
    Correlation and contingency tests of a pair of single-site samples.

    Attributes:
        corr (float): Pearson correlation.
        se (float): Fisher standard error 1 / sqrt(N - 3).
        passes (bool): |corr| <= 3 se.
        chi2_statistic (float): Binned chi-square statistic.
        chi2_pvalue (float): Its p-value.
        n (int): Sample size.
    """

    corr: float
    se: float
    passes: bool
    chi2_statistic: float
    chi2_pvalue: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)


def independence_test(
    y_a: Sequence[float], y_b: Sequence[float], bins: int = 4
) -> IndependenceResult:
    """
    Pearson correlation with its Fisher SE, supplemented by a chi-square test
    on a bins x bins table of quantile cells.

    Args:
        y_a (Sequence[float]): Values at site A.
        y_b (Sequence[float]): Values at site B, paired with y_a.
        bins (int, optional): Quantile cells per axis. Defaults to 4.

    Returns:
        IndependenceResult: Correlation, SE, verdict and chi-square outcome.
    """
    a = np.asarray(y_a, dtype=float)
    b = np.asarray(y_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"Expected paired 1-d samples, got {a.shape} and {b.shape}.")
    if a.size < 4 * bins * bins:
        raise ValueError(f"Too few pairs ({a.size}) for a {bins}x{bins} table.")
    corr = float(stats.pearsonr(a, b).statistic)
    se = 1.0 / math.sqrt(a.size - 3)
    inner = np.linspace(0, 1, bins + 1)[1:-1]
    cells_a = np.searchsorted(np.quantile(a, inner), a, side="right")
    cells_b = np.searchsorted(np.quantile(b, inner), b, side="right")
    table = np.zeros((bins, bins))
    np.add.at(table, (cells_a, cells_b), 1)
    chi2 = stats.chi2_contingency(table)
    return IndependenceResult(
        corr, se, abs(corr) <= 3.0 * se, float(chi2.statistic), float(chi2.pvalue), int(a.size)
    )


def radius_tv_bound(radii: Sequence[int], window_size: int, l: int) -> float:
    """
    |window| * P(2R > l), the bound on the disagreement between the exact field
    on a window and its l-dependent truncation, from observed coding radii.
    """
    radii = np.asarray(radii)
    if radii.size == 0:
        raise ValueError("At least one coding radius is needed.")
    return float(window_size * np.mean(2 * radii > l))


def bonferroni(alpha: float, tests: int) -> float:
    """Per-test level of a bundle of `tests` tests at family level alpha."""
    if tests < 1:
        raise ValueError(f"`tests` must be positive, got {tests}.")
    return alpha / tests
