"""Validation test module"""
from types import SimpleNamespace

import numpy as np
import pytest
from scipy import stats

from GMRF_PerfectSampling import (
    CRITERIA,
    REFERENCE_SCHEDULE,
    TRUNCATED_REFERENCE,
    FlatCoupler,
    PerfectSamplingError,
    SampleBatch,
    StratifiedCoupler,
    SuiteSettings,
    bonferroni,
    conditional_regression,
    coupler_property_check,
    format_scientific,
    generate_check_table,
    generate_moment_table,
    generate_verdict_table,
    independence_test,
    ks_constant,
    ks_test,
    law_checks,
    radius_tv_bound,
    replica_seed,
    run_suite,
    select_criteria,
    tail_bound,
    tail_curve,
    tv_discretized,
    wilson_interval,
)
from GMRF_PerfectSampling.validation.acceptance import (
    check_negative_control,
    check_quadrature,
)


@pytest.fixture(name="small_settings")
def get_small_settings() -> SuiteSettings:
    """Fixture: Suite settings scaled down to the floor counts."""
    return SuiteSettings().scaled(1e-6)


@pytest.fixture(name="quantile_sample")
def get_quantile_sample() -> np.ndarray:
    """Fixture: Midpoint quantiles of N(0, 1), the closest 1000-point sample to the law."""
    return stats.norm.ppf((np.arange(1000) + 0.5) / 1000)


def test_sample_batch():
    """Test: Lengths, seed ranges and column access."""
    batch = SampleBatch([0, 2], [11, 13], [(1.0, 2.0), (3.0, 4.0)], {1: "budget"})
    assert len(batch) == 2
    assert batch.seed_range == (0, 2)
    assert np.array_equal(batch.column(1), [2.0, 4.0])
    assert batch.values().shape == (2, 2)
    assert SampleBatch([], [], []).seed_range == ()


def test_sample_batch_merge():
    """Test: Merged batches come back in replica order with both failure maps."""
    first = SampleBatch([2, 3], [12, 13], [2.0, 3.0])
    second = SampleBatch([0], [10], [0.0], {1: "budget"})
    merged = first.merge(second)
    assert merged.replicas == [0, 2, 3]
    assert merged.seeds == [10, 12, 13]
    assert merged.payload == [0.0, 2.0, 3.0]
    assert merged.failures == {1: "budget"}


def test_sample_batch_invalid():
    """Test: Mismatched lengths, repeated seeds and overlapping failures raise."""
    with pytest.raises(ValueError):
        SampleBatch([0, 1], [10], [0.0, 1.0])
    with pytest.raises(ValueError):
        SampleBatch([0, 1], [10, 10], [0.0, 1.0])
    with pytest.raises(ValueError):
        SampleBatch([0], [10], [0.0], {0: "budget"})


def test_ks_constant():
    """Test: Tabulated constants and the asymptotic formula."""
    assert ks_constant(0.01) == 1.628
    assert ks_constant(0.05) == 1.358
    assert ks_constant(0.2) == pytest.approx(np.sqrt(-0.5 * np.log(0.1)))
    with pytest.raises(ValueError):
        ks_constant(1.5)


def test_ks_test(quantile_sample):
    """Test: A quantile sample passes and a shifted one fails."""
    result = ks_test(quantile_sample, stats.norm.cdf)
    assert result.passes
    assert result.statistic == pytest.approx(0.0005, abs=1e-6)
    assert result.threshold == pytest.approx(1.628 / np.sqrt(1000))
    shifted = ks_test(quantile_sample + 0.5, stats.norm.cdf)
    assert not shifted.passes
    assert shifted.to_dict()["n"] == 1000
    with pytest.raises(ValueError):
        ks_test(quantile_sample[:50], stats.norm.cdf)


def test_tv_discretized():
    """Test: Identical batches sit at TV 0 and disjoint ones at TV 1."""
    rng = np.random.default_rng(0)
    a = rng.normal(size=(500, 2))
    same = tv_discretized(a, a.copy(), bins=8, bootstrap=50)
    assert same.tv == 0.0
    assert same.consistent()
    assert same.floor > 0
    apart = tv_discretized(np.zeros(200), np.ones(200), bins=2, bootstrap=10)
    assert apart.tv == pytest.approx(1.0)
    assert not apart.consistent()


def test_tv_discretized_invalid():
    """Test: Wide windows, mismatched widths and too many bins raise."""
    with pytest.raises(ValueError):
        tv_discretized(np.zeros((10, 3)), np.zeros((10, 3)))
    with pytest.raises(ValueError):
        tv_discretized(np.zeros((10, 2)), np.zeros((10, 1)))
    with pytest.raises(ValueError):
        tv_discretized(np.zeros(10), np.zeros(10), bins=33)


def test_conditional_regression():
    """Test: The fit recovers slope and unit residual variance."""
    rng = np.random.default_rng(1)
    x = rng.normal(0.0, 2.0, 20_000)
    y = 0.1 * x + rng.normal(size=x.size)
    fit = conditional_regression(y, x)
    assert abs(fit.slope - 0.1) <= 5 * fit.slope_se
    assert abs(fit.intercept) <= 5 * fit.intercept_se
    assert abs(fit.residual_variance - 1.0) <= 5 * fit.residual_variance_se
    assert fit.n == 20_000
    assert not fit.slope_matches(0.2)
    assert fit.intercept_matches(0.0, width=5.0)
    assert not fit.intercept_matches(0.5)
    with pytest.raises(ValueError):
        conditional_regression([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        conditional_regression([1.0, 2.0, 3.0], [1.0, 2.0])


def test_wilson_interval():
    """Test: The interval covers the proportion and stays in [0, 1]."""
    low, high = wilson_interval(5, 10)
    assert low < 0.5 < high
    low, high = wilson_interval(0, 10)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < high < 1.0
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


def test_tail_bound_and_bonferroni():
    """Test: Closed-form tail bound and the corrected level."""
    assert tail_bound(3, 0.8, 2) == pytest.approx(0.032)
    assert tail_bound(1, 0.8, 2) == pytest.approx(0.2)
    assert bonferroni(0.01, 5) == pytest.approx(0.002)
    with pytest.raises(ValueError):
        bonferroni(0.01, 0)


def test_tail_curve():
    """Test: Exceedance counts of depths and radii per n."""
    pairs = [(0, 0), (1, 1), (1, 2), (2, 2), (3, 3)]
    reports = [SimpleNamespace(depth=d, radius=r) for d, r in pairs]
    curve = tail_curve(reports, r=1, gamma=0.8, b_size=2)
    assert list(curve["n"]) == [1, 2, 3]
    assert list(curve["events"]) == [4, 2, 1]
    assert list(curve["radius_empirical"]) == pytest.approx([0.8, 0.6, 0.2])
    assert curve["bound"].iloc[2] == pytest.approx(0.032)
    assert not curve["checked"].any()
    assert not curve["flagged"].any()
    with pytest.raises(ValueError):
        tail_curve([], r=1, gamma=0.8, b_size=2)


def test_independence_test():
    """Test: Independent samples are uncorrelated, identical ones fail."""
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=4000), rng.normal(size=4000)
    result = independence_test(a, b)
    assert abs(result.corr) <= 5 * result.se
    assert result.se == pytest.approx(1 / np.sqrt(3997))
    same = independence_test(a, a)
    assert same.corr == pytest.approx(1.0)
    assert not same.passes
    assert same.chi2_pvalue < 1e-10
    with pytest.raises(ValueError):
        independence_test(a[:20], b[:20])


def test_radius_tv_bound():
    """Test: |window| P(2R > l) from observed radii."""
    assert radius_tv_bound([0, 1, 2, 3], 3, 2) == pytest.approx(1.5)
    assert radius_tv_bound([0, 0], 5, 2) == 0.0
    with pytest.raises(ValueError):
        radius_tv_bound([], 3, 2)


def test_generate_check_table():
    """Test: One row per check with the extra keys as detail."""
    table = generate_check_table(
        {"H1": {"passes": True, "value": 0.97, "gamma": 0.5}, "H3": {"passes": False}}
    )
    assert list(table.index) == ["H1", "H3"]
    assert bool(table.loc["H1", "passes"])
    assert table.loc["H1", "detail"] == "gamma=0.5"
    assert table.loc["H3", "value"] is None or np.isnan(table.loc["H3", "value"])


def test_generate_verdict_and_moment_tables():
    """Test: Verdict summary and sample moments."""
    verdicts = generate_verdict_table({"tail": {"passes": True, "runtime_s": 1.5}})
    assert verdicts.loc["tail", "runtime_s"] == 1.5
    moments = generate_moment_table({"x0": np.array([1.0, 2.0, 3.0])})
    assert moments.loc["x0", "mean"] == pytest.approx(2.0)
    assert moments.loc["x0", "std"] == pytest.approx(1.0)
    assert moments.loc["x0", "se_mean"] == pytest.approx(1 / np.sqrt(3))
    rendered = format_scientific(moments)
    assert rendered.loc["x0", "mean"] == "2.00e+00"


def test_law_checks():
    """Test: One KS outcome per boundary."""
    coupler = FlatCoupler(TRUNCATED_REFERENCE)
    report = law_checks(coupler, [[0.0, 0.0], [2.0, 2.0]], draws=300, seed=4)
    assert len(report["tests"]) == 2
    assert all(test["n"] == 300 for test in report["tests"])
    assert report["tests"][0]["alpha"] == 0.01


def test_coupler_property_check_stratified():
    """Test: The stratified report counts containment violations too."""
    report = coupler_property_check(
        StratifiedCoupler(REFERENCE_SCHEDULE), trials=100, draws=200, seed=6
    )
    assert report["coalescence_violations"] == 0
    assert report["containment_violations"] == 0
    assert len(report["law"]["tests"]) == 3


def test_select_criteria():
    """Test: Names come back in suite order; unknown names raise."""
    assert select_criteria() == list(CRITERIA)
    assert select_criteria("tail, quadrature") == ["quadrature", "tail"]
    assert select_criteria(["duality"]) == ["duality"]
    with pytest.raises(ValueError):
        select_criteria("quadrature,unknown")
    with pytest.raises(ValueError):
        select_criteria([])


def test_suite_settings(small_settings):
    """Test: Scaling keeps the floors and the serialization lists l values."""
    assert small_settings.truncated_samples == 100
    assert small_settings.glauber_runs == 1
    assert small_settings.torus_side == SuiteSettings().torus_side
    assert SuiteSettings().scaled(0.5).duality_trials == 50_000
    assert small_settings.to_dict()["approx_ls"] == [2, 4, 6, 8]
    with pytest.raises(ValueError):
        SuiteSettings().scaled(0.0)


@pytest.mark.parametrize(
    "changes",
    [
        {"tau": 1.0},
        {"torus_side": 2},
        {"approx_ls": (1, 2)},
        {"spin_gamma": 1.5},
        {"tail_reports": 0},
    ],
)
def test_suite_settings_invalid(changes):
    """Test: Invalid knobs raise a ValueError."""
    with pytest.raises(ValueError):
        SuiteSettings(**changes)


def test_check_quadrature():
    """Test: The quadrature criterion passes."""
    outcome = check_quadrature(SuiteSettings(), 0, REFERENCE_SCHEDULE)
    assert outcome["passes"]
    assert outcome["gamma_at_zero"] == 1.0
    assert outcome["grid_doubling_drift"] <= 1e-6


def test_check_negative_control(small_settings):
    """Test: The control coupler is caught by the coalescence check."""
    outcome = check_negative_control(small_settings, 3, REFERENCE_SCHEDULE)
    assert outcome["passes"]
    assert outcome["coalescence_violations"] > 0


def test_run_suite(small_settings):
    """Test: Verdicts carry per-criterion seeds and runtimes."""
    verdicts = run_suite("negative_control,quadrature", small_settings, master_seed=5)
    assert list(verdicts) == ["quadrature", "negative_control"]
    positions = list(CRITERIA)
    for name, outcome in verdicts.items():
        assert outcome["passes"] is True
        assert outcome["runtime_s"] >= 0
        assert outcome["seed"] == replica_seed(5, positions.index(name)) % 2**63


def test_run_suite_domain_failure(monkeypatch, small_settings):
    """Test: A domain error fails its criterion without stopping the suite."""

    def failing(settings, seed, schedule):
        del settings, seed, schedule
        raise PerfectSamplingError("boom")

    monkeypatch.setitem(CRITERIA, "quadrature", failing)
    verdicts = run_suite("quadrature,negative_control", small_settings)
    assert verdicts["quadrature"]["passes"] is False
    assert "boom" in verdicts["quadrature"]["error"]
    assert verdicts["negative_control"]["passes"] is True
