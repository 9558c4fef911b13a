"""Sampling test module"""
import numpy as np
import pytest

from GMRF_PerfectSampling import (
    WORKERS_ENV,
    BudgetExceededError,
    CodingReport,
    CouplingError,
    DrynessCertificate,
    FieldSample,
    FlatCoupler,
    GaussianSampler,
    LDependentSampler,
    LevelSchedule,
    MarkStore,
    ModelParams,
    ReplicaRunner,
    SamplerOptions,
    ScheduleError,
    StratifiedCoupler,
    TruncatedNormal,
    TruncatedSampler,
    conditional_regression,
    iid_value,
    replica_seed,
    sample_gaussian,
    sample_l_dependent,
    sample_truncated,
    sample_window,
    std_normal_quantile,
    tail_bound,
    validate_schedule,
    worker_count,
)


@pytest.fixture(name="schedule")
def get_schedule() -> LevelSchedule:
    """Fixture: Reference schedule of the unbounded model."""
    return LevelSchedule(a=0.09, L1=3.5, epsilon=0.01, d=1)


@pytest.fixture(name="flat", scope="module")
def create_flat_coupler() -> FlatCoupler:
    """Fixture: Flat coupler of the truncated model at epsilon = 0.2, L = 2."""
    return FlatCoupler(ModelParams(d=1, epsilon=0.2, truncation=2.0))


@pytest.fixture(name="stratified", scope="module")
def create_stratified_coupler() -> StratifiedCoupler:
    """Fixture: Stratified coupler of the reference schedule."""
    return StratifiedCoupler(LevelSchedule(a=0.09, L1=3.5, epsilon=0.01, d=1))


@pytest.fixture(name="truncated_options")
def get_truncated_options(flat) -> SamplerOptions:
    """Fixture: Options of the truncated mode with a prebuilt coupler."""
    return SamplerOptions(flat.params, coupler=flat)


@pytest.fixture(name="gaussian_options")
def get_gaussian_options(schedule, stratified) -> SamplerOptions:
    """Fixture: Options of the gaussian mode with a prebuilt coupler."""
    return SamplerOptions(
        ModelParams(d=1, epsilon=0.01), schedule, l=8, coupler=stratified
    )


def square(index: int, seed: int) -> int:
    """Replica function returning index squared; replica 2 fails."""
    if index == 2:
        raise CouplingError(f"replica {index} with seed {seed}")
    return index * index


def first_label(index: int, seed: int) -> float:
    """Replica function returning the label of the latest mark at site `index`."""
    return MarkStore(seed).mark((index,), 0).u


def test_coding_report():
    """Test: Reports flatten to one column per coordinate."""
    report = CodingReport((1, -2), radius=3, depth=4, marks_revealed=10, wet_depth=2)
    assert report.to_dict() == {
        "x0": 1,
        "x1": -2,
        "radius": 3,
        "depth": 4,
        "marks_revealed": 10,
        "wet_depth": 2,
    }
    with pytest.raises(ValueError):
        CodingReport((0,), radius=-1, depth=0, marks_revealed=1)
    with pytest.raises(ValueError):
        CodingReport((0,), radius=0, depth=0, marks_revealed=0)


def test_dryness_certificate():
    """Test: A residual above the requested bound is rejected."""
    assert DrynessCertificate(5, 1e-12, 3, 1e-9).marks_certified == 3
    with pytest.raises(ValueError):
        DrynessCertificate(5, 1e-6, 3, 1e-9)


def test_field_sample():
    """Test: Window samples index by site and export rows and JSON."""
    sample = FieldSample([(0,), (1,)], {(0,): 0.5, (1,): -0.25}, {"seed": 3})
    assert sample[(1,)] == -0.25
    assert sample.as_array() == [0.5, -0.25]
    frame = sample.to_frame()
    assert list(frame.columns) == ["x0", "value"]
    assert frame["value"].tolist() == [0.5, -0.25]
    assert sample.to_json_dict()["window"] == [[0], [1]]
    with pytest.raises(ValueError):
        FieldSample([(0,), (1,)], {(0,): 0.5})


def test_truncated_sampler_reproducible(flat):
    """Test: Equal seeds give equal values and reports."""
    value, report = TruncatedSampler(MarkStore(5), flat).sample((0,))
    again, report_again = sample_truncated(MarkStore(5), (0,), flat)
    assert value == again
    assert report == report_again
    assert -2.0 <= value <= 2.0
    assert report.marks_revealed >= 1
    assert report.radius <= report.depth


def test_truncated_window_matches_single_sites(flat, truncated_options):
    """Test: A joint window query returns the single-site values."""
    window = [(-1,), (0,), (1,), (4,)]
    sample = sample_window(MarkStore(17), window, "truncated", truncated_options)
    assert sample.meta["mode"] == "truncated"
    assert sample.meta["seed"] == 17
    for site in window:
        value, _ = TruncatedSampler(MarkStore(17), flat).sample(site)
        assert sample[site] == value


def test_truncated_sampler_mean(flat):
    """Test: The stationary mean of the symmetric truncated model is zero."""
    values = [TruncatedSampler(MarkStore(seed), flat).sample((0,))[0] for seed in range(300)]
    assert abs(np.mean(values)) < 5.0 / np.sqrt(len(values))


def test_truncated_sampler_gate():
    """Test: Couplers below the high-noise gate need force=True."""
    coupler = FlatCoupler(ModelParams(d=1, epsilon=0.9, truncation=5.0))
    assert coupler.gamma < 0.5
    with pytest.raises(ScheduleError):
        TruncatedSampler(MarkStore(1), coupler)
    failures = []
    for seed in range(20):
        try:
            TruncatedSampler(MarkStore(seed), coupler, budget=5, force=True).sample((0,))
        except BudgetExceededError as error:
            failures.append(error)
    assert failures
    assert all(isinstance(error.report, CodingReport) for error in failures)


def test_truncated_depth_tail(flat):
    """Test: P(depth >= n) stays below |B|^{n-1} (1 - gamma)^n."""
    reports = [TruncatedSampler(MarkStore(seed), flat).sample((0,))[1] for seed in range(2000)]
    depths = np.array([report.depth for report in reports])
    assert np.mean(depths >= 1) > 0
    for n in range(1, int(depths.max()) + 1):
        bound = tail_bound(n, flat.gamma, 2)
        se = np.sqrt(bound * (1.0 - bound) / depths.size)
        assert np.mean(depths >= n) <= bound + 5 * se + 1.0 / depths.size


def test_truncated_conditional_law(flat, truncated_options):
    """Test: Given its neighbours, X_0 has the truncated normal conditional mean."""
    window = [(-1,), (0,), (1,)]
    values = np.array(
        [
            sample_window(MarkStore(seed), window, "truncated", truncated_options).as_array()
            for seed in range(1500)
        ]
    )
    sums = values[:, 0] + values[:, 2]
    means = np.array(
        [TruncatedNormal(flat.params.mean_field(s), 2.0).expectation for s in sums]
    )
    residual = conditional_regression(values[:, 1] - means, sums)
    assert residual.slope_matches(0.0, width=5.0)
    assert residual.intercept_matches(0.0, width=5.0)


def test_validate_schedule(schedule):
    """Test: The reference schedule passes every gate; a wide L1 fails H1."""
    assert validate_schedule(schedule, 2) == {
        "H1": True,
        "H2": True,
        "H3": True,
        "growth": True,
    }
    with pytest.raises(ScheduleError):
        validate_schedule(LevelSchedule(a=1e-3, L1=20.0, epsilon=0.05), 2)
    with pytest.raises(ScheduleError):
        GaussianSampler(MarkStore(1), LevelSchedule(a=1e-3, L1=20.0, epsilon=0.05))


def test_gaussian_sampler(schedule, stratified):
    """Test: A query returns a certified value and a memoized repeat."""
    sampler = GaussianSampler(MarkStore(3), schedule, coupler=stratified)
    value, report, certificate = sampler.sample((0,))
    assert np.isfinite(value)
    assert certificate.residual <= certificate.delta_fail == 1e-9
    assert certificate.cert_depth >= 5
    assert certificate.marks_certified == len(sampler.cutset((0,)))
    assert report.wet_depth >= 0
    assert report.depth >= certificate.cert_depth
    again, repeat, _ = sampler.sample((0,))
    assert again == value
    assert repeat.marks_revealed == 1
    fresh, _, _ = sample_gaussian(MarkStore(3), (0,), schedule)
    assert fresh == value
    sampler.reset()
    assert sampler.sample((0,))[0] == value


def test_gaussian_sampler_moments(schedule, stratified):
    """Test: The origin value has mean 0 and variance Gamma(0, 0) ~ 1."""
    values = np.array(
        [
            GaussianSampler(MarkStore(seed), schedule, coupler=stratified).sample((0,))[0]
            for seed in range(200)
        ]
    )
    assert abs(values.mean()) < 5.0 / np.sqrt(len(values))
    assert abs(values.var() - 1.0) < 5.0 * np.sqrt(2.0 / len(values))


def test_gaussian_sampler_iid_mode():
    """Test: At epsilon = 0 the value is the normal quantile of the root label."""
    schedule = LevelSchedule(a=0.09, L1=3.5, epsilon=0.0)
    store = MarkStore(9)
    value, report, certificate = GaussianSampler(store, schedule).sample((2,))
    root = store.last_mark_before((2,), 0.0)
    assert value == iid_value(root.u)
    assert value == pytest.approx(std_normal_quantile(root.u))
    assert report.marks_revealed == 1
    assert certificate.residual == 0.0


def test_gaussian_sampler_invalid(schedule):
    """Test: A non-positive certificate bound raises a ValueError."""
    with pytest.raises(ValueError):
        GaussianSampler(MarkStore(1), schedule, delta_fail=0.0)


def test_gaussian_window(gaussian_options):
    """Test: Window queries carry the certificate residual in their meta."""
    sample = sample_window(MarkStore(21), [(0,), (1,), (0,)], "gaussian", gaussian_options)
    assert sample.window == ((0,), (1,))
    assert 0.0 <= sample.meta["certificate_residual"] <= 2e-9
    assert sample.meta["marks_revealed"] == sum(r.marks_revealed for r in sample.reports)


def test_gaussian_conditional_law(gaussian_options):
    """Test: X_0 regressed on X_{-1} + X_1 has slope epsilon / 2 and intercept 0."""
    window = [(-1,), (0,), (1,)]
    values = np.array(
        [
            sample_window(MarkStore(seed), window, "gaussian", gaussian_options).as_array()
            for seed in range(1000)
        ]
    )
    fit = conditional_regression(values[:, 1], values[:, 0] + values[:, 2])
    assert fit.slope_matches(0.005, width=5.0)
    assert fit.intercept_matches(0.0, width=5.0)
    assert abs(fit.residual_variance - 1.0) <= 5 * fit.residual_variance_se


@pytest.mark.parametrize("mode", ["truncated", "gaussian", "ldep"])
def test_translation_covariance(mode, truncated_options, gaussian_options):
    """Test: A store shifted by k samples at the origin what the plain store gives at k."""
    options = truncated_options if mode == "truncated" else gaussian_options
    for seed in range(10):
        shift = (37 * seed - 150,)
        moved = options.build_sampler(MarkStore(seed), mode).sample(shift)[0]
        shifted = options.build_sampler(MarkStore(seed, shift=shift), mode).sample((0,))[0]
        assert moved == shifted
    window = [(-1,), (0,), (2,)]
    plain = sample_window(MarkStore(3), [(5 + s[0],) for s in window], mode, options)
    shifted = sample_window(MarkStore(3, shift=(5,)), window, mode, options)
    assert np.array_equal(plain.as_array(), shifted.as_array())


def test_l_dependent_sampler_cut(schedule, stratified):
    """Test: For l < 2 the value is phi(0, u) of the root mark."""
    store = MarkStore(4)
    root = store.last_mark_before((0,), 0.0)
    for l in (0, 1):
        sampler = LDependentSampler(store, schedule, l, coupler=stratified)
        assert sampler.cut_depth == 0
        value, report = sampler.sample((0,))
        assert value == stratified.zero_update(root.u)
        assert report.radius == 0
    one_shot = sample_l_dependent(MarkStore(4), (0,), schedule, 1)
    assert one_shot == stratified.zero_update(root.u)
    with pytest.raises(ValueError):
        LDependentSampler(store, schedule, -1)
    # cut marks inside the common band land on the common value
    for u in np.linspace(0.0, stratified.gamma, 7):
        assert stratified.zero_update(u) == pytest.approx(stratified.common_value(u))


def test_l_dependent_matches_exact(schedule, stratified):
    """Test: Y* equals X whenever the certified cutset lies above the cut."""
    l = 8
    matched = 0
    for seed in range(30):
        exact = GaussianSampler(MarkStore(seed), schedule, coupler=stratified)
        value, _, _ = exact.sample((0,))
        approx, report = LDependentSampler(
            MarkStore(seed), schedule, l, coupler=stratified
        ).sample((0,))
        assert report.depth == l // 2
        if max(exact.cutset((0,)).values()) < l // 2:
            assert approx == value
            matched += 1
    assert matched > 0


def test_sampler_options_require(schedule):
    """Test: Per-mode preconditions are enforced."""
    truncated = SamplerOptions(ModelParams(d=1, epsilon=0.2, truncation=2.0))
    truncated.require("truncated")
    with pytest.raises(ValueError):
        truncated.require("gaussian")
    with pytest.raises(ValueError):
        truncated.require("exact")
    unbounded = SamplerOptions(ModelParams(d=1, epsilon=0.01))
    with pytest.raises(ValueError):
        unbounded.require("ldep")
    mismatched = SamplerOptions(ModelParams(d=1, epsilon=0.2), schedule)
    with pytest.raises(ValueError):
        mismatched.require("gaussian")
    with pytest.raises(TypeError):
        SamplerOptions({"d": 1})
    with pytest.raises(ValueError):
        SamplerOptions(ModelParams(d=1, epsilon=0.2), budget=0)


def test_replica_seed():
    """Test: Replica seeds are reproducible and distinct."""
    seeds = [replica_seed(11, index) for index in range(100)]
    assert seeds == [replica_seed(11, index) for index in range(100)]
    assert len(set(seeds)) == 100
    assert replica_seed(12, 0) != seeds[0]
    assert all(0 <= seed < 2**64 for seed in seeds)
    with pytest.raises(ValueError):
        replica_seed(11, -1)


def test_worker_count(monkeypatch):
    """Test: The worker count is read from the environment."""
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert worker_count() == 1
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert worker_count() == 3
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv(WORKERS_ENV, "0")
    with pytest.raises(ValueError):
        worker_count()


def test_replica_runner_failures():
    """Test: Domain failures are recorded per replica."""
    batch = ReplicaRunner(square, master_seed=0, workers=1)(0, 5)
    assert batch.replicas == [0, 1, 3, 4]
    assert batch.payload == [0, 1, 9, 16]
    assert list(batch.failures) == [2]
    assert batch.failures[2].startswith("CouplingError")
    assert batch.seeds == [replica_seed(0, index) for index in (0, 1, 3, 4)]
    with pytest.raises(ValueError):
        ReplicaRunner(square, master_seed=0, workers=1)(3, 1)
    with pytest.raises(ValueError):
        ReplicaRunner(square, master_seed=-1)


def test_replica_runner_split_ranges():
    """Test: Split ranges and worker counts reassemble the same batch."""
    whole = ReplicaRunner(first_label, master_seed=5, workers=1)(0, 6)
    left = ReplicaRunner(first_label, master_seed=5, workers=1)(0, 2)
    right = ReplicaRunner(first_label, master_seed=5, workers=2)(2, 6)
    merged = left.merge(right)
    assert merged.replicas == whole.replicas
    assert merged.payload == whole.payload
