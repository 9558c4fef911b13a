"""Model test module"""
import math

import pytest

from GMRF_PerfectSampling import (
    LevelSchedule,
    ModelParams,
    NeighborhoodSpec,
    ScheduleError,
    ball_count,
    check_growth,
    check_h1,
    check_h3,
    check_h4,
    l1_distance,
    neighbors,
    sphere_count,
    unit_offsets,
)


@pytest.fixture(name="reference_schedule")
def get_reference_schedule() -> LevelSchedule:
    """Fixture: Schedule of the unbounded model at epsilon = 0.01 in d = 1."""
    return LevelSchedule(a=0.09, L1=3.5, epsilon=0.01, d=1)


@pytest.fixture(name="small_tail_schedule")
def get_small_tail_schedule() -> LevelSchedule:
    """Fixture: Schedule with a small tail constant and a wide first level."""
    return LevelSchedule(a=1e-3, L1=20.0, epsilon=0.05, d=1)


def test_unit_offsets():
    """Test: The unit sphere of Z^d comes in lexicographic order."""
    assert unit_offsets(1) == ((-1,), (1,))
    assert unit_offsets(2) == ((-1, 0), (0, -1), (0, 1), (1, 0))
    with pytest.raises(ValueError):
        unit_offsets(0)


def test_neighborhood_spec():
    """Test: The default neighbourhood is symmetric with |B| = 2d."""
    spec = NeighborhoodSpec.default(2)
    assert spec.size == 4
    assert spec.dimension == 2
    assert spec.radius == 1
    assert neighbors((0, 0), spec) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert spec.neighbors((3, -2)) == [(2, -2), (3, -3), (3, -1), (4, -2)]


def test_neighborhood_spec_sorts_offsets():
    """Test: Offsets given out of order are stored in lexicographic order."""
    spec = NeighborhoodSpec(((2,), (-2,), (1,), (-1,)))
    assert spec.offsets == ((-2,), (-1,), (1,), (2,))
    assert spec.radius == 2


@pytest.mark.parametrize(
    "offsets",
    [((1,),), ((0,), (1,), (-1,)), ((1,), (-1,), (1,)), ((1,), (-1, 0))],
)
def test_neighborhood_spec_invalid(offsets):
    """Test: Asymmetric, origin-holding, repeated or mixed-dimension offsets raise."""
    with pytest.raises(ValueError):
        NeighborhoodSpec(offsets)


def test_neighbors_dimension_mismatch():
    """Test: A site of the wrong dimension raises a ValueError."""
    with pytest.raises(ValueError):
        NeighborhoodSpec.default(1).neighbors((0, 0))


def test_ball_and_sphere_counts():
    """Test: l1 sphere and ball counts match direct enumeration."""
    assert sphere_count(1, 0) == 1
    assert sphere_count(1, 5) == 2
    assert sphere_count(2, 1) == 4
    assert sphere_count(2, 2) == 8
    assert sphere_count(3, 1) == 6
    assert ball_count(1, 4) == 9
    assert ball_count(2, 2) == 13
    points = [
        (x, y, z)
        for x in range(-3, 4)
        for y in range(-3, 4)
        for z in range(-3, 4)
        if abs(x) + abs(y) + abs(z) <= 3
    ]
    assert ball_count(3, 3) == len(points)


def test_l1_distance():
    """Test: l1 distance between lattice points."""
    assert l1_distance((0, 0), (2, -3)) == 5
    assert l1_distance((4,), (4,)) == 0


def test_model_params():
    """Test: Derived quantities of the model."""
    params = ModelParams(d=2, epsilon=0.5, truncation=3)
    assert params.is_truncated
    assert params.truncation == 3.0
    assert params.high_noise_gate == pytest.approx(0.75)
    assert params.mean_field(4.0) == pytest.approx(0.5)
    assert params.neighborhood.size == 4
    assert params.to_dict() == {"d": 2, "epsilon": 0.5, "truncation": 3.0}
    assert not ModelParams(d=1, epsilon=0.1).is_truncated


@pytest.mark.parametrize(
    "kwargs",
    [
        {"d": 0, "epsilon": 0.1},
        {"d": 1, "epsilon": 1.0},
        {"d": 1, "epsilon": -1.2},
        {"d": 1, "epsilon": 0.1, "truncation": 0.0},
    ],
)
def test_model_params_invalid(kwargs):
    """Test: Invalid model parameters raise a ValueError."""
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_model_params_dimension_type():
    """Test: A non-integer dimension raises a TypeError."""
    with pytest.raises(TypeError):
        ModelParams(d=1.0, epsilon=0.1)
    with pytest.raises(TypeError):
        ModelParams(d=True, epsilon=0.1)


def test_level_schedule(reference_schedule):
    """Test: Level bounds and probabilities follow the closed forms."""
    schedule = reference_schedule
    assert schedule.b_size == 2
    assert schedule.level_prob(0) == pytest.approx(1 - 0.09 / math.e)
    assert schedule.tail_prob(2) == pytest.approx(0.09 * math.exp(-4))
    assert schedule.level_bound(1) == pytest.approx(3.5)
    assert schedule.level_bound(3) == pytest.approx(350.0)
    assert schedule.tail_prob(60) == 0.0
    probs = schedule.level_probs
    assert all(b >= a for a, b in zip(probs, probs[1:]))
    assert schedule.to_dict() == {"a": 0.09, "L1": 3.5, "epsilon": 0.01, "d": 1}


def test_level_index(reference_schedule):
    """Test: The level index is the smallest k with u <= q_k."""
    schedule = reference_schedule
    assert schedule.level_index(0.0) == 0
    assert schedule.level_index(schedule.level_prob(0)) == 0
    assert schedule.level_index(0.97) == 1
    assert schedule.level_index(0.995) == 2


def test_level_schedule_invalid():
    """Test: Invalid schedule parameters raise a ValueError."""
    with pytest.raises(ValueError):
        LevelSchedule(a=3.0, L1=3.5, epsilon=0.01)
    with pytest.raises(ValueError):
        LevelSchedule(a=0.0, L1=3.5, epsilon=0.01)
    with pytest.raises(ValueError):
        LevelSchedule(a=0.09, L1=-1.0, epsilon=0.01)
    with pytest.raises(ValueError):
        LevelSchedule(a=0.09, L1=3.5, epsilon=0.01).level_bound(0)


def test_level_bound_without_interaction():
    """Test: Levels are undefined at epsilon = 0."""
    schedule = LevelSchedule(a=0.09, L1=3.5, epsilon=0.0)
    with pytest.raises(ScheduleError):
        schedule.level_bound(1)


def test_reference_schedule_hypotheses(reference_schedule):
    """Test: The reference schedule passes H1, H3, growth and H4."""
    h1 = check_h1(reference_schedule)
    assert h1.passes
    assert h1.gamma_tilde == pytest.approx(0.9717, abs=1e-3)
    h3 = check_h3(reference_schedule, 2)
    assert h3.passes
    assert h3.t_exists
    assert h3.sum4 == pytest.approx(0.881, abs=5e-3)
    growth = check_growth(reference_schedule)
    assert growth.passes
    assert growth.first_violation is None
    assert growth.tail_certified
    h4 = check_h4(reference_schedule, ModelParams(d=1, epsilon=0.01))
    assert h4.passes
    assert h4.decreasing
    assert h4.bound_at(1) == h4.bounds[0]


def test_small_tail_schedule(small_tail_schedule):
    """Test: A wide first level with a small tail constant fails only H1."""
    assert not check_h1(small_tail_schedule).passes
    assert check_h3(small_tail_schedule, 2).passes
    assert check_growth(small_tail_schedule).passes
    assert check_h4(small_tail_schedule, ModelParams(d=1, epsilon=0.05)).passes


def test_h3_fails_for_large_tail():
    """Test: a = 1 makes the H3 sum exceed one in d = 1."""
    report = check_h3(LevelSchedule(a=1.0, L1=3.5, epsilon=0.01), 2)
    assert not report.passes
    assert report.sum4 > 1


def test_growth_violation():
    """Test: A first level too small for the growth condition is reported."""
    report = check_growth(LevelSchedule(a=0.09, L1=1.0, epsilon=0.01))
    assert not report.passes
    assert report.first_violation == 1
    assert report.min_slack < 0


def test_growth_tail_not_certified():
    """Test: Slack at every checked level without a tail certificate is rejected."""
    report = check_growth(LevelSchedule(a=0.09, L1=1e4, epsilon=0.6))
    assert report.first_violation is None
    assert report.min_slack > 0
    assert not report.tail_certified
    assert not report.passes


def test_h4_bound_not_vanishing():
    """Test: Levels growing too slowly leave the union bound above the tolerance."""
    schedule = LevelSchedule(a=0.09, L1=0.5, epsilon=0.95)
    report = check_h4(schedule, ModelParams(d=1, epsilon=0.95))
    assert report.decreasing
    assert report.bounds[-1] > 1e-12
    assert not report.passes


def test_h4_verdict(reference_schedule, small_tail_schedule):
    """Test: The H4 verdict needs nonincreasing bounds and a vanishing last bound."""
    for schedule in (reference_schedule, small_tail_schedule):
        report = check_h4(schedule, ModelParams(d=1, epsilon=schedule.epsilon))
        assert report.passes == (report.decreasing and report.bounds[-1] < 1e-12)


def test_hypotheses_monotone_in_a():
    """Test: H3 survives a smaller tail constant and growth survives a larger one."""
    grid = [1e-4, 1e-3, 0.01, 0.05, 0.09, 0.2, 0.5, 1.0, 2.0]
    schedules = [LevelSchedule(a=a, L1=3.5, epsilon=0.01) for a in grid]
    h3 = [check_h3(schedule, 2).passes for schedule in schedules]
    growth = [check_growth(schedule).passes for schedule in schedules]
    # passes may only switch off as a grows for H3 and on for growth
    assert all(small or not large for small, large in zip(h3, h3[1:]))
    assert all(large or not small for small, large in zip(growth, growth[1:]))
    assert h3[0] and not h3[-1]
    assert growth[grid.index(0.09)] and not growth[0]


def test_checkers_invalid_input(reference_schedule):
    """Test: Epsilon mismatches and truncated models are rejected."""
    with pytest.raises(ValueError):
        check_h1(reference_schedule, ModelParams(d=1, epsilon=0.2))
    with pytest.raises(ValueError):
        check_h3(reference_schedule, 1)
    with pytest.raises(ValueError):
        check_h4(reference_schedule, ModelParams(d=1, epsilon=0.01, truncation=2.0))
    with pytest.raises(ScheduleError):
        check_growth(LevelSchedule(a=0.09, L1=3.5, epsilon=0.0))
