"""Coding report collection test module"""
from typing import Dict

import numpy as np
import pandas as pd
import pytest

from GMRF_PerfectSampling import CodingReport, CodingReportCollection


@pytest.fixture(name="reports")
def create_reports() -> Dict[int, CodingReport]:
    """Fixture: Creates coding reports for four replicas, out of order."""
    return {
        3: CodingReport((0,), radius=2, depth=2, marks_revealed=7, wet_depth=1),
        0: CodingReport((0,), radius=0, depth=0, marks_revealed=1, wet_depth=0),
        1: CodingReport((0,), radius=1, depth=1, marks_revealed=3),
        2: CodingReport((0,), radius=3, depth=4, marks_revealed=15, wet_depth=2),
    }


@pytest.fixture(name="collection")
def create_collection(reports) -> CodingReportCollection:
    """Fixture: Creates and returns a CodingReportCollection instance."""
    return CodingReportCollection(reports)


def test_collection_init(reports):
    """Test: Initializes the collection and sorts it by replica."""
    collection = CodingReportCollection(reports)
    assert collection.replicas == [0, 1, 2, 3]
    assert collection.replica_reports[3] == reports[3]
    assert len(collection) == 4


@pytest.mark.parametrize(
    "invalid",
    [{"0": CodingReport((0,), 0, 0, 1)}, {True: CodingReport((0,), 0, 0, 1)}, {0: 1.5}],
)
def test_collection_invalid(invalid):
    """Test: Non-integer keys and non-report values raise a TypeError."""
    with pytest.raises(TypeError):
        CodingReportCollection(invalid)


def test_properties(collection):
    """Test: Verifies the array properties of the collection."""
    assert np.array_equal(collection.depths, [0, 1, 4, 2])
    assert np.array_equal(collection.radii, [0, 1, 3, 2])
    assert np.array_equal(collection.marks, [1, 3, 15, 7])
    assert np.array_equal(collection.wet_depths, [0, -1, 2, 1])
    assert all(isinstance(elem, CodingReport) for elem in collection.reports)


def test_items(collection):
    """Test: Verifies the items method of the collection."""
    assert all(
        isinstance(key, int) and isinstance(val, CodingReport)
        for key, val in collection.items()
    )


def test_iter(collection):
    """Test: Verifies the iterator of the collection."""
    assert [report.depth for report in collection] == [0, 1, 4, 2]


def test_exceedance(collection):
    """Test: Empirical P(depth >= n)."""
    assert collection.exceedance(0) == 1.0
    assert collection.exceedance(2) == 0.5
    assert collection.exceedance(5) == 0.0
    with pytest.raises(ValueError):
        CodingReportCollection({}).exceedance(1)


def test_write_csv(collection, tmp_path):
    """Test: The CSV table holds one row per replica in replica order."""
    frame = collection.write_csv(tmp_path / "coding_reports.csv")
    read = pd.read_csv(tmp_path / "coding_reports.csv")
    assert list(read.columns) == ["replica", "radius", "depth", "marks", "wet_depth"]
    assert list(read["replica"]) == [0, 1, 2, 3]
    assert read.equals(frame.astype(read.dtypes.to_dict()))
