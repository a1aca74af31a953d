import io

import numpy as np
import pytest

from src.metrics.pattern import (
    BeamAllocation,
    BeamHoppingPattern,
    heatmap_frame,
    load_pattern,
    save_pattern,
)
from src.utils.errors import PatternShapeError, ScenarioParseError
from tests.conftest import make_scenario


def test_pattern_rejects_non_binary_entries() -> None:
    with pytest.raises(PatternShapeError):
        BeamHoppingPattern(np.array([[0, 2], [1, 0]]))


def test_pattern_rejects_vectors() -> None:
    with pytest.raises(PatternShapeError):
        BeamHoppingPattern(np.array([0, 1, 1]))


def test_pattern_sums_and_feasibility() -> None:
    pattern = BeamHoppingPattern(np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]]))
    np.testing.assert_array_equal(pattern.row_sums, [2, 2, 2])
    np.testing.assert_array_equal(pattern.column_sums, [2, 2, 2])
    assert pattern.is_feasible(2)
    assert not pattern.is_feasible(1)


def test_unserved_cells_make_pattern_infeasible() -> None:
    pattern = BeamHoppingPattern(np.array([[1, 1], [0, 0], [1, 0]]))
    np.testing.assert_array_equal(pattern.unserved_cells(), [1])
    assert not pattern.every_cell_served()
    assert not pattern.is_feasible(2)


def test_pattern_matrix_is_read_only() -> None:
    pattern = BeamHoppingPattern(np.eye(2, dtype=int))
    with pytest.raises(ValueError):
        pattern.matrix[0, 0] = 0


def test_check_shape_against_scenario() -> None:
    scenario = make_scenario([3.0, 4.0, 5.0], n_slots=2, n_beams=1)
    BeamHoppingPattern(np.ones((3, 2), dtype=int)).check_shape(scenario)
    with pytest.raises(PatternShapeError):
        BeamHoppingPattern(np.ones((2, 3), dtype=int)).check_shape(scenario)


def test_allocation_violations() -> None:
    scenario = make_scenario([3.0, 4.0, 5.0], n_slots=2, n_beams=1)
    assert BeamAllocation(np.array([1, 1, 0])).violations(scenario) == [
        "cells with b_i < 1: [2]"
    ]
    assert not BeamAllocation(np.array([1, 1, 1])).is_feasible(scenario)
    assert BeamAllocation(np.array([1, 1, 1])).total == 3


def test_pattern_csv_round_trip(tmp_path) -> None:
    pattern = BeamHoppingPattern(np.array([[1, 0, 0, 1], [0, 1, 1, 0]]))
    path = tmp_path / "pattern.csv"
    save_pattern(pattern, path)
    assert path.read_text().splitlines()[0] == "# schema: beamhop-pattern/1"
    assert path.read_text().splitlines()[1] == "cell_id,s0,s1,s2,s3"
    assert load_pattern(path) == pattern


def test_load_pattern_rejects_bad_entries(tmp_path) -> None:
    path = tmp_path / "pattern.csv"
    path.write_text("cell_id,s0,s1\n0,1,3\n1,0,1\n")
    with pytest.raises(ScenarioParseError):
        load_pattern(path)


def test_load_pattern_rejects_foreign_schema(tmp_path) -> None:
    path = tmp_path / "pattern.csv"
    path.write_text("# schema: something-else/2\ncell_id,s0\n0,1\n")
    with pytest.raises(ScenarioParseError) as info:
        load_pattern(path)
    assert info.value.field == "schema"


def test_save_pattern_to_buffer() -> None:
    buffer = io.StringIO()
    save_pattern(BeamHoppingPattern(np.eye(2, dtype=int)), buffer)
    assert "0,1,0" in buffer.getvalue()


def test_heatmap_frame_long_format() -> None:
    scenario = make_scenario([3.0, 4.0], n_slots=3, n_beams=1)
    pattern = BeamHoppingPattern(np.array([[1, 0, 1], [0, 1, 0]]))
    frame = heatmap_frame(pattern, scenario)
    assert list(frame.columns) == ["cell_id", "slot", "lit", "demand"]
    assert len(frame) == 6
    assert frame["lit"].sum() == 3
    assert frame.loc[(frame.cell_id == 1) & (frame.slot == 1), "demand"].item() == 4.0
