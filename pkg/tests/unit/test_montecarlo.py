import io

import numpy as np
import pytest
from pydantic import ValidationError

from src.baselines import round_robin_pattern
from src.metrics.probability import collision_avoidance
from src.simulator import McConfig, McResult, binomial_stderr, simulate, wilson_stderr
from src.utils.errors import PatternShapeError, UnservedCellError
from tests.conftest import make_scenario


def test_config_rejects_zero_trials() -> None:
    with pytest.raises(ValidationError):
        McConfig(trials=0)


def test_config_from_yaml_overrides() -> None:
    config = McConfig.from_yaml(trials=42, workers=None)
    assert config.trials == 42
    assert config.chunk_trials >= 1


def test_normal_stderr_in_the_bulk() -> None:
    assert float(binomial_stderr(np.array([50]), np.array([100]))[0]) == pytest.approx(0.05)


def test_wilson_stderr_near_the_edges() -> None:
    edge = binomial_stderr(np.array([2, 0, 100]), np.array([100, 100, 100]))
    np.testing.assert_allclose(edge, wilson_stderr(np.array([2, 0, 100]), np.array([100, 100, 100])))
    assert np.all(edge > 0)


def test_stderr_undefined_without_attempts() -> None:
    assert np.isnan(binomial_stderr(np.array([0]), np.array([0]))[0])


def test_result_flags_cells_that_never_transmitted() -> None:
    result = McResult(
        attempted=np.array([10, 0]),
        collision_free=np.array([8, 0]),
        decoded=np.array([6, 0]),
        trials=5,
    )
    np.testing.assert_array_equal(result.undefined, [False, True])
    assert result.success_rate[0] == pytest.approx(0.6)
    assert result.decoding_rate[0] == pytest.approx(0.75)
    assert np.isnan(result.success_rate[1])
    assert np.isnan(result.stderr[1])


def test_result_csv_has_trial_footer() -> None:
    result = McResult(np.array([4]), np.array([3]), np.array([2]), trials=9)
    buffer = io.StringIO()
    result.write_csv(buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "# schema: beamhop-mc/1"
    assert lines[1] == "cell_id,attempted,collision_free,decoded,p_a_mc,p_d_mc,p_suc_mc,mc_stderr,undefined"
    assert lines[-1] == "# trials: 9"


def test_simulate_rejects_wrong_shape(tiny_scenario) -> None:
    with pytest.raises(PatternShapeError):
        simulate(tiny_scenario, np.ones((4, 3)), McConfig(trials=10))


def test_simulate_rejects_unserved_cells(tiny_scenario) -> None:
    x = np.array([[1, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(UnservedCellError):
        simulate(tiny_scenario, x, McConfig(trials=10))


def test_simulate_is_independent_of_worker_count(tiny_scenario) -> None:
    pattern = round_robin_pattern(tiny_scenario)
    one = simulate(tiny_scenario, pattern, McConfig(trials=300, chunk_trials=50, seed=7, workers=1))
    many = simulate(tiny_scenario, pattern, McConfig(trials=300, chunk_trials=50, seed=7, workers=4))
    np.testing.assert_array_equal(one.attempted, many.attempted)
    np.testing.assert_array_equal(one.decoded, many.decoded)


def test_simulate_counts_are_consistent(tiny_scenario) -> None:
    result = simulate(tiny_scenario, round_robin_pattern(tiny_scenario), McConfig(trials=200, seed=1))
    assert np.all(result.decoded <= result.collision_free)
    assert np.all(result.collision_free <= result.attempted)
    assert result.trials == 200


def test_lone_cell_success_matches_collision_formula() -> None:
    scenario = make_scenario([20.0], n_slots=2, n_beams=1, activation=0.05, n_rb=4)
    result = simulate(scenario, np.ones((1, 2)), McConfig(trials=4000, seed=3))
    expected = collision_avoidance(0.05, 20.0, 4, 2)
    assert result.attempted[0] > 2000
    assert result.success_rate[0] == pytest.approx(expected, abs=5 * result.stderr[0])
    assert result.decoded[0] == result.collision_free[0]


def test_record_slots_splits_decoded_by_slot(tiny_scenario) -> None:
    pattern = round_robin_pattern(tiny_scenario)
    result = simulate(tiny_scenario, pattern, McConfig(trials=100, record_slots=True))
    assert result.slot_decoded.shape == (4, 4)
    np.testing.assert_array_equal(result.slot_decoded.sum(axis=1), result.decoded)
    assert np.all(result.slot_decoded[pattern.matrix == 0] == 0)
