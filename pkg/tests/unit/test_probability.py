import numpy as np
import pytest

from src.metrics.probability import (
    collision_avoidance,
    decoding_success_exact_small,
    decoding_success_lower_bound,
    uniform_decoding_bound,
)
from src.utils.errors import (
    DecodingInfeasibleError,
    InstanceTooLargeError,
    PatternShapeError,
    ProbabilityDomainError,
)
from tests.conftest import make_scenario


def test_collision_avoidance_closed_form() -> None:
    expected = (1.0 - 0.01 / (20 * 8)) ** 999
    assert collision_avoidance(0.01, 1000, 20, 8) == pytest.approx(expected, rel=1e-12)


def test_collision_avoidance_single_device_is_certain() -> None:
    assert collision_avoidance(0.5, 1, 2, 1) == 1.0


def test_collision_avoidance_grows_with_allocation() -> None:
    values = collision_avoidance(0.01, 1000.0, 20, np.arange(1, 10))
    assert values.shape == (9,)
    assert np.all(np.diff(values) > 0.0)


def test_collision_avoidance_domain_errors() -> None:
    with pytest.raises(ProbabilityDomainError):
        collision_avoidance(0.01, 10, 20, 0)
    with pytest.raises(ProbabilityDomainError):
        collision_avoidance(1.0, 10, 1, 1)


def test_lower_bound_two_cells_by_hand() -> None:
    scenario = make_scenario([10.0, 20.0], n_slots=2, n_beams=2, activation=0.05, n_rb=4)
    bound = decoding_success_lower_bound(scenario, np.ones((2, 2)))
    margin = 1.0 - 1e-3
    np.testing.assert_allclose(
        bound.raw, [1.0 - 0.05 / (8 * margin), 1.0 - 0.025 / (8 * margin)], rtol=1e-12
    )
    np.testing.assert_array_equal(bound.clamped, bound.raw)


def test_lower_bound_without_overlap_is_one() -> None:
    scenario = make_scenario([10.0, 20.0], n_slots=2, n_beams=1)
    bound = decoding_success_lower_bound(scenario, np.eye(2))
    np.testing.assert_allclose(bound.raw, [1.0, 1.0])


def test_lower_bound_flags_unserved_cells() -> None:
    scenario = make_scenario([10.0, 20.0, 5.0], n_slots=2, n_beams=2)
    bound = decoding_success_lower_bound(scenario, np.array([[1, 1], [1, 1], [0, 0]]))
    np.testing.assert_array_equal(bound.unserved, [False, False, True])
    assert bound.raw[2] == 0.0


def test_lower_bound_flags_decoding_infeasible_cells() -> None:
    scenario = make_scenario([10.0, 20.0], n_slots=2, n_beams=1, gamma_th_db=40.0)
    bound = decoding_success_lower_bound(scenario, np.eye(2))
    assert bound.infeasible.all()
    np.testing.assert_array_equal(bound.clamped, [0.0, 0.0])


def test_heavy_interference_clamps_to_zero() -> None:
    scenario = make_scenario([10.0, 500.0], n_slots=1, n_beams=2, activation=0.5, n_rb=1, cross_gain=0.9)
    bound = decoding_success_lower_bound(scenario, np.ones((2, 1)))
    assert bound.raw[0] < 0.0
    assert bound.clamped[0] == 0.0


def test_lower_bound_rejects_wrong_shape() -> None:
    scenario = make_scenario([10.0, 20.0], n_slots=2, n_beams=1)
    with pytest.raises(PatternShapeError):
        decoding_success_lower_bound(scenario, np.ones((2, 3)))


def test_uniform_bound_matches_uniform_fractional_pattern(tiny_scenario) -> None:
    b = np.array([3, 1, 2, 2])
    x = np.repeat((b / tiny_scenario.n_slots)[:, None], tiny_scenario.n_slots, axis=1)
    np.testing.assert_allclose(
        decoding_success_lower_bound(tiny_scenario, x, b).raw,
        uniform_decoding_bound(tiny_scenario),
        rtol=1e-12,
    )


def test_uniform_bound_rejects_infeasible_decoding() -> None:
    scenario = make_scenario([10.0, 20.0], n_slots=2, n_beams=1, gamma_th_db=40.0)
    with pytest.raises(DecodingInfeasibleError) as info:
        uniform_decoding_bound(scenario)
    assert info.value.cell_ids == [0, 1]


def test_exact_success_dominates_markov_bound(exact_scenario) -> None:
    x = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    bound = decoding_success_lower_bound(exact_scenario, x).clamped
    for cell in range(3):
        exact = decoding_success_exact_small(exact_scenario, x, cell)
        assert 0.0 <= exact <= 1.0
        assert exact >= bound[cell] - 1e-12


def test_exact_success_alone_in_slot_is_one(exact_scenario) -> None:
    x = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert decoding_success_exact_small(exact_scenario, x, 0) == pytest.approx(1.0)


def test_exact_success_single_interferer_by_hand() -> None:
    # cell 1 interferes with gain 2 > margin whenever at least one of its 3 devices picks the RB
    scenario = make_scenario(
        [3.0, 3.0],
        gains=np.array([[1.0, 2.0], [2.0, 1.0]]),
        n_slots=1,
        n_beams=2,
        activation=0.4,
        n_rb=2,
    )
    expected = (1.0 - 0.4 / 2) ** 3
    assert decoding_success_exact_small(scenario, np.ones((2, 1)), 0) == pytest.approx(expected)


def test_exact_success_unlit_cell_is_zero(exact_scenario) -> None:
    x = np.array([[0, 0, 0], [1, 1, 0], [1, 1, 1]])
    assert decoding_success_exact_small(exact_scenario, x, 0) == 0.0


def test_exact_success_size_limits() -> None:
    many_cells = make_scenario([2.0] * 7, n_slots=2, n_beams=2)
    with pytest.raises(InstanceTooLargeError):
        decoding_success_exact_small(many_cells, np.ones((7, 2)), 0)
    many_devices = make_scenario([40.0, 2.0], n_slots=2, n_beams=2)
    with pytest.raises(InstanceTooLargeError):
        decoding_success_exact_small(many_devices, np.ones((2, 2)), 0)
