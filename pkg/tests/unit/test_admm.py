import numpy as np
import pytest

from src.metrics.quadratic import quadratic_matrix
from src.solvers.admm import (
    ShiftedInverse,
    augmented_lagrangian,
    project_affine,
    project_binary,
    solve_admm,
    x_update,
)
from src.solvers.config import AdmmConfig, PenaltySchedule, initial_penalty
from src.solvers.start import wraparound_pattern
from src.utils.errors import AffineTargetError


def test_project_binary_rounds_half_up() -> None:
    np.testing.assert_array_equal(
        project_binary(np.array([[0.49, 0.5], [-3.0, 7.0]])), [[0.0, 1.0], [0.0, 1.0]]
    )


def test_project_affine_hits_both_sum_targets() -> None:
    rng = np.random.default_rng(1)
    m = rng.standard_normal((5, 4))
    b = np.array([1.0, 2.0, 1.0, 3.0, 1.0])
    z = project_affine(m, b, 2.0)
    np.testing.assert_allclose(z.sum(axis=1), b, atol=1e-10)
    np.testing.assert_allclose(z.sum(axis=0), np.full(4, 2.0), atol=1e-10)


def test_project_affine_is_orthogonal_projection() -> None:
    rng = np.random.default_rng(2)
    m = rng.standard_normal((4, 3))
    b = np.array([2.0, 1.0, 2.0, 1.0])
    z = project_affine(m, b, 2.0)
    np.testing.assert_allclose(project_affine(z, b, 2.0), z, atol=1e-12)
    for _ in range(5):
        other = project_affine(rng.standard_normal((4, 3)), b, 2.0)
        assert float(np.sum((m - z) * (other - z))) == pytest.approx(0.0, abs=1e-10)


def test_project_affine_rejects_inconsistent_targets() -> None:
    with pytest.raises(AffineTargetError):
        project_affine(np.zeros((3, 2)), np.array([1.0, 1.0, 1.0]), 2.0)


def test_shifted_inverse_matches_direct_solve() -> None:
    rng = np.random.default_rng(3)
    m = rng.standard_normal((5, 5))
    g = m @ m.T
    rhs = rng.standard_normal((5, 3))
    inverse = ShiftedInverse(g)
    for shift in (0.1, 1.0, 3.3):
        expected = np.linalg.solve(2.0 * g + shift * np.eye(5), rhs)
        np.testing.assert_allclose(inverse.solve(rhs, shift), expected, atol=1e-10)


def test_x_update_zeroes_lagrangian_gradient() -> None:
    rng = np.random.default_rng(4)
    m = rng.standard_normal((4, 4))
    g = m @ m.T
    z1, z2, y1, y2 = (rng.standard_normal((4, 3)) for _ in range(4))
    x = x_update(z1, z2, y1, y2, g, 0.3, 0.66)
    gradient = 2.0 * g @ x + y1 + 0.3 * (x - z1) + y2 + 0.66 * (x - z2)
    np.testing.assert_allclose(gradient, 0.0, atol=1e-10)
    np.testing.assert_allclose(x, x_update(z1, z2, y1, y2, g, 0.3, 0.66, ShiftedInverse(g)), atol=1e-10)
    base = augmented_lagrangian(x, z1, z2, y1, y2, g, 0.3, 0.66)
    for _ in range(5):
        step = 1e-3 * rng.standard_normal(x.shape)
        assert augmented_lagrangian(x + step, z1, z2, y1, y2, g, 0.3, 0.66) >= base


def test_initial_penalty_from_demand_spread() -> None:
    assert initial_penalty(np.array([10.0, 100.0])) == pytest.approx(0.02)


def test_penalty_schedule_caps_growth() -> None:
    schedule = PenaltySchedule(growth=2.0, cap=3.0)
    assert schedule.advance(1.0) == 2.0
    assert schedule.advance(2.0) == 3.0


def test_solve_admm_records_trace(tiny_scenario) -> None:
    b = np.array([3, 1, 2, 2])
    form = quadratic_matrix(tiny_scenario, b)
    config = AdmmConfig(iterations=50)
    result = solve_admm(form.g, b, tiny_scenario.n_beams, config, rho1=0.1)
    assert len(result.trace) == 50
    assert result.x_binary.shape == (4, 4)
    assert set(np.unique(result.x_binary)) <= {0.0, 1.0}
    assert result.trace.rho1[0] == pytest.approx(0.1)
    assert result.trace.rho1[1] == pytest.approx(0.101)
    assert max(result.trace.rho1) <= config.rho_cap


def test_solve_admm_is_deterministic(tiny_scenario) -> None:
    b = np.array([3, 1, 2, 2])
    form = quadratic_matrix(tiny_scenario, b)
    first = solve_admm(form.g, b, tiny_scenario.n_beams, AdmmConfig(iterations=80))
    second = solve_admm(form.g, b, tiny_scenario.n_beams, AdmmConfig(iterations=80))
    np.testing.assert_array_equal(first.x_relaxed, second.x_relaxed)
    assert np.all(np.isfinite(first.trace.objective))


def test_solve_admm_returns_feasible_pattern_with_allocation(tiny_scenario) -> None:
    b = np.array([3, 1, 2, 2])
    form = quadratic_matrix(tiny_scenario, b)
    result = solve_admm(form.g, b, tiny_scenario.n_beams, AdmmConfig(iterations=60))
    np.testing.assert_array_equal(result.x_binary.sum(axis=1), b)
    np.testing.assert_array_equal(result.x_binary.sum(axis=0), [2, 2, 2, 2])
    assert form.objective(result.x_binary) <= form.objective(wraparound_pattern(b, 4)) + 1e-12


def test_solve_admm_iterates_differ_across_slots(tiny_scenario) -> None:
    b = np.array([2, 2, 2, 2])
    form = quadratic_matrix(tiny_scenario, b)
    result = solve_admm(form.g, b, tiny_scenario.n_beams, AdmmConfig(iterations=30, start_jitter=0.0))
    assert len({tuple(np.round(col, 9)) for col in result.x_relaxed.T}) > 1


def test_solve_admm_seeded_start(tiny_scenario) -> None:
    b = np.array([3, 1, 2, 2])
    form = quadratic_matrix(tiny_scenario, b)
    config = AdmmConfig(iterations=20, start_jitter=0.1)
    first = solve_admm(form.g, b, 2, config, rng=np.random.default_rng(4))
    second = solve_admm(form.g, b, 2, config, rng=np.random.default_rng(4))
    other = solve_admm(form.g, b, 2, config, rng=np.random.default_rng(5))
    np.testing.assert_array_equal(first.x_relaxed, second.x_relaxed)
    assert not np.array_equal(first.x_relaxed, other.x_relaxed)


def test_zero_objective_feasible_start_is_fixed_point() -> None:
    b = np.array([3, 1, 2, 2])
    x0 = wraparound_pattern(b, 4)
    config = AdmmConfig(iterations=25, start_blend=1.0, start_jitter=0.0)
    result = solve_admm(np.zeros((4, 4)), b, 2, config, rho1=0.2)
    np.testing.assert_allclose(result.x_relaxed, x0, atol=1e-12)
    np.testing.assert_array_equal(result.x_binary, x0)
    assert max(result.trace.residual1) == pytest.approx(0.0, abs=1e-12)
    assert max(result.trace.residual2) == pytest.approx(0.0, abs=1e-12)


def test_every_cell_lit_when_beams_match_cells() -> None:
    rng = np.random.default_rng(6)
    m = rng.standard_normal((3, 3))
    for g in (np.zeros((3, 3)), m @ m.T):
        result = solve_admm(g, np.array([4, 4, 4]), 3, AdmmConfig(iterations=30))
        np.testing.assert_array_equal(result.x_binary, np.ones((3, 4)))
