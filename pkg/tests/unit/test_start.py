import numpy as np
import pytest

from src.solvers.admm import project_binary
from src.solvers.start import BestRounding, staggered_start, wraparound_pattern


def test_wraparound_pattern_meets_both_sums() -> None:
    b = np.array([3, 1, 2, 2])
    x = wraparound_pattern(b, 4)
    np.testing.assert_array_equal(x.sum(axis=1), b)
    np.testing.assert_array_equal(x.sum(axis=0), [2, 2, 2, 2])
    np.testing.assert_array_equal(x[0], [1, 1, 1, 0])
    np.testing.assert_array_equal(x[1], [0, 0, 0, 1])


def test_wraparound_pattern_desk_sized() -> None:
    rng = np.random.default_rng(2)
    for _ in range(50):
        n_cells, n_slots, n_beams = 20, 16, 3
        b = np.ones(n_cells, dtype=int)
        for cell in rng.choice(n_cells, size=n_slots * n_beams - n_cells):
            b[cell] += 1
        b = np.minimum(b, n_slots)
        b[np.argmin(b)] += n_slots * n_beams - b.sum()
        x = wraparound_pattern(b, n_slots)
        np.testing.assert_array_equal(x.sum(axis=1), b)
        np.testing.assert_array_equal(x.sum(axis=0), np.full(n_slots, n_beams))


def test_wraparound_pattern_rejects_oversized_allocation() -> None:
    with pytest.raises(ValueError):
        wraparound_pattern(np.array([5, 1]), 4)


def test_staggered_start_breaks_column_symmetry() -> None:
    b = np.array([3.0, 1.0, 2.0, 2.0])
    x = staggered_start(b, 4, blend=0.5)
    assert len({tuple(col) for col in x.T}) > 1
    np.testing.assert_allclose(x.sum(axis=1), b)
    np.testing.assert_allclose(x.sum(axis=0), 2.0)
    np.testing.assert_array_equal(project_binary(x), wraparound_pattern(b, 4))


def test_staggered_start_blend_zero_is_uniform() -> None:
    x = staggered_start(np.array([2.0, 4.0]), 4, blend=0.0)
    np.testing.assert_allclose(x, [[0.5] * 4, [1.0] * 4])


def test_staggered_start_jitter_is_seeded_and_bounded() -> None:
    b = np.array([3.0, 1.0, 2.0, 2.0])
    first = staggered_start(b, 4, jitter=0.05, rng=np.random.default_rng(7))
    second = staggered_start(b, 4, jitter=0.05, rng=np.random.default_rng(7))
    other = staggered_start(b, 4, jitter=0.05, rng=np.random.default_rng(8))
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, other)
    assert np.all((first >= 0.0) & (first <= 1.0))
    assert np.max(np.abs(first - staggered_start(b, 4))) <= 0.05


def test_best_rounding_keeps_lowest_feasible_objective() -> None:
    g = np.diag([1.0, 2.0, 3.0])
    best = BestRounding(g, np.array([1, 1, 0]), 1)
    assert not best.offer(np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]]))
    assert best.offer(np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]]))
    assert not best.offer(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    assert best.objective == pytest.approx(3.0)
    assert best.offers == 3

    fallback = np.zeros((3, 2))
    np.testing.assert_array_equal(best.result(fallback), [[0, 1], [1, 0], [0, 0]])
    assert BestRounding(g, np.array([1, 1, 0]), 1).result(fallback) is fallback
