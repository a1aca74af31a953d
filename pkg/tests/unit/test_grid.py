import numpy as np
import pytest

from src.scenario.grid import build_cell_grid, hex_cells_within
from src.utils.errors import GridExtentError


def test_hex_cells_within_rings() -> None:
    assert [hex_cells_within(r) for r in range(4)] == [1, 7, 19, 37]


def test_first_site_is_seed_point() -> None:
    sites = build_cell_grid(37.5, 127.0, n_cells=7)
    assert sites[0].lat == 37.5
    assert sites[0].lon == 127.0
    assert sites[0].distance_km == 0.0


def test_sites_are_sorted_by_distance() -> None:
    sites = build_cell_grid(10.0, 20.0, cell_radius_km=20.0, n_cells=19)
    distances = [s.distance_km for s in sites]
    assert len(sites) == 19
    assert distances == sorted(distances)


def test_first_ring_spacing_is_sqrt3_radius() -> None:
    sites = build_cell_grid(0.0, 0.0, cell_radius_km=10.0, n_cells=7)
    ring = np.array([s.distance_km for s in sites[1:]])
    np.testing.assert_allclose(ring, np.sqrt(3.0) * 10.0)


def test_grid_is_deterministic() -> None:
    first = build_cell_grid(5.0, 5.0, n_cells=12)
    second = build_cell_grid(5.0, 5.0, n_cells=12)
    assert first == second


def test_grid_rejects_excess_cells() -> None:
    with pytest.raises(GridExtentError):
        build_cell_grid(0.0, 0.0, n_cells=hex_cells_within(3) + 1, max_rings=3)


def test_grid_rejects_non_positive_count() -> None:
    with pytest.raises(ValueError):
        build_cell_grid(0.0, 0.0, n_cells=0)
