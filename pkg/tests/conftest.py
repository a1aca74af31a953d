"""Shared fixtures and brute-force oracles."""

import itertools
from typing import Optional, Sequence

import numpy as np
import pytest

from src.pipeline.events import get_event_emitter
from src.scenario.builder import ScenarioConfig, build_scenario
from src.scenario.models import Cell, LinkBudget, SatelliteGeometry, Scenario


def make_scenario(
    demand: Sequence[float],
    gains: Optional[np.ndarray] = None,
    n_slots: int = 4,
    n_beams: int = 2,
    activation: float = 0.05,
    n_rb: int = 4,
    rho_db: float = 30.0,
    gamma_th_db: float = 0.0,
    cross_gain: float = 0.05,
    name: str = "synthetic",
) -> Scenario:
    """Scenario with a hand-made gain matrix; unit own-gain and flat cross-gain by default."""
    n = len(demand)
    if gains is None:
        gains = np.full((n, n), cross_gain)
        np.fill_diagonal(gains, 1.0)
    cells = tuple(
        Cell(id=k, lat=10.0 + 0.1 * k, lon=20.0, demand=float(d), activation=activation)
        for k, d in enumerate(demand)
    )
    return Scenario(
        cells=cells,
        geometry=SatelliteGeometry(lat=10.0, lon=20.0),
        link=LinkBudget(rho_db=rho_db, gamma_th_db=gamma_th_db, n_rb=n_rb),
        gains=np.asarray(gains, dtype=float),
        n_slots=n_slots,
        n_beams=n_beams,
        name=name,
    )


def random_gains(n: int, seed: int, own: float = 1.0, cross: float = 0.1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    gains = rng.uniform(0.2, 1.0, size=(n, n)) * cross
    np.fill_diagonal(gains, own)
    return gains


def enumerate_allocations(scenario: Scenario, score) -> tuple[float, np.ndarray]:
    """Best max-min score over integer allocations 1 <= b_i <= N_slot with sum(b) <= capacity.

    `score(b)` returns the per-cell values to maximize the minimum of.
    """
    best_value, best_b = -np.inf, None
    for combo in itertools.product(range(1, scenario.n_slots + 1), repeat=scenario.n_cells):
        b = np.array(combo)
        if b.sum() > scenario.capacity:
            continue
        value = float(np.min(score(b)))
        if value > best_value:
            best_value, best_b = value, b
    return best_value, best_b


def enumerate_patterns(n_cells: int, n_slots: int, n_beams: int, b: Optional[np.ndarray] = None):
    """Yield every binary pattern with N_b cells per slot (and row sums b when given)."""
    columns = []
    for lit in itertools.combinations(range(n_cells), n_beams):
        column = np.zeros(n_cells, dtype=np.int8)
        column[list(lit)] = 1
        columns.append(column)
    for choice in itertools.product(columns, repeat=n_slots):
        x = np.stack(choice, axis=1)
        if b is not None and not np.array_equal(x.sum(axis=1), b):
            continue
        yield x


@pytest.fixture(autouse=True)
def _fresh_structlog_loggers(monkeypatch):
    """Module-level structlog loggers cache the stderr captured by the first test; rebind per test."""
    import structlog

    from src.cli import main as cli_main
    from src.pipeline import events, sweep

    structlog.reset_defaults()
    monkeypatch.setattr(cli_main, "logger", structlog.get_logger(cli_main.__name__))
    monkeypatch.setattr(sweep, "logger", structlog.get_logger(sweep.__name__))
    monkeypatch.setattr(events, "progress_logger", structlog.get_logger("beamhop.progress"))
    yield
    structlog.reset_defaults()


@pytest.fixture(autouse=True)
def _clear_events():
    get_event_emitter().clear()
    yield
    get_event_emitter().clear()


@pytest.fixture
def tiny_scenario() -> Scenario:
    """4 cells, 4 slots, 2 beams with unequal demand."""
    return make_scenario([20.0, 8.0, 14.0, 5.0], gains=random_gains(4, seed=3))


@pytest.fixture
def exact_scenario() -> Scenario:
    """Small device counts so the exact decoding oracle can enumerate."""
    return make_scenario(
        [12.0, 9.0, 15.0],
        gains=np.array([[1.0, 0.4, 0.2], [0.3, 1.0, 0.5], [0.25, 0.35, 1.0]]),
        n_slots=3,
        n_beams=2,
        activation=0.3,
        n_rb=2,
    )


@pytest.fixture(scope="session")
def desk_config() -> ScenarioConfig:
    return ScenarioConfig(n_cells=20, n_beams=3, n_slots=16, seed=11, name="desk")


@pytest.fixture(scope="session")
def desk_scenario(desk_config) -> Scenario:
    return build_scenario(desk_config)
