"""Random, round-robin and greedy beam-hopping patterns."""

import logging
from typing import Literal, Optional

import numpy as np

from ..metrics.pattern import BeamHoppingPattern
from ..scenario.models import Scenario

logger = logging.getLogger(__name__)

GreedyCriterion = Literal["devices-per-beam", "inverse"]


def random_pattern(scenario: Scenario, seed: Optional[int] = 0) -> BeamHoppingPattern:
    """Each slot draws N_b cells uniformly with replacement; repeats collapse."""
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, scenario.n_cells, size=(scenario.n_slots, scenario.n_beams))
    x = np.zeros((scenario.n_cells, scenario.n_slots), dtype=np.int8)
    x[picks, np.arange(scenario.n_slots)[:, None]] = 1
    return BeamHoppingPattern(x)


def round_robin_pattern(scenario: Scenario) -> BeamHoppingPattern:
    """Slot t lights cells (t N_b + k) mod N_c for k < N_b."""
    t = np.arange(scenario.n_slots)[:, None]
    k = np.arange(scenario.n_beams)[None, :]
    cells = (t * scenario.n_beams + k) % scenario.n_cells
    x = np.zeros((scenario.n_cells, scenario.n_slots), dtype=np.int8)
    x[cells, np.broadcast_to(t, cells.shape)] = 1
    return BeamHoppingPattern(x)


def greedy_pattern(
    scenario: Scenario, criterion: GreedyCriterion = "devices-per-beam"
) -> BeamHoppingPattern:
    """Per slot, light the N_b cells ranked best by N_i / (a_i + 1).

    `devices-per-beam` favours the highest ratio (under-served, high-demand
    cells); `inverse` favours the lowest.
    """
    if criterion not in ("devices-per-beam", "inverse"):
        raise ValueError(f"Unknown greedy criterion: {criterion}")
    demand = scenario.demand
    served = np.zeros(scenario.n_cells)
    index = np.arange(scenario.n_cells)
    x = np.zeros((scenario.n_cells, scenario.n_slots), dtype=np.int8)
    for t in range(scenario.n_slots):
        ratio = demand / (served + 1.0)
        key = -ratio if criterion == "devices-per-beam" else ratio
        chosen = np.lexsort((index, key))[: scenario.n_beams]
        x[chosen, t] = 1
        served[chosen] += 1.0
    return BeamHoppingPattern(x)
