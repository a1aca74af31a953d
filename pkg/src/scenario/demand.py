"""Hybrid traffic demand model and population inputs."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..utils.errors import ScenarioParseError

logger = logging.getLogger(__name__)


def demand_model(u_i, p_i, eta: float, n_avg: float):
    """N_i = n_avg * (eta * u_i + (1 - eta) * p_i); works on scalars and arrays."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1] ({eta})")
    result = n_avg * (eta * np.asarray(u_i, dtype=float) + (1.0 - eta) * np.asarray(p_i, dtype=float))
    return float(result) if result.ndim == 0 else result


def population_factors(populations: np.ndarray, beta: float) -> np.ndarray:
    """p_i = P_i^beta / P_avg, with P_avg the mean of P_i^beta (unit-mean factors)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1] ({beta})")
    scaled = np.power(np.asarray(populations, dtype=float), beta)
    mean = scaled.mean()
    if mean <= 0.0:
        return np.zeros_like(scaled)
    return scaled / mean


def uniform_factors(n_cells: int, rng: np.random.Generator, low: float = 0.5, high: float = 1.5) -> np.ndarray:
    """u_i ~ U(low, high) for the ubiquitous scenario."""
    return rng.uniform(low, high, size=n_cells)


def synthetic_population(
    n_cells: int, rng: np.random.Generator, log_mean: float = 8.0, log_sigma: float = 1.5
) -> np.ndarray:
    """Log-normal stand-in for gridded population counts."""
    return rng.lognormal(mean=log_mean, sigma=log_sigma, size=n_cells)


def load_population_csv(path: str | Path, n_cells: int) -> np.ndarray:
    """Read `cell_id,population` rows; cells missing from the file get zero population."""
    try:
        frame = pd.read_csv(path, comment="#")
    except (OSError, pd.errors.ParserError) as e:
        raise ScenarioParseError("population", str(e)) from e
    for column in ("cell_id", "population"):
        if column not in frame.columns:
            raise ScenarioParseError(column, f"missing column in {path}")
    populations = np.zeros(n_cells, dtype=float)
    for cell_id, population in zip(frame["cell_id"], frame["population"]):
        if not 0 <= int(cell_id) < n_cells:
            logger.warning(f"Ignoring population row for unknown cell {cell_id}")
            continue
        if population < 0:
            raise ScenarioParseError("population", f"negative population for cell {cell_id}")
        populations[int(cell_id)] = float(population)
    return populations


def generate_demand(
    populations: np.ndarray,
    eta: float,
    beta: float,
    n_avg: float,
    rng: np.random.Generator,
    uniform_low: float = 0.5,
    uniform_high: float = 1.5,
) -> np.ndarray:
    """Per-cell device counts from the demand model, floored at one device."""
    n_cells = len(populations)
    u = uniform_factors(n_cells, rng, uniform_low, uniform_high)
    p = population_factors(populations, beta)
    demand = np.maximum(demand_model(u, p, eta, n_avg), 1.0)
    logger.debug(f"Demand for {n_cells} cells: min {demand.min():.1f}, max {demand.max():.1f}")
    return demand
