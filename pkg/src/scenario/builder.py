"""Assemble complete scenarios from generator parameters and presets."""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..utils.config import get_yaml_config
from .channel import gain_matrix, rho_from_link_budget
from .demand import generate_demand, load_population_csv, synthetic_population
from .grid import DEFAULT_CELL_RADIUS_KM, build_cell_grid
from .models import Cell, LinkBudget, SatelliteGeometry, Scenario

logger = logging.getLogger(__name__)

Preset = Literal["paper", "desk"]

PRESET_DIMS: dict[str, dict[str, int]] = {
    "paper": {"n_cells": 80, "n_beams": 6, "n_slots": 64},
    "desk": {"n_cells": 20, "n_beams": 3, "n_slots": 16},
}


class ScenarioConfig(BaseModel):
    """Generator parameters; defaults follow the simulation parameter table."""
    n_cells: int = Field(default=80, ge=1)
    n_beams: int = Field(default=6, ge=1)
    n_slots: int = Field(default=64, ge=1)
    n_r: int = Field(default=20, ge=1)
    activation: float = Field(default=0.01, gt=0.0, le=1.0)
    n_avg: float = Field(default=1000.0, gt=0.0)
    beta: float = Field(default=0.5, ge=0.0, le=1.0)
    eta: float = Field(default=0.3, ge=0.0, le=1.0)
    uniform_low: float = 0.5
    uniform_high: float = 1.5
    population_log_mean: float = 8.0
    population_log_sigma: float = 1.5
    cell_radius_km: float = Field(default=DEFAULT_CELL_RADIUS_KM, gt=0.0)
    center_lat: float = Field(default=37.5, ge=-90.0, le=90.0)
    center_lon: float = Field(default=127.0, ge=-180.0, lt=180.0)
    altitude_km: float = Field(default=600.0, gt=0.0)
    g_t_dbi: float = 0.0
    f_c_hz: float = Field(default=2.0e9, gt=0.0)
    aperture_m: float = Field(default=2.0, gt=0.0)
    efficiency: float = Field(default=0.55, gt=0.0, le=1.0)
    gamma_th_db: float = 5.0
    rho_db: Optional[float] = None
    p_tx_dbm: float = 23.0
    g_over_t_dbk: float = 1.1
    bandwidth_hz: float = Field(default=1.0e6, gt=0.0)
    boltzmann_dbw: float = -228.6
    seed: int = 0
    population_csv: Optional[Path] = None
    name: str = "scenario"

    @model_validator(mode="after")
    def _check_dims(self) -> "ScenarioConfig":
        if self.n_beams > self.n_cells:
            raise ValueError(f"n_beams ({self.n_beams}) cannot exceed n_cells ({self.n_cells})")
        if self.uniform_low > self.uniform_high:
            raise ValueError("uniform_low must not exceed uniform_high")
        return self

    @classmethod
    def from_yaml(cls, preset: Optional[Preset] = None, **overrides) -> "ScenarioConfig":
        """Defaults from config.yaml, then the preset dims, then explicit overrides."""
        yaml_config = get_yaml_config()
        values: dict = {}
        demand = yaml_config.section("scenario.demand")
        for key in ("n_avg", "beta", "eta", "activation", "uniform_low", "uniform_high",
                    "population_log_mean", "population_log_sigma"):
            if key in demand:
                values[key] = demand[key]
        satellite = yaml_config.section("scenario.satellite")
        if satellite:
            values["center_lat"] = satellite.get("lat", 37.5)
            values["center_lon"] = satellite.get("lon", 127.0)
            values["altitude_km"] = satellite.get("altitude_km", 600.0)
        link = yaml_config.section("scenario.link")
        for key in ("g_t_dbi", "f_c_hz", "aperture_m", "efficiency", "gamma_th_db", "n_r",
                    "p_tx_dbm", "g_over_t_dbk", "bandwidth_hz", "boltzmann_dbw"):
            if key in link:
                values[key] = link[key]
        radius = yaml_config.get("scenario.cell_radius_km")
        if radius is not None:
            values["cell_radius_km"] = radius
        if preset is not None:
            dims = yaml_config.section(f"scenario.presets.{preset}") or PRESET_DIMS[preset]
            values.update(dims)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def link_budget(self) -> LinkBudget:
        rho_db = self.rho_db
        if rho_db is None:
            rho_db = rho_from_link_budget(
                self.p_tx_dbm, self.g_over_t_dbk, self.bandwidth_hz, self.boltzmann_dbw
            )
        return LinkBudget(
            g_t_dbi=self.g_t_dbi,
            carrier_hz=self.f_c_hz,
            aperture_m=self.aperture_m,
            efficiency=self.efficiency,
            rho_db=rho_db,
            gamma_th_db=self.gamma_th_db,
            n_rb=self.n_r,
        )


def build_scenario(
    config: ScenarioConfig,
    geometry: Optional[SatelliteGeometry] = None,
) -> Scenario:
    """Grid, demand and gains for the given generator parameters.

    The satellite defaults to nadir over the grid seed point; pass `geometry`
    to place it elsewhere.
    """
    rng = np.random.default_rng(config.seed)
    sites = build_cell_grid(
        config.center_lat, config.center_lon, config.cell_radius_km, config.n_cells
    )
    if config.population_csv is not None:
        populations = load_population_csv(config.population_csv, config.n_cells)
    else:
        populations = synthetic_population(
            config.n_cells, rng, config.population_log_mean, config.population_log_sigma
        )
    demand = generate_demand(
        populations,
        config.eta,
        config.beta,
        config.n_avg,
        rng,
        config.uniform_low,
        config.uniform_high,
    )
    cells = tuple(
        Cell(id=k, lat=site.lat, lon=site.lon, demand=float(demand[k]), activation=config.activation)
        for k, site in enumerate(sites)
    )
    if geometry is None:
        geometry = SatelliteGeometry(
            lat=config.center_lat, lon=config.center_lon, altitude_km=config.altitude_km
        )
    link = config.link_budget()
    scenario = Scenario(
        cells=cells,
        geometry=geometry,
        link=link,
        gains=gain_matrix(cells, geometry, link),
        n_slots=config.n_slots,
        n_beams=config.n_beams,
        name=config.name,
    )
    logger.info(
        f"Built scenario '{config.name}': {config.n_cells} cells, "
        f"{config.n_beams} beams, {config.n_slots} slots"
    )
    return scenario


def relocate_satellite(scenario: Scenario, lat: float, lon: float) -> Scenario:
    """Same cells and link, satellite moved; gains are rebuilt."""
    geometry = scenario.geometry.moved_to(lat, lon)
    gains = gain_matrix(scenario.cells, geometry, scenario.link)
    return replace(scenario, geometry=geometry, gains=gains)
