from .builder import PRESET_DIMS, ScenarioConfig, build_scenario, relocate_satellite
from .channel import (
    gain_matrix,
    half_power_beamwidth,
    receive_gain,
    rho_from_link_budget,
)
from .demand import demand_model, generate_demand
from .grid import build_cell_grid
from .models import Cell, LinkBudget, SatelliteGeometry, Scenario
from .storage import load_scenario, save_scenario

__all__ = [
    "Cell",
    "LinkBudget",
    "PRESET_DIMS",
    "SatelliteGeometry",
    "Scenario",
    "ScenarioConfig",
    "build_cell_grid",
    "build_scenario",
    "demand_model",
    "gain_matrix",
    "generate_demand",
    "half_power_beamwidth",
    "load_scenario",
    "receive_gain",
    "relocate_satellite",
    "rho_from_link_budget",
    "save_scenario",
]
