"""Scenario file schema, loading and saving."""

import logging
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..utils.errors import ScenarioParseError, ScenarioValidationError
from .channel import gain_matrix, rho_from_link_budget
from .models import Cell, LinkBudget, SatelliteGeometry, Scenario

logger = logging.getLogger(__name__)

SCENARIO_SCHEMA = "beamhop-scenario/1"


class CellRecord(BaseModel):
    """One entry of `cells[]`."""
    id: int
    lat: float
    lon: float
    demand: float
    activation: float


class SatelliteRecord(BaseModel):
    """The `satellite` section."""
    lat: float
    lon: float
    altitude_km: float
    earth_radius_km: float = 6371.0


class LinkRecord(BaseModel):
    """The `link` section; either `rho_db` or the four budget sub-fields."""
    g_t_dbi: float = 0.0
    f_c_hz: float
    aperture_m: float
    efficiency: float = 0.55
    g_max_dbi: Optional[float] = None
    rho_db: Optional[float] = None
    p_tx_dbm: Optional[float] = None
    g_over_t_dbk: Optional[float] = None
    bandwidth_hz: Optional[float] = None
    boltzmann_dbw: float = -228.6
    gamma_th_db: float
    n_r: int

    @model_validator(mode="after")
    def _resolve_rho(self) -> "LinkRecord":
        if self.rho_db is None:
            budget = (self.p_tx_dbm, self.g_over_t_dbk, self.bandwidth_hz)
            if any(v is None for v in budget):
                raise ValueError("rho_db or p_tx_dbm/g_over_t_dbk/bandwidth_hz required")
            self.rho_db = rho_from_link_budget(
                self.p_tx_dbm, self.g_over_t_dbk, self.bandwidth_hz, self.boltzmann_dbw
            )
        return self


class PatternDims(BaseModel):
    """The `pattern_dims` section."""
    n_slot: int = Field(..., ge=1)
    n_b: int = Field(..., ge=1)


class ScenarioFile(BaseModel):
    """On-disk scenario document."""
    schema_version: str = Field(default=SCENARIO_SCHEMA, alias="schema")
    name: str = "scenario"
    cells: list[CellRecord]
    satellite: SatelliteRecord
    link: LinkRecord
    pattern_dims: PatternDims
    gains: Optional[list[list[float]]] = None

    model_config = ConfigDict(populate_by_name=True)


def _first_error_field(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first.get("loc", ())) or "document"


def scenario_from_document(doc: ScenarioFile) -> Scenario:
    """Build and validate a Scenario from a parsed document."""
    cells = tuple(
        Cell(id=c.id, lat=c.lat, lon=c.lon, demand=c.demand, activation=c.activation)
        for c in doc.cells
    )
    geometry = SatelliteGeometry(
        lat=doc.satellite.lat,
        lon=doc.satellite.lon,
        altitude_km=doc.satellite.altitude_km,
        earth_radius_km=doc.satellite.earth_radius_km,
    )
    link = LinkBudget(
        g_t_dbi=doc.link.g_t_dbi,
        carrier_hz=doc.link.f_c_hz,
        aperture_m=doc.link.aperture_m,
        efficiency=doc.link.efficiency,
        rho_db=doc.link.rho_db,
        gamma_th_db=doc.link.gamma_th_db,
        n_rb=doc.link.n_r,
        g_max_dbi=doc.link.g_max_dbi,
    )
    if doc.gains is None:
        logger.info("Scenario file has no gains; recomputing from geometry")
        gains = gain_matrix(cells, geometry, link)
    else:
        gains = doc.gains
    return Scenario(
        cells=cells,
        geometry=geometry,
        link=link,
        gains=gains,
        n_slots=doc.pattern_dims.n_slot,
        n_beams=doc.pattern_dims.n_b,
        name=doc.name,
    )


def scenario_to_document(scenario: Scenario, include_gains: bool = True) -> ScenarioFile:
    link = scenario.link
    return ScenarioFile(
        name=scenario.name,
        cells=[
            CellRecord(id=c.id, lat=c.lat, lon=c.lon, demand=c.demand, activation=c.activation)
            for c in scenario.cells
        ],
        satellite=SatelliteRecord(
            lat=scenario.geometry.lat,
            lon=scenario.geometry.lon,
            altitude_km=scenario.geometry.altitude_km,
            earth_radius_km=scenario.geometry.earth_radius_km,
        ),
        link=LinkRecord(
            g_t_dbi=link.g_t_dbi,
            f_c_hz=link.carrier_hz,
            aperture_m=link.aperture_m,
            efficiency=link.efficiency,
            g_max_dbi=link.g_max_dbi,
            rho_db=link.rho_db,
            gamma_th_db=link.gamma_th_db,
            n_r=link.n_rb,
        ),
        pattern_dims=PatternDims(n_slot=scenario.n_slots, n_b=scenario.n_beams),
        gains=scenario.gains.tolist() if include_gains else None,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario file; recomputes gains when the file omits them."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioParseError("file", str(e)) from e
    try:
        doc = ScenarioFile.model_validate_json(text)
    except ValidationError as e:
        field = _first_error_field(e)
        raise ScenarioParseError(field, e.errors()[0].get("msg", "invalid value")) from e
    try:
        return scenario_from_document(doc)
    except ScenarioValidationError:
        raise
    except ValueError as e:
        raise ScenarioValidationError(str(e)) from e


def save_scenario(scenario: Scenario, path: str | Path, include_gains: bool = True) -> Path:
    """Write a scenario file (JSON); gains are stored linear and row-major."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = scenario_to_document(scenario, include_gains=include_gains)
    path.write_text(doc.model_dump_json(by_alias=True, indent=2))
    logger.info(f"Saved scenario '{scenario.name}' ({scenario.n_cells} cells) to {path}")
    return path
