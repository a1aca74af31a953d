"""Scenario domain types: cells, satellite geometry, link budget."""

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..utils.errors import ScenarioValidationError

SPEED_OF_LIGHT = 299_792_458.0
EARTH_RADIUS_KM = 6371.0


def db_to_linear(value_db: float) -> float:
    return float(10.0 ** (value_db / 10.0))


def linear_to_db(value: float) -> float:
    return float(10.0 * np.log10(value))


@dataclass(frozen=True)
class Cell:
    """A ground cell served by the satellite."""
    id: int
    lat: float  # degrees
    lon: float  # degrees
    demand: float  # N_i, may be fractional
    activation: float = 0.01  # alpha_i

    def __post_init__(self) -> None:
        if not 0.0 < self.activation <= 1.0:
            raise ScenarioValidationError(
                f"cell {self.id}: activation probability out of range ({self.activation})"
            )
        if not self.demand >= 1.0:
            raise ScenarioValidationError(f"cell {self.id}: demand must be >= 1 ({self.demand})")
        if not -90.0 <= self.lat <= 90.0:
            raise ScenarioValidationError(f"cell {self.id}: latitude out of range ({self.lat})")
        if not -180.0 <= self.lon < 180.0:
            raise ScenarioValidationError(f"cell {self.id}: longitude out of range ({self.lon})")


@dataclass(frozen=True)
class SatelliteGeometry:
    """Sub-satellite point and altitude."""
    lat: float  # degrees
    lon: float  # degrees
    altitude_km: float = 600.0
    earth_radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self) -> None:
        if not self.altitude_km > 0.0:
            raise ScenarioValidationError(f"altitude must be positive ({self.altitude_km})")
        if not self.earth_radius_km > 0.0:
            raise ScenarioValidationError("earth radius must be positive")

    def moved_to(self, lat: float, lon: float) -> "SatelliteGeometry":
        """Copy of this geometry with a different sub-satellite point."""
        return replace(self, lat=lat, lon=lon)


@dataclass(frozen=True)
class LinkBudget:
    """Uplink budget. Gains and thresholds are kept in dB, exposed linear."""
    g_t_dbi: float = 0.0
    carrier_hz: float = 2.0e9
    aperture_m: float = 2.0
    efficiency: float = 0.55
    rho_db: float = 162.7
    gamma_th_db: float = 5.0
    n_rb: int = 20
    g_max_dbi: Optional[float] = None  # overrides the aperture formula when set

    def __post_init__(self) -> None:
        for name in ("carrier_hz", "aperture_m", "efficiency"):
            if not getattr(self, name) > 0.0:
                raise ScenarioValidationError(f"link.{name} must be positive")
        if int(self.n_rb) != self.n_rb or self.n_rb < 1:
            raise ScenarioValidationError(f"link.n_r must be a positive integer ({self.n_rb})")
        if not np.isfinite(self.rho_db) or not np.isfinite(self.gamma_th_db):
            raise ScenarioValidationError("link.rho_db and link.gamma_th_db must be finite")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def g_t(self) -> float:
        return db_to_linear(self.g_t_dbi)

    @property
    def g_max(self) -> float:
        """Boresight receive gain, efficiency * (pi D / lambda)^2 unless overridden."""
        if self.g_max_dbi is not None:
            return db_to_linear(self.g_max_dbi)
        return float(self.efficiency * (np.pi * self.aperture_m / self.wavelength) ** 2)

    @property
    def rho(self) -> float:
        return db_to_linear(self.rho_db)

    @property
    def gamma_th(self) -> float:
        return db_to_linear(self.gamma_th_db)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable physical scenario with its average channel-gain matrix."""
    cells: tuple[Cell, ...]
    geometry: SatelliteGeometry
    link: LinkBudget
    gains: np.ndarray
    n_slots: int
    n_beams: int
    name: str = field(default="scenario")

    def __post_init__(self) -> None:
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        n = len(cells)
        if n < 1:
            raise ScenarioValidationError("scenario needs at least one cell")
        if [c.id for c in cells] != list(range(n)):
            raise ScenarioValidationError("cell ids must be 0..N_c-1 in order")
        if self.n_slots < 1:
            raise ScenarioValidationError(f"n_slot must be positive ({self.n_slots})")
        if not 1 <= self.n_beams <= n:
            raise ScenarioValidationError(
                f"n_b must satisfy 1 <= n_b <= n_c (n_b={self.n_beams}, n_c={n})"
            )
        gains = np.array(self.gains, dtype=float)
        if gains.shape != (n, n):
            raise ScenarioValidationError(f"gains must be {n}x{n}, got {gains.shape}")
        if not np.all(np.isfinite(gains)) or not np.all(gains > 0.0):
            raise ScenarioValidationError("gains must be finite and strictly positive")
        gains.setflags(write=False)
        object.__setattr__(self, "gains", gains)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.cells == other.cells
            and self.geometry == other.geometry
            and self.link == other.link
            and self.n_slots == other.n_slots
            and self.n_beams == other.n_beams
            and np.array_equal(self.gains, other.gains)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def demand(self) -> np.ndarray:
        return np.array([c.demand for c in self.cells], dtype=float)

    @property
    def activation(self) -> np.ndarray:
        return np.array([c.activation for c in self.cells], dtype=float)

    @property
    def integer_demand(self) -> np.ndarray:
        """N_i rounded to the nearest integer >= 1, as used by simulation."""
        return np.maximum(np.rint(self.demand), 1).astype(np.int64)

    @property
    def capacity(self) -> int:
        """Total beam-slot budget N_slot * N_b."""
        return self.n_slots * self.n_beams

    @property
    def decoding_margin(self) -> np.ndarray:
        """g_ii / gamma_th - 1 / rho per cell; non-positive means decoding is infeasible."""
        return np.diag(self.gains) / self.link.gamma_th - 1.0 / self.link.rho

    @property
    def is_capacity_feasible(self) -> bool:
        return self.n_cells <= self.capacity

    def with_gains(self, gains: np.ndarray) -> "Scenario":
        return replace(self, gains=gains)

    def with_cells(self, cells: Sequence[Cell], gains: np.ndarray) -> "Scenario":
        return replace(self, cells=tuple(cells), gains=gains)

    def with_dims(self, n_slots: int, n_beams: int) -> "Scenario":
        return replace(self, n_slots=n_slots, n_beams=n_beams)
