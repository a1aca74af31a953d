"""Synthetic hexagonal cell tiling projected onto the sphere."""

from dataclasses import dataclass

import numpy as np

from ..utils.errors import GridExtentError
from .models import EARTH_RADIUS_KM

DEFAULT_CELL_RADIUS_KM = 23.73
MAX_RINGS = 200


@dataclass(frozen=True)
class GridSite:
    """A hexagon centre on the sphere with its axial tiling coordinates."""
    lat: float
    lon: float
    q: int
    r: int
    distance_km: float  # great-circle distance from the seed point


def hex_cells_within(rings: int) -> int:
    """Number of hexagons within `rings` rings of a centre hexagon."""
    return 1 + 3 * rings * (rings + 1)


def _axial_coordinates(rings: int) -> np.ndarray:
    coords = [
        (q, r)
        for q in range(-rings, rings + 1)
        for r in range(max(-rings, -q - rings), min(rings, -q + rings) + 1)
    ]
    return np.array(coords, dtype=np.int64)


def _destination(
    lat0_deg: float, lon0_deg: float, distance_km: np.ndarray, bearing_rad: np.ndarray, radius_km: float
) -> tuple[np.ndarray, np.ndarray]:
    """Points at a given great-circle distance and bearing from (lat0, lon0)."""
    lat0 = np.radians(lat0_deg)
    lon0 = np.radians(lon0_deg)
    delta = distance_km / radius_km
    lat = np.arcsin(np.sin(lat0) * np.cos(delta) + np.cos(lat0) * np.sin(delta) * np.cos(bearing_rad))
    lon = lon0 + np.arctan2(
        np.sin(bearing_rad) * np.sin(delta) * np.cos(lat0),
        np.cos(delta) - np.sin(lat0) * np.sin(lat),
    )
    lon_deg = (np.degrees(lon) + 180.0) % 360.0 - 180.0
    return np.degrees(lat), lon_deg


def build_cell_grid(
    center_lat: float,
    center_lon: float,
    cell_radius_km: float = DEFAULT_CELL_RADIUS_KM,
    n_cells: int = 1,
    earth_radius_km: float = EARTH_RADIUS_KM,
    max_rings: int = MAX_RINGS,
) -> list[GridSite]:
    """The n_cells hexagon centres nearest the seed point, nearest first.

    Hexagons are pointy-top with circumradius `cell_radius_km`, laid out in
    the tangent plane at the seed and mapped to the sphere azimuthally, so the
    planar distance of each centre equals its great-circle distance.
    """
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1 ({n_cells})")
    if not cell_radius_km > 0.0:
        raise ValueError(f"cell_radius_km must be positive ({cell_radius_km})")

    needed = 0
    while hex_cells_within(needed) < n_cells:
        needed += 1
    # Ring m is at least 1.5 m r away, so 2 * needed + 1 rings cover every nearer centre
    rings = 2 * needed + 1
    if needed > max_rings:
        raise GridExtentError(
            f"{n_cells} cells exceed the tiling extent of {hex_cells_within(max_rings)} cells"
        )
    rings = min(rings, max_rings)

    axial = _axial_coordinates(rings)
    q = axial[:, 0].astype(float)
    r = axial[:, 1].astype(float)
    x = cell_radius_km * np.sqrt(3.0) * (q + r / 2.0)  # east
    y = cell_radius_km * 1.5 * r  # north
    distance = np.hypot(x, y)

    order = np.lexsort((axial[:, 1], axial[:, 0], np.round(distance, 6)))[:n_cells]
    if distance[order[-1]] >= np.pi * earth_radius_km / 2.0:
        raise GridExtentError(f"{n_cells} cells of radius {cell_radius_km} km exceed a hemisphere")

    bearing = np.arctan2(x[order], y[order])
    lat, lon = _destination(center_lat, center_lon, distance[order], bearing, earth_radius_km)
    # The seed itself maps back exactly
    lat[distance[order] == 0.0] = center_lat
    lon[distance[order] == 0.0] = center_lon
    return [
        GridSite(
            lat=float(lat[k]),
            lon=float(lon[k]),
            q=int(axial[idx, 0]),
            r=int(axial[idx, 1]),
            distance_km=float(distance[idx]),
        )
        for k, idx in enumerate(order)
    ]
