"""Antenna pattern, slant geometry and the average channel-gain matrix."""

import logging
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import j1, jn_zeros

from ..utils.errors import BelowHorizonError
from .models import Cell, LinkBudget, SatelliteGeometry

logger = logging.getLogger(__name__)

FIRST_J1_ZERO = float(jn_zeros(1, 1)[0])  # 3.8317...


def rho_from_link_budget(
    p_tx_dbm: float = 23.0,
    g_over_t_dbk: float = 1.1,
    bandwidth_hz: float = 1.0e6,
    boltzmann_dbw: float = -228.6,
) -> float:
    """System SNR in dB: P_tx + G/T - k - 10 log10(B)."""
    p_tx_dbw = p_tx_dbm - 30.0
    return float(p_tx_dbw + g_over_t_dbk - boltzmann_dbw - 10.0 * np.log10(bandwidth_hz))


def aperture_argument(theta_rad: np.ndarray | float, link: LinkBudget) -> np.ndarray:
    """u = (2 pi a / lambda) sin(theta) for aperture radius a."""
    radius = link.aperture_m / 2.0
    return 2.0 * np.pi * radius / link.wavelength * np.sin(np.asarray(theta_rad, dtype=float))


def receive_gain(theta_rad: np.ndarray | float, link: LinkBudget) -> np.ndarray | float:
    """Circular-aperture pattern G_max * 4 |J1(u) / u|^2, G_max at boresight."""
    theta = np.asarray(theta_rad, dtype=float)
    if np.any(theta < 0.0):
        raise ValueError("off-axis angle must be non-negative")
    u = aperture_argument(theta, link)
    small = np.abs(u) < 1e-8
    safe_u = np.where(small, 1.0, u)
    shape = np.where(small, 1.0, (2.0 * j1(safe_u) / safe_u) ** 2)
    gain = link.g_max * shape
    return float(gain) if gain.ndim == 0 else gain


def first_null_angle(link: LinkBudget) -> float:
    """Off-axis angle (radians) of the first pattern null."""
    s = FIRST_J1_ZERO * link.wavelength / (np.pi * link.aperture_m)
    return float(np.arcsin(min(s, 1.0)))


def half_power_beamwidth(link: LinkBudget) -> float:
    """Full 3 dB beamwidth in degrees."""
    g_half = link.g_max / 2.0
    half = brentq(lambda t: receive_gain(t, link) - g_half, 0.0, first_null_angle(link))
    return float(np.degrees(2.0 * half))


def free_space_gain(distance_m: np.ndarray | float, wavelength: float) -> np.ndarray | float:
    """(lambda / (4 pi d))^2."""
    return (wavelength / (4.0 * np.pi * np.asarray(distance_m, dtype=float))) ** 2


def _unit_vectors(lat_deg: np.ndarray, lon_deg: np.ndarray) -> np.ndarray:
    lat = np.radians(lat_deg)
    lon = np.radians(lon_deg)
    return np.stack(
        [np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1
    )


def slant_geometry(
    cells: Sequence[Cell], geometry: SatelliteGeometry
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rays from the satellite to each cell centre (m), slant ranges (m), elevations (deg)."""
    r_earth = geometry.earth_radius_km * 1e3
    sat = (r_earth + geometry.altitude_km * 1e3) * _unit_vectors(
        np.array(geometry.lat), np.array(geometry.lon)
    )
    up = _unit_vectors(
        np.array([c.lat for c in cells], dtype=float),
        np.array([c.lon for c in cells], dtype=float),
    )
    rays = r_earth * up - sat
    ranges = np.linalg.norm(rays, axis=1)
    sin_el = np.einsum("ij,ij->i", -rays, up) / ranges
    elevation = np.degrees(np.arcsin(np.clip(sin_el, -1.0, 1.0)))
    return rays, ranges, elevation


def off_axis_angles(rays: np.ndarray) -> np.ndarray:
    """theta_ij: angle at the satellite between the rays to cells i and j."""
    dots = rays @ rays.T
    cross = np.cross(rays[:, None, :], rays[None, :, :])
    theta = np.arctan2(np.linalg.norm(cross, axis=-1), dots)
    np.fill_diagonal(theta, 0.0)
    return theta


def gain_matrix(
    cells: Sequence[Cell], geometry: SatelliteGeometry, link: LinkBudget
) -> np.ndarray:
    """g_ij = G_t G_r(theta_ij) / (4 pi d_j / lambda)^2 at the cell centres."""
    rays, ranges, elevation = slant_geometry(cells, geometry)
    hidden = np.flatnonzero(elevation <= 0.0)
    if hidden.size:
        raise BelowHorizonError(hidden)
    theta = off_axis_angles(rays)
    pattern = receive_gain(theta, link)
    path = free_space_gain(ranges, link.wavelength)
    gains = link.g_t * pattern * path[None, :]
    logger.debug(
        f"Gain matrix for {len(cells)} cells: diag range "
        f"[{np.diag(gains).min():.3e}, {np.diag(gains).max():.3e}]"
    )
    return gains
