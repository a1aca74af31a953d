"""Max-min weighted collision avoidance over integer beam allocations.

The constraint P_a,i(b_i) * p_d_low,i >= xi is monotone in b_i, so every level
xi maps to a smallest allocation f_i(xi). Bisection on xi finds the largest
level whose allocation fits into the N_slot * N_b beam budget.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..metrics.probability import collision_avoidance
from ..scenario.models import Scenario
from ..utils.errors import InfeasibleInstanceError
from .config import BisectionConfig

logger = logging.getLogger(__name__)

PD_FLOOR = 1e-12
CEIL_SLACK = 1e-9  # absorbs round-off when f_bar lands on an integer


def f_bar(xi, alpha, n_devices, n_rb: int, p_d_low):
    """Smallest real b with P_a(b) * p_d_low >= xi.

    alpha / ((1 - exp((ln xi - ln p_d_low) / (N - 1))) N_R); +inf when
    xi >= p_d_low, 0 for single-device cells.
    """
    xi = np.asarray(xi, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    n_devices = np.asarray(n_devices, dtype=float)
    p_d = np.clip(np.asarray(p_d_low, dtype=float), PD_FLOOR, 1.0)
    xi, alpha, n_devices, p_d = np.broadcast_arrays(xi, alpha, n_devices, p_d)

    result = np.zeros(xi.shape)
    multi = n_devices > 1.0
    reachable = multi & (xi < p_d)
    result[multi & ~reachable] = np.inf
    with np.errstate(divide="ignore"):
        exponent = (np.log(xi[reachable]) - np.log(p_d[reachable])) / (n_devices[reachable] - 1.0)
    result[reachable] = alpha[reachable] / (-np.expm1(exponent) * n_rb)
    return float(result) if result.ndim == 0 else result


def allocation_for(xi: float, scenario: Scenario, p_d_low: np.ndarray) -> np.ndarray:
    """b_i = min(max(ceil(f_bar_i(xi)), 1), N_slot)."""
    fb = f_bar(xi, scenario.activation, scenario.demand, scenario.link.n_rb, p_d_low)
    fb = np.minimum(fb, scenario.n_slots + 1.0)
    return np.clip(np.ceil(fb - CEIL_SLACK), 1, scenario.n_slots).astype(np.int64)


def weighted_collision_avoidance(scenario: Scenario, b: np.ndarray, p_d_low: np.ndarray) -> np.ndarray:
    """P_a,i(b_i) * p_d_low,i per cell."""
    p_d = np.clip(np.asarray(p_d_low, dtype=float), PD_FLOOR, 1.0)
    p_a = collision_avoidance(scenario.activation, scenario.demand, scenario.link.n_rb, b)
    return p_a * p_d


@dataclass
class BisectionState:
    xi_lower: float
    xi_upper: float
    iterations: int = 0
    b: Optional[np.ndarray] = None
    widths: list[float] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.xi_upper - self.xi_lower


def fill_leftover(scenario: Scenario, b: np.ndarray, p_d_low: np.ndarray) -> np.ndarray:
    """Spend unused beam slots one at a time on the currently worst cell."""
    b = np.array(b, dtype=np.int64)
    while b.sum() < scenario.capacity:
        open_cells = b < scenario.n_slots
        if not np.any(open_cells):
            break
        score = np.where(open_cells, weighted_collision_avoidance(scenario, b, p_d_low), np.inf)
        b[int(np.argmin(score))] += 1
    return b


def bisect(
    scenario: Scenario,
    p_d_low: np.ndarray,
    config: Optional[BisectionConfig] = None,
) -> tuple[np.ndarray, float, BisectionState]:
    """Bisection on the max-min level; returns (b, xi_lower, final state).

    The returned b is the allocation of the last feasible level, topped up
    to the full beam budget.
    """
    config = config or BisectionConfig()
    if not scenario.is_capacity_feasible:
        raise InfeasibleInstanceError(
            f"{scenario.n_cells} cells exceed the beam budget "
            f"{scenario.n_slots} x {scenario.n_beams} = {scenario.capacity}"
        )
    p_d = np.clip(np.asarray(p_d_low, dtype=float), PD_FLOOR, 1.0)
    state = BisectionState(xi_lower=0.0, xi_upper=float(p_d.min()))

    while state.iterations < config.max_iter and state.width >= config.tolerance:
        mid = 0.5 * (state.xi_lower + state.xi_upper)
        if allocation_for(mid, scenario, p_d).sum() <= scenario.capacity:
            state.xi_lower = mid
        else:
            state.xi_upper = mid
        state.iterations += 1
        state.widths.append(state.width)

    b = allocation_for(state.xi_lower, scenario, p_d)
    slack = scenario.capacity - int(b.sum())
    b = fill_leftover(scenario, b, p_d)
    state.b = b
    logger.debug(
        f"Bisection: xi={state.xi_lower:.6g} after {state.iterations} iterations, "
        f"{slack} leftover slots filled, sum(b)={int(b.sum())}"
    )
    return b, state.xi_lower, state
