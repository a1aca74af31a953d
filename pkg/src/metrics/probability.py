"""Collision avoidance, decoding success bounds and the exact decoding oracle."""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.stats import binom

from ..scenario.models import Scenario
from ..utils.errors import (
    DecodingInfeasibleError,
    InstanceTooLargeError,
    PatternShapeError,
    ProbabilityDomainError,
)
from .pattern import BeamHoppingPattern, as_matrix

logger = logging.getLogger(__name__)

EXACT_MAX_CELLS = 6
EXACT_MAX_DEVICES = 30

PatternLike = Union[BeamHoppingPattern, np.ndarray]


def collision_avoidance(alpha, n_devices, n_rb, b):
    """P_a = (1 - alpha / (N_R b))^(N - 1), the chance no same-cell device picks the same slot and RB.

    Accepts scalars or arrays; returns a float for scalar input.
    """
    alpha = np.asarray(alpha, dtype=float)
    n_devices = np.asarray(n_devices, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b < 1.0):
        raise ProbabilityDomainError("beam allocation b_i must be >= 1")
    if np.any(n_devices < 1.0):
        raise ProbabilityDomainError("device count N_i must be >= 1")
    q = alpha / (n_rb * b)
    if np.any(q >= 1.0):
        raise ProbabilityDomainError(
            f"alpha / (N_R b) must be < 1 (max {float(np.max(q)):.3g})"
        )
    result = np.exp((n_devices - 1.0) * np.log1p(-q))
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class DecodingBound:
    """Per-cell Markov lower bound on decoding success."""
    raw: np.ndarray  # before clamping; 0 where flagged
    clamped: np.ndarray  # in [0, 1]
    infeasible: np.ndarray  # g_ii rho <= gamma_th
    unserved: np.ndarray  # b_i == 0


def _check_pattern(scenario: Scenario, x: np.ndarray) -> None:
    if x.shape != (scenario.n_cells, scenario.n_slots):
        raise PatternShapeError(
            f"pattern shape {x.shape} does not match scenario "
            f"({scenario.n_cells}, {scenario.n_slots})"
        )


def interference_weights(scenario: Scenario, b: np.ndarray) -> np.ndarray:
    """W_ij = g_ij N_j alpha_j / b_j off the diagonal, zero on it."""
    safe_b = np.where(b > 0, b, 1.0)
    weights = scenario.gains * (scenario.demand * scenario.activation / safe_b)[None, :]
    np.fill_diagonal(weights, 0.0)
    return weights


def decoding_success_lower_bound(
    scenario: Scenario,
    pattern: PatternLike,
    b: Optional[np.ndarray] = None,
) -> DecodingBound:
    """Markov bound 1 - E[interference] / margin per cell.

    `pattern` may be fractional. `b` defaults to the row sums of the pattern;
    passing it separately evaluates the (X, b) form used between AO steps.
    """
    x = as_matrix(pattern)
    _check_pattern(scenario, x)
    b = x.sum(axis=1) if b is None else np.asarray(b, dtype=float)
    if b.shape != (scenario.n_cells,):
        raise PatternShapeError(f"allocation length {b.shape} != {scenario.n_cells} cells")

    margin = scenario.decoding_margin
    infeasible = margin <= 0.0
    unserved = b <= 0.0
    safe_b = np.where(unserved, 1.0, b)
    safe_margin = np.where(infeasible, 1.0, margin)

    overlap = x @ x.T
    interference = np.sum(overlap * interference_weights(scenario, b), axis=1)
    raw = 1.0 - interference / (safe_b * scenario.link.n_rb * safe_margin)
    flagged = infeasible | unserved
    raw = np.where(flagged, 0.0, raw)
    if np.any(infeasible):
        logger.warning(f"Decoding infeasible for cells {np.flatnonzero(infeasible).tolist()}")
    return DecodingBound(
        raw=raw,
        clamped=np.clip(raw, 0.0, 1.0),
        infeasible=infeasible,
        unserved=unserved,
    )


def uniform_decoding_bound(scenario: Scenario) -> np.ndarray:
    """Raw decoding bound under uniform fractional illumination x_i^t = b_i / N_slot.

    Independent of b: 1 - sum_{j != i} g_ij N_j alpha_j / (N_slot N_R margin_i).
    """
    margin = scenario.decoding_margin
    infeasible = np.flatnonzero(margin <= 0.0)
    if infeasible.size:
        raise DecodingInfeasibleError(infeasible)
    weights = scenario.gains * (scenario.demand * scenario.activation)[None, :]
    np.fill_diagonal(weights, 0.0)
    return 1.0 - weights.sum(axis=1) / (scenario.n_slots * scenario.link.n_rb * margin)


def _slot_success(
    margin: float, gains: np.ndarray, devices: np.ndarray, p_select: np.ndarray
) -> float:
    """P(sum_j k_j g_j < margin) for independent k_j ~ Bin(devices_j, p_select_j)."""
    values = np.zeros(1)
    probs = np.ones(1)
    for g, n, p in zip(gains, devices, p_select):
        k = np.arange(n + 1)
        pmf = binom.pmf(k, n, p)
        z = (values[:, None] + k[None, :] * g).ravel()
        w = (probs[:, None] * pmf[None, :]).ravel()
        keep = z < margin
        values, probs = z[keep], w[keep]
        if values.size == 0:
            return 0.0
    return float(probs.sum())


def decoding_success_exact_small(
    scenario: Scenario, pattern: PatternLike, cell: int
) -> float:
    """Exact decoding success of `cell`, averaged over its illuminated slots.

    Enumerates the binomial interferer counts on the tagged slot and resource
    block. Interference comes only from other cells lit in the same slot.
    """
    x = as_matrix(pattern)
    _check_pattern(scenario, x)
    if scenario.n_cells > EXACT_MAX_CELLS:
        raise InstanceTooLargeError(
            f"exact decoding needs N_c <= {EXACT_MAX_CELLS} (got {scenario.n_cells})"
        )
    devices = scenario.integer_demand
    if np.any(devices > EXACT_MAX_DEVICES):
        raise InstanceTooLargeError(
            f"exact decoding needs N_j <= {EXACT_MAX_DEVICES} (max {int(devices.max())})"
        )

    lit = np.flatnonzero(x[cell] > 0.5)
    margin = float(scenario.decoding_margin[cell])
    if lit.size == 0 or margin <= 0.0:
        return 0.0

    b = x.sum(axis=1)
    per_slot = []
    for t in lit:
        others = np.flatnonzero((x[:, t] > 0.5) & (np.arange(scenario.n_cells) != cell))
        p_select = scenario.activation[others] / (scenario.link.n_rb * b[others])
        per_slot.append(
            _slot_success(margin, scenario.gains[cell, others], devices[others], p_select)
        )
    return float(np.mean(per_slot))
