"""l2-box ADMM: binary constraint as box intersected with an l2-sphere.

A matrix in [0, 1]^(N x T) is binary exactly when ||X - 1/2||_F^2 = NT / 4.
The sum constraints are handled by penalties, so the X-update becomes the
Sylvester equation AX + XB = C with

    A = 2G + (rho1 + rho2) I + rho3 11^T       (N x N)
    B = rho3 11^T                               (T x T)
    C = rho1 Z1 + rho2 Z2 - Y1 - Y2 - 1 y3^T - y4 1^T + rho3 N_b 11^T + rho3 b 1^T
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .admm import AdmmResult, project_binary
from .config import L2BoxConfig
from .start import BestRounding, staggered_start, wraparound_pattern
from .sylvester import SylvesterProblem, rank_one_basis, solve_bartels_stewart, solve_rank_one_right
from .trace import SolverTrace

logger = logging.getLogger(__name__)

CENTER_TOL = 1e-15


def project_box(m: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(m, dtype=float), 0.0, 1.0)


def sphere_radius(shape: tuple[int, int]) -> float:
    return float(np.sqrt(shape[0] * shape[1]) / 2.0)


def _fallback_direction(shape: tuple[int, int]) -> np.ndarray:
    size = shape[0] * shape[1]
    direction = np.full(size, -1.0 / max(size - 1, 1))
    direction[0] = 1.0
    return direction.reshape(shape) / np.linalg.norm(direction)


def project_sphere(m: np.ndarray) -> np.ndarray:
    """Project onto the sphere of radius sqrt(NT)/2 centred at 1/2."""
    m = np.asarray(m, dtype=float)
    centred = m - 0.5
    norm = float(np.linalg.norm(centred))
    if norm < CENTER_TOL:
        direction = _fallback_direction(m.shape)
    else:
        direction = centred / norm
    return 0.5 + sphere_radius(m.shape) * direction


@dataclass
class L2BoxState:
    x: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    y3: np.ndarray  # per slot
    y4: np.ndarray  # per cell
    rho1: float
    rho2: float
    rho3: float
    gamma: float = 1.0
    iteration: int = 0

    @classmethod
    def starting_at(cls, x0: np.ndarray, rho: float, gamma: float) -> "L2BoxState":
        x = np.asarray(x0, dtype=float).copy()
        n_cells, n_slots = x.shape
        return cls(
            x=x,
            z1=x.copy(),
            z2=x.copy(),
            y1=np.zeros_like(x),
            y2=np.zeros_like(x),
            y3=np.zeros(n_slots),
            y4=np.zeros(n_cells),
            rho1=rho,
            rho2=rho,
            rho3=rho,
            gamma=gamma,
        )


def sylvester_terms(
    state: L2BoxState, g: np.ndarray, b: np.ndarray, n_b: float
) -> SylvesterProblem:
    n, t = state.x.shape
    ones_n = np.ones((n, n))
    ones_t = np.ones((t, t))
    a = 2.0 * g + (state.rho1 + state.rho2) * np.eye(n) + state.rho3 * ones_n
    bm = state.rho3 * ones_t
    c = (
        state.rho1 * state.z1
        + state.rho2 * state.z2
        - state.y1
        - state.y2
        - np.outer(np.ones(n), state.y3)
        - np.outer(state.y4, np.ones(t))
        + state.rho3 * n_b
        + state.rho3 * np.outer(b, np.ones(t))
    )
    return SylvesterProblem(a=a, b=bm, c=c)


def x_update_sylvester(
    state: L2BoxState,
    g: np.ndarray,
    b: np.ndarray,
    n_b: float,
    basis: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Stationary point of the augmented Lagrangian in X."""
    problem = sylvester_terms(state, g, np.asarray(b, dtype=float), n_b)
    if state.rho3 == 0.0:
        return solve_bartels_stewart(problem)
    x = solve_rank_one_right(problem.a, state.rho3, problem.c, basis)
    residual = problem.residual(x)
    bound = 1e-8 * max(float(np.linalg.norm(problem.c)), 1.0)
    if residual > bound:
        logger.warning(f"Sylvester residual {residual:.3e} above {bound:.3e}; using general solver")
        x = solve_bartels_stewart(problem)
    return x


def augmented_lagrangian(
    state: L2BoxState, x: np.ndarray, g: np.ndarray, b: np.ndarray, n_b: float
) -> float:
    d1 = x - state.z1
    d2 = x - state.z2
    col = x.sum(axis=0) - n_b
    row = x.sum(axis=1) - np.asarray(b, dtype=float)
    return float(
        np.einsum("it,ij,jt->", x, g, x)
        + np.sum(state.y1 * d1)
        + 0.5 * state.rho1 * np.sum(d1 * d1)
        + np.sum(state.y2 * d2)
        + 0.5 * state.rho2 * np.sum(d2 * d2)
        + state.y3 @ col
        + 0.5 * state.rho3 * col @ col
        + state.y4 @ row
        + 0.5 * state.rho3 * row @ row
    )


def l2box_step(
    state: L2BoxState, g: np.ndarray, b: np.ndarray, n_b: float, basis: Optional[np.ndarray] = None
) -> tuple[float, float]:
    """One projection, X-update and dual ascent round; returns the two residual norms."""
    state.z1 = project_box(state.x + state.y1 / state.rho1)
    state.z2 = project_sphere(state.x + state.y2 / state.rho2)
    state.x = x_update_sylvester(state, g, b, n_b, basis)
    r1 = state.x - state.z1
    r2 = state.x - state.z2
    step = state.gamma
    state.y1 = state.y1 + step * state.rho1 * r1
    state.y2 = state.y2 + step * state.rho2 * r2
    state.y3 = state.y3 + step * state.rho3 * (state.x.sum(axis=0) - n_b)
    state.y4 = state.y4 + step * state.rho3 * (state.x.sum(axis=1) - b)
    state.iteration += 1
    return float(np.linalg.norm(r1)), float(np.linalg.norm(r2))


def solve_l2box(
    g: np.ndarray,
    b: np.ndarray,
    n_b: int,
    config: Optional[L2BoxConfig] = None,
    n_slots: Optional[int] = None,
    rho: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> AdmmResult:
    """Run the l2-box ADMM; returns the best feasible rounding seen, as solve_admm does."""
    config = config or L2BoxConfig()
    b = np.asarray(b, dtype=float)
    if n_slots is None:
        n_slots = int(round(b.sum() / n_b))
    schedule = config.schedule
    rho = min(rho or config.rho or 0.11, schedule.cap)

    x0 = staggered_start(b, n_slots, config.start_blend, config.start_jitter, rng)
    state = L2BoxState.starting_at(x0, rho, config.gamma)
    basis = rank_one_basis(n_slots)
    trace = SolverTrace()
    best = BestRounding(g, b, n_b)
    best.offer(wraparound_pattern(b, n_slots))

    for _ in range(config.iterations):
        r1, r2 = l2box_step(state, g, b, n_b, basis)
        best.offer(project_binary(state.x))
        trace.record(np.einsum("it,ij,jt->", state.x, g, state.x), r1, r2, state.rho1)
        new_rho = schedule.advance(state.rho1)
        state.rho1 = state.rho2 = state.rho3 = new_rho

    res1, res2 = trace.final_residuals
    logger.debug(f"l2-box ADMM finished {state.iteration} iterations: residuals {res1:.3e}, {res2:.3e}")
    return AdmmResult(x_binary=best.result(project_binary(state.x)), x_relaxed=state.x, trace=trace)
