"""ADMM with rounding projection for the beam-pattern quadratic program.

Minimizes sum_t (x^t)^T G x^t over binary X with column sums N_b and row
sums b. X is split into a binary copy Z1 and an affine copy Z2.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from ..utils.errors import AffineTargetError
from .config import AdmmConfig
from .start import BestRounding, staggered_start, wraparound_pattern
from .trace import SolverTrace

logger = logging.getLogger(__name__)

AFFINE_TOL = 1e-9


def project_binary(m: np.ndarray) -> np.ndarray:
    """Nearest binary matrix; 0.5 rounds up."""
    return (np.asarray(m, dtype=float) >= 0.5).astype(float)


def project_affine(m: np.ndarray, b: np.ndarray, n_b: float) -> np.ndarray:
    """Euclidean projection onto {X : X^T 1 = n_b 1, X 1 = b}.

    Z = M + 1 lambda^T + nu 1^T with lambda_t = (n_b - c_t - s) / N,
    nu_i = (b_i - r_i) / T and s = (sum(b) - sum(M)) / T, where r and c are
    the row and column sums of M.
    """
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    n, t = m.shape
    if abs(b.sum() - t * n_b) > AFFINE_TOL * max(1.0, t * n_b):
        raise AffineTargetError(
            f"row targets sum to {b.sum():g} but column targets sum to {t * n_b:g}"
        )
    rows = m.sum(axis=1)
    cols = m.sum(axis=0)
    s = (b.sum() - m.sum()) / t
    lam = (n_b - cols - s) / n
    nu = (b - rows) / t
    return m + lam[None, :] + nu[:, None]


class ShiftedInverse:
    """Solves (2G + c I) X = R for varying c from one eigendecomposition of G."""

    def __init__(self, g: np.ndarray):
        self.values, self.vectors = eigh(g)

    def solve(self, rhs: np.ndarray, shift: float) -> np.ndarray:
        coeffs = self.vectors.T @ rhs
        return self.vectors @ (coeffs / (2.0 * self.values + shift)[:, None])


def x_update(
    z1: np.ndarray,
    z2: np.ndarray,
    y1: np.ndarray,
    y2: np.ndarray,
    g: np.ndarray,
    rho1: float,
    rho2: float,
    inverse: Optional[ShiftedInverse] = None,
) -> np.ndarray:
    """X = (2G + (rho1 + rho2) I)^-1 (rho1 Z1 + rho2 Z2 - Y1 - Y2)."""
    rhs = rho1 * z1 + rho2 * z2 - y1 - y2
    if inverse is not None:
        return inverse.solve(rhs, rho1 + rho2)
    factor = cho_factor(2.0 * g + (rho1 + rho2) * np.eye(g.shape[0]))
    return cho_solve(factor, rhs)


def augmented_lagrangian(
    x: np.ndarray,
    z1: np.ndarray,
    z2: np.ndarray,
    y1: np.ndarray,
    y2: np.ndarray,
    g: np.ndarray,
    rho1: float,
    rho2: float,
) -> float:
    d1 = x - z1
    d2 = x - z2
    return float(
        np.einsum("it,ij,jt->", x, g, x)
        + np.sum(y1 * d1)
        + 0.5 * rho1 * np.sum(d1 * d1)
        + np.sum(y2 * d2)
        + 0.5 * rho2 * np.sum(d2 * d2)
    )


@dataclass
class AdmmState:
    x: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    rho1: float
    rho2: float
    gamma: float = 1.0
    iteration: int = 0

    @classmethod
    def starting_at(cls, x0: np.ndarray, rho1: float, rho2: float, gamma: float) -> "AdmmState":
        """Start from x0 with zero duals."""
        x = np.asarray(x0, dtype=float).copy()
        zeros = np.zeros_like(x)
        return cls(x=x, z1=x.copy(), z2=x.copy(), y1=zeros, y2=zeros.copy(), rho1=rho1, rho2=rho2, gamma=gamma)


@dataclass
class AdmmResult:
    x_binary: np.ndarray
    x_relaxed: np.ndarray
    trace: SolverTrace = field(default_factory=SolverTrace)


def solve_admm(
    g: np.ndarray,
    b: np.ndarray,
    n_b: int,
    config: Optional[AdmmConfig] = None,
    n_slots: Optional[int] = None,
    rho1: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> AdmmResult:
    """Run the rounding ADMM for a fixed iteration budget.

    `n_slots` defaults to sum(b) / n_b. The returned binary matrix is the
    lowest-objective rounding seen that meets both sum constraints; the
    wrap-around pattern for b is always a candidate when b is integral.
    Otherwise it is the rounding of the last iterate and callers repair it.
    """
    config = config or AdmmConfig()
    b = np.asarray(b, dtype=float)
    if n_slots is None:
        n_slots = int(round(b.sum() / n_b))
    rho1 = rho1 or config.rho1 or 0.11
    schedule = config.schedule
    rho1 = min(rho1, schedule.cap)
    rho2 = min(config.rho2_ratio * rho1, schedule.cap)

    x0 = staggered_start(b, n_slots, config.start_blend, config.start_jitter, rng)
    state = AdmmState.starting_at(x0, rho1, rho2, config.gamma)
    inverse = ShiftedInverse(g)
    trace = SolverTrace()
    best = BestRounding(g, b, n_b)
    best.offer(wraparound_pattern(b, n_slots))

    for _ in range(config.iterations):
        state.z1 = project_binary(state.x + state.y1 / state.rho1)
        state.z2 = project_affine(state.x + state.y2 / state.rho2, b, n_b)
        state.x = x_update(
            state.z1, state.z2, state.y1, state.y2, g, state.rho1, state.rho2, inverse
        )
        r1 = state.x - state.z1
        r2 = state.x - state.z2
        state.y1 = state.y1 + state.gamma * state.rho1 * r1
        state.y2 = state.y2 + state.gamma * state.rho2 * r2
        best.offer(state.z1)
        best.offer(project_binary(state.x))
        state.iteration += 1
        trace.record(
            np.einsum("it,ij,jt->", state.x, g, state.x),
            np.linalg.norm(r1),
            np.linalg.norm(r2),
            state.rho1,
        )
        state.rho1 = schedule.advance(state.rho1)
        state.rho2 = schedule.advance(state.rho2)

    res1, res2 = trace.final_residuals
    logger.debug(f"ADMM finished {state.iteration} iterations: residuals {res1:.3e}, {res2:.3e}")
    if res1 > 1e-3 * np.sqrt(state.x.size):
        logger.warning(f"ADMM binary residual {res1:.3e} has not settled")
    return AdmmResult(x_binary=best.result(project_binary(state.x)), x_relaxed=state.x, trace=trace)
