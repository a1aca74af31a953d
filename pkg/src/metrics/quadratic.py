"""Quadratic form of the decoding-bound objective for a fixed allocation."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh

from ..scenario.models import Scenario
from ..utils.errors import DecodingInfeasibleError
from .probability import collision_avoidance

SAFETY_SHIFT = 1e-12


@dataclass(frozen=True)
class QuadraticForm:
    g_tilde: np.ndarray  # zero diagonal, generally asymmetric
    g_sym: np.ndarray  # (g_tilde + g_tilde.T) / 2
    g: np.ndarray  # shifted to be positive semidefinite
    shift: float  # added to the diagonal: -lambda_min plus a safety margin

    def objective(self, x: np.ndarray) -> float:
        """sum_t (x^t)^T G x^t."""
        return float(np.einsum("it,ij,jt->", x, self.g, x))

    def raw_objective(self, x: np.ndarray) -> float:
        """sum_t (x^t)^T G_tilde x^t."""
        return float(np.einsum("it,ij,jt->", x, self.g_tilde, x))


def quadratic_matrix(scenario: Scenario, b: np.ndarray) -> QuadraticForm:
    """Build G_tilde, its symmetric part and the PSD-shifted G for allocation b.

    sum_i P_a,i p_d_low,i(X) = sum_i P_a,i - sum_t (x^t)^T G_tilde x^t whenever
    the rows of X sum to b.
    """
    b = np.asarray(b, dtype=float)
    margin = scenario.decoding_margin
    infeasible = np.flatnonzero(margin <= 0.0)
    if infeasible.size:
        raise DecodingInfeasibleError(infeasible)

    p_a = collision_avoidance(scenario.activation, scenario.demand, scenario.link.n_rb, b)
    row_scale = p_a / (b * scenario.link.n_rb * margin)
    col_scale = scenario.demand * scenario.activation / b
    g_tilde = row_scale[:, None] * scenario.gains * col_scale[None, :]
    np.fill_diagonal(g_tilde, 0.0)

    g_sym = 0.5 * (g_tilde + g_tilde.T)
    lam_min = float(eigvalsh(g_sym)[0])
    safety = SAFETY_SHIFT * float(np.linalg.norm(g_sym))
    shift = -lam_min + safety
    g = g_sym + shift * np.eye(len(b))
    return QuadraticForm(g_tilde=g_tilde, g_sym=g_sym, g=g, shift=shift)
