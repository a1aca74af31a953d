"""Sylvester equation AX + XB = C via Bartels-Stewart, with a dense Kronecker oracle."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, qr, schur, solve_triangular

from ..utils.errors import InstanceTooLargeError, SylvesterSingularError

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
KRONECKER_MAX_UNKNOWNS = 400


@dataclass(frozen=True)
class SylvesterProblem:
    a: np.ndarray  # n x n
    b: np.ndarray  # m x m
    c: np.ndarray  # n x m

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"A must be square, got {a.shape}")
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"B must be square, got {b.shape}")
        if c.shape != (a.shape[0], b.shape[0]):
            raise ValueError(f"C must be {a.shape[0]}x{b.shape[0]}, got {c.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def is_symmetric(self) -> bool:
        return bool(np.allclose(self.a, self.a.T, atol=0.0, rtol=1e-13)) and bool(
            np.allclose(self.b, self.b.T, atol=0.0, rtol=1e-13)
        )

    @property
    def scale(self) -> float:
        return max(np.linalg.norm(self.a, 2), np.linalg.norm(self.b, 2), 1.0)

    def residual(self, x: np.ndarray) -> float:
        """||AX + XB - C||_F."""
        return float(np.linalg.norm(self.a @ x + x @ self.b - self.c))


def _check_gap(denominator: np.ndarray, scale: float) -> None:
    gap = float(np.min(np.abs(denominator))) / scale
    if gap < SINGULAR_TOL:
        raise SylvesterSingularError(
            f"A and -B share an eigenvalue (relative gap {gap:.3e})"
        )


def _solve_symmetric(problem: SylvesterProblem) -> np.ndarray:
    a_vals, u = eigh(problem.a)
    b_vals, v = eigh(problem.b)
    denominator = a_vals[:, None] + b_vals[None, :]
    _check_gap(denominator, problem.scale)
    return u @ ((u.T @ problem.c @ v) / denominator) @ v.T


def _solve_general(problem: SylvesterProblem) -> np.ndarray:
    t_a, u = schur(problem.a, output="complex")
    t_b, v = schur(problem.b, output="complex")
    _check_gap(np.diag(t_a)[:, None] + np.diag(t_b)[None, :], problem.scale)

    f = u.conj().T @ problem.c @ v
    n, m = f.shape
    y = np.zeros((n, m), dtype=complex)
    eye = np.eye(n)
    # T_B is upper triangular, so column k only depends on columns j < k
    for k in range(m):
        rhs = f[:, k] - y[:, :k] @ t_b[:k, k]
        y[:, k] = solve_triangular(t_a + t_b[k, k] * eye, rhs)
    return np.real(u @ y @ v.conj().T)


def solve_bartels_stewart(problem: SylvesterProblem) -> np.ndarray:
    """Solve AX + XB = C through Schur forms of A and B.

    Symmetric inputs take the eigendecomposition path, where both Schur
    forms are diagonal; other inputs go through complex Schur forms and a
    column-by-column triangular back substitution.
    """
    if problem.is_symmetric:
        x = _solve_symmetric(problem)
    else:
        x = _solve_general(problem)
    residual = problem.residual(x)
    bound = 1e-8 * max(float(np.linalg.norm(problem.c)), 1.0)
    if residual > bound:
        logger.warning(f"Sylvester residual {residual:.3e} above {bound:.3e}")
    return x


def solve_kronecker_oracle(
    problem: SylvesterProblem, max_unknowns: int = KRONECKER_MAX_UNKNOWNS
) -> np.ndarray:
    """Dense solve of (I kron A + B^T kron I) vec(X) = vec(C); for validation only."""
    n, m = problem.c.shape
    if n * m > max_unknowns:
        raise InstanceTooLargeError(f"Kronecker solve limited to {max_unknowns} unknowns (got {n * m})")
    system = np.kron(np.eye(m), problem.a) + np.kron(problem.b.T, np.eye(n))
    try:
        vec_x = np.linalg.solve(system, problem.c.ravel(order="F"))
    except np.linalg.LinAlgError as e:
        raise SylvesterSingularError(f"Kronecker system is singular: {e}") from e
    return vec_x.reshape((n, m), order="F")


def rank_one_basis(m: int) -> np.ndarray:
    """Orthonormal basis whose first column is 1/sqrt(m); diagonalizes 11^T."""
    seed = np.eye(m)
    seed[:, 0] = 1.0
    q, _ = qr(seed)
    if q[0, 0] < 0:
        q = -q
    return q


def solve_rank_one_right(
    a: np.ndarray, rho: float, c: np.ndarray, basis: np.ndarray | None = None
) -> np.ndarray:
    """Solve AX + X (rho 11^T) = C for symmetric A.

    In the rank-one basis B is diag(rho m, 0, ..., 0), so the transformed
    problem splits into one shifted solve and m - 1 plain solves with A.
    """
    n, m = c.shape
    basis = rank_one_basis(m) if basis is None else basis
    a_vals, u = eigh(a)
    b_vals = np.zeros(m)
    b_vals[0] = rho * m
    denominator = a_vals[:, None] + b_vals[None, :]
    _check_gap(denominator, max(float(np.abs(a_vals).max()), rho * m, 1.0))
    return u @ ((u.T @ c @ basis) / denominator) @ basis.T
