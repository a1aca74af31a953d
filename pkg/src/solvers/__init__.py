from .admm import AdmmResult, AdmmState, project_affine, project_binary, solve_admm, x_update
from .bisection import BisectionState, allocation_for, bisect, f_bar
from .config import AdmmConfig, BisectionConfig, L2BoxConfig, PenaltySchedule, initial_penalty
from .l2box import L2BoxState, project_box, project_sphere, solve_l2box, x_update_sylvester
from .start import BestRounding, staggered_start, wraparound_pattern
from .sylvester import SylvesterProblem, solve_bartels_stewart, solve_kronecker_oracle
from .trace import SolverTrace

__all__ = [
    "AdmmConfig",
    "AdmmResult",
    "AdmmState",
    "BestRounding",
    "BisectionConfig",
    "BisectionState",
    "L2BoxConfig",
    "L2BoxState",
    "PenaltySchedule",
    "SolverTrace",
    "SylvesterProblem",
    "allocation_for",
    "bisect",
    "f_bar",
    "initial_penalty",
    "project_affine",
    "project_binary",
    "project_box",
    "project_sphere",
    "solve_admm",
    "solve_bartels_stewart",
    "solve_kronecker_oracle",
    "solve_l2box",
    "staggered_start",
    "x_update",
    "wraparound_pattern",
    "x_update_sylvester",
]
