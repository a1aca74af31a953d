"""Per-iteration convergence trace shared by the ADMM variants."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

import numpy as np
import pandas as pd

from ..utils.csvio import write_tagged_csv

SOLVER_TRACE_SCHEMA = "beamhop-solver-trace/1"


@dataclass
class SolverTrace:
    objective: list[float] = field(default_factory=list)
    residual1: list[float] = field(default_factory=list)  # ||X - Z1||_F
    residual2: list[float] = field(default_factory=list)  # ||X - Z2||_F
    rho1: list[float] = field(default_factory=list)

    def record(self, objective: float, residual1: float, residual2: float, rho1: float) -> None:
        self.objective.append(float(objective))
        self.residual1.append(float(residual1))
        self.residual2.append(float(residual2))
        self.rho1.append(float(rho1))

    def __len__(self) -> int:
        return len(self.objective)

    @property
    def final_residuals(self) -> tuple[float, float]:
        if not self.objective:
            return (float("nan"), float("nan"))
        return self.residual1[-1], self.residual2[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "iter": np.arange(1, len(self) + 1),
                "objective": self.objective,
                "residual1": self.residual1,
                "residual2": self.residual2,
                "rho1": self.rho1,
            }
        )

    def write_csv(self, target: Union[str, Path, IO[str]]) -> None:
        write_tagged_csv(self.to_frame(), target, SOLVER_TRACE_SCHEMA)
