"""Solver configuration models with YAML-backed defaults."""

from typing import ClassVar, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..utils.config import get_yaml_config


def initial_penalty(demand: np.ndarray) -> float:
    """rho_1 start value from the demand disparity: 0.1 * min(N) / max(N) + 0.01."""
    demand = np.asarray(demand, dtype=float)
    return float(0.1 * demand.min() / demand.max() + 0.01)


class _YamlBacked(BaseModel):
    yaml_section: ClassVar[str] = ""

    @classmethod
    def from_yaml(cls, **overrides):
        """Defaults from config.yaml, explicit non-None overrides win."""
        values = get_yaml_config().section(cls.yaml_section)
        values = {k: v for k, v in values.items() if k in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class BisectionConfig(_YamlBacked):
    yaml_section: ClassVar[str] = "solvers.bisection"

    max_iter: int = Field(default=100, ge=1)
    tolerance: float = Field(default=1e-12, gt=0.0)


class PenaltySchedule(BaseModel):
    """Multiplicative penalty growth with a cap."""
    growth: float = Field(default=1.01, ge=1.0)
    cap: float = Field(default=3.6, gt=0.0)

    def advance(self, rho: float) -> float:
        return min(rho * self.growth, self.cap)


class AdmmConfig(_YamlBacked):
    """Rounding-projection ADMM settings."""
    yaml_section: ClassVar[str] = "solvers.admm"

    iterations: int = Field(default=300, ge=1)
    gamma: float = Field(default=1.0, gt=0.0)
    rho1: Optional[float] = Field(default=None, gt=0.0)
    rho2_ratio: float = Field(default=2.2, gt=0.0)
    rho_growth: float = Field(default=1.01, ge=1.0)
    rho_cap: float = Field(default=3.6, gt=0.0)
    start_blend: float = Field(default=0.5, ge=0.0, le=1.0)
    start_jitter: float = Field(default=0.05, ge=0.0, le=0.5)

    @property
    def schedule(self) -> PenaltySchedule:
        return PenaltySchedule(growth=self.rho_growth, cap=self.rho_cap)


class L2BoxConfig(_YamlBacked):
    """l2-box ADMM settings; one penalty value shared by every constraint."""
    yaml_section: ClassVar[str] = "solvers.l2box"

    iterations: int = Field(default=300, ge=1)
    gamma: float = Field(default=1.0, gt=0.0)
    rho: Optional[float] = Field(default=None, gt=0.0)
    rho_growth: float = Field(default=1.01, ge=1.0)
    rho_cap: float = Field(default=3.6, gt=0.0)
    start_blend: float = Field(default=0.5, ge=0.0, le=1.0)
    start_jitter: float = Field(default=0.05, ge=0.0, le=0.5)

    @property
    def schedule(self) -> PenaltySchedule:
        return PenaltySchedule(growth=self.rho_growth, cap=self.rho_cap)
