"""Alternating optimization of beam allocation and beam-hopping pattern.

Each round fixes the pattern to pick the allocation b by bisection, then
fixes b to pick the pattern with an ADMM variant, then repairs the rounded
pattern so every slot lights exactly N_b cells and every cell is lit.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Literal, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..metrics.pattern import BeamHoppingPattern
from ..metrics.probability import decoding_success_lower_bound, uniform_decoding_bound
from ..metrics.quadratic import quadratic_matrix
from ..metrics.report import SuccessReport, success_lower_bound
from ..scenario.models import Scenario
from ..solvers.admm import AdmmResult, solve_admm
from ..solvers.bisection import bisect
from ..solvers.config import AdmmConfig, BisectionConfig, L2BoxConfig, initial_penalty
from ..solvers.l2box import solve_l2box
from ..solvers.trace import SolverTrace
from ..utils.config import get_yaml_config
from ..utils.csvio import write_tagged_csv
from ..utils.errors import InfeasibleInstanceError
from .events import EventType, emit_event

logger = logging.getLogger(__name__)

AO_TRACE_SCHEMA = "beamhop-ao-trace/1"

InnerSolver = Literal["admm", "l2box"]


class AoConfig(BaseModel):
    """Outer loop settings plus the configs of the inner solvers."""
    n_ao: int = Field(default=5, ge=1)
    inner: InnerSolver = "l2box"
    refresh_repair: bool = False
    seed: int = 0  # jitter of the inner solver starts
    bisection: BisectionConfig = Field(default_factory=BisectionConfig)
    admm: AdmmConfig = Field(default_factory=AdmmConfig)
    l2box: L2BoxConfig = Field(default_factory=L2BoxConfig)

    @classmethod
    def from_yaml(cls, **overrides) -> "AoConfig":
        values = {
            k: v
            for k, v in get_yaml_config().section("solvers.ao").items()
            if k in ("n_ao", "inner", "refresh_repair", "seed")
        }
        values.update(
            bisection=BisectionConfig.from_yaml(),
            admm=AdmmConfig.from_yaml(),
            l2box=L2BoxConfig.from_yaml(),
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class AoIteration:
    iteration: int
    b: np.ndarray
    xi: float
    min_psuc: float
    mean_psuc: float
    residual1: float
    residual2: float
    ms: float


@dataclass
class AoTrace:
    iterations: list[AoIteration] = field(default_factory=list)
    solver_traces: list[SolverTrace] = field(default_factory=list)
    initial_x: Optional[np.ndarray] = None  # fractional start, b_i / N_slot

    def __len__(self) -> int:
        return len(self.iterations)

    @property
    def min_psuc(self) -> list[float]:
        return [it.min_psuc for it in self.iterations]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "iter": [it.iteration for it in self.iterations],
                "min_psuc": [it.min_psuc for it in self.iterations],
                "mean_psuc": [it.mean_psuc for it in self.iterations],
                "residual1": [it.residual1 for it in self.iterations],
                "residual2": [it.residual2 for it in self.iterations],
                "ms": [it.ms for it in self.iterations],
            }
        )

    def write_csv(self, target: Union[str, Path, IO[str]]) -> None:
        write_tagged_csv(self.to_frame(), target, AO_TRACE_SCHEMA)


@dataclass
class AoResult:
    pattern: BeamHoppingPattern
    b: np.ndarray
    report: SuccessReport
    trace: AoTrace
    best_iteration: int

    @property
    def best_solver_trace(self) -> SolverTrace:
        return self.trace.solver_traces[self.best_iteration - 1]


def initialize(
    scenario: Scenario, bisection: Optional[BisectionConfig] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Fractional pattern x_i^t = b_i / N_slot and the uniform decoding bound.

    b is the bisection allocation for that bound, which does not depend on the
    pattern. The fractional pattern is kept in the AO trace only.
    """
    p_d_low = uniform_decoding_bound(scenario)
    b, _, _ = bisect(scenario, p_d_low, bisection)
    x_fractional = np.repeat((b / scenario.n_slots)[:, None], scenario.n_slots, axis=1)
    return x_fractional, p_d_low


def _ranked(candidates: np.ndarray, score: np.ndarray, descending: bool) -> np.ndarray:
    """Candidates ordered by score, ties broken by lowest index."""
    key = -score[candidates] if descending else score[candidates]
    return candidates[np.lexsort((candidates, key))]


def repair(
    x: np.ndarray,
    scenario: Scenario,
    p_suc_low: np.ndarray,
    refresh: bool = False,
) -> np.ndarray:
    """Make a binary pattern feasible.

    Slot by slot, cells with the lowest p_suc are switched on until N_b are
    lit, or those with the highest p_suc are switched off down to N_b. A final
    pass lights every dark cell by taking one slot from the best-off cell that
    still has at least two. With `refresh` the scores are recomputed after every
    slot edit instead of being held for the whole sweep.
    """
    x = (np.asarray(x) > 0.5).astype(np.int8)
    n_b = scenario.n_beams
    if not scenario.is_capacity_feasible:
        raise InfeasibleInstanceError(
            f"{scenario.n_cells} cells cannot all be lit with capacity {scenario.capacity}"
        )
    score = np.asarray(p_suc_low, dtype=float).copy()

    for t in range(scenario.n_slots):
        if refresh:
            score = success_lower_bound(scenario, x).p_suc_low
        lit = int(x[:, t].sum())
        if lit < n_b:
            dark = np.flatnonzero(x[:, t] == 0)
            x[_ranked(dark, score, descending=False)[: n_b - lit], t] = 1
        elif lit > n_b:
            on = np.flatnonzero(x[:, t] == 1)
            x[_ranked(on, score, descending=True)[: lit - n_b], t] = 0

    for cell in np.flatnonzero(x.sum(axis=1) == 0):
        if refresh:
            score = success_lower_bound(scenario, x).p_suc_low
        rows = x.sum(axis=1)
        donors = np.flatnonzero(rows >= 2)
        donor = int(_ranked(donors, score, descending=True)[0])
        slot = int(np.flatnonzero(x[donor] == 1)[0])
        x[donor, slot] = 0
        x[cell, slot] = 1
    return x


def _inner_solve(
    scenario: Scenario,
    g: np.ndarray,
    b: np.ndarray,
    config: AoConfig,
    rho: float,
    rng: np.random.Generator,
) -> AdmmResult:
    if config.inner == "admm":
        return solve_admm(
            g, b, scenario.n_beams, config.admm, n_slots=scenario.n_slots, rho1=rho, rng=rng
        )
    return solve_l2box(
        g, b, scenario.n_beams, config.l2box, n_slots=scenario.n_slots, rho=rho, rng=rng
    )


def optimize(scenario: Scenario, config: Optional[AoConfig] = None) -> AoResult:
    """Run n_ao rounds and return the round with the best minimum p_suc."""
    config = config or AoConfig()
    if not scenario.is_capacity_feasible:
        raise InfeasibleInstanceError(
            f"{scenario.n_cells} cells exceed the beam budget "
            f"{scenario.n_slots} x {scenario.n_beams} = {scenario.capacity}"
        )
    x_fractional, p_d_low = initialize(scenario, config.bisection)
    rho = initial_penalty(scenario.demand)
    rng = np.random.default_rng(config.seed)
    trace = AoTrace(initial_x=x_fractional)
    best: Optional[tuple[int, np.ndarray, SuccessReport]] = None

    emit_event(EventType.AO_STARTED, {"scenario": scenario.name, "inner": config.inner})
    for k in range(1, config.n_ao + 1):
        start = time.perf_counter()
        b, xi, _ = bisect(scenario, p_d_low, config.bisection)
        form = quadratic_matrix(scenario, b)
        inner = _inner_solve(scenario, form.g, b, config, rho, rng)
        held = success_lower_bound(scenario, inner.x_binary, b).p_suc_low
        x = repair(inner.x_binary, scenario, held, refresh=config.refresh_repair)
        report = success_lower_bound(scenario, x)
        elapsed_ms = (time.perf_counter() - start) * 1e3

        res1, res2 = inner.trace.final_residuals
        trace.iterations.append(
            AoIteration(
                iteration=k,
                b=b,
                xi=xi,
                min_psuc=report.min,
                mean_psuc=report.mean,
                residual1=res1,
                residual2=res2,
                ms=elapsed_ms,
            )
        )
        trace.solver_traces.append(inner.trace)
        if best is None or report.min > best[2].min:
            best = (k, x, report)

        logger.info(
            f"AO round {k}/{config.n_ao} ({config.inner}): min p_suc {report.min:.6f}, "
            f"mean {report.mean:.6f}, {elapsed_ms:.1f} ms"
        )
        emit_event(EventType.AO_ITERATION, {"iteration": k, "min_psuc": report.min})
        p_d_low = decoding_success_lower_bound(scenario, x).clamped

    best_k, best_x, best_report = best
    pattern = BeamHoppingPattern(best_x)
    emit_event(EventType.AO_COMPLETED, {"best_iteration": best_k, "min_psuc": best_report.min})
    return AoResult(
        pattern=pattern,
        b=pattern.allocation(),
        report=best_report,
        trace=trace,
        best_iteration=best_k,
    )
