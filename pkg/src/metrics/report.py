"""Per-cell success probability report."""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np
import pandas as pd

from ..scenario.models import Scenario
from ..utils.csvio import write_tagged_csv
from .pattern import as_matrix
from .probability import PatternLike, collision_avoidance, decoding_success_lower_bound

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "beamhop-report/1"


@dataclass(frozen=True)
class SuccessReport:
    """Analytic success lower bound per cell, optionally with Monte-Carlo estimates."""
    p_a: np.ndarray
    p_d_low_raw: np.ndarray
    p_d_low: np.ndarray
    p_suc_low: np.ndarray
    unserved: np.ndarray
    decoding_infeasible: np.ndarray
    p_suc_mc: Optional[np.ndarray] = field(default=None)
    mc_stderr: Optional[np.ndarray] = field(default=None)

    @property
    def n_cells(self) -> int:
        return len(self.p_suc_low)

    @property
    def min(self) -> float:
        return float(self.p_suc_low.min())

    @property
    def mean(self) -> float:
        return float(self.p_suc_low.mean())

    @property
    def worst_cell(self) -> int:
        return int(np.argmin(self.p_suc_low))

    def with_monte_carlo(self, p_suc_mc: np.ndarray, mc_stderr: np.ndarray) -> "SuccessReport":
        return replace(self, p_suc_mc=np.asarray(p_suc_mc), mc_stderr=np.asarray(mc_stderr))

    def cumulative_fraction(self) -> pd.DataFrame:
        """Mean of the worst k cells for k = 1..N_c, as `fraction,value` rows."""
        ordered = np.sort(self.p_suc_low)
        k = np.arange(1, len(ordered) + 1)
        return pd.DataFrame({"fraction": k / len(ordered), "value": np.cumsum(ordered) / k})

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "cell_id": np.arange(self.n_cells),
                "p_a": self.p_a,
                "p_d_low_raw": self.p_d_low_raw,
                "p_d_low": self.p_d_low,
                "p_suc_low": self.p_suc_low,
            }
        )
        if self.p_suc_mc is not None:
            frame["p_suc_mc"] = self.p_suc_mc
            frame["mc_stderr"] = self.mc_stderr
        flags = np.where(
            self.unserved, "unserved", np.where(self.decoding_infeasible, "decoding_infeasible", "")
        )
        frame["flag"] = flags
        return frame

    def write_csv(self, target: Union[str, Path, IO[str]]) -> None:
        footer = {"min_p_suc_low": f"{self.min:.17g}", "mean_p_suc_low": f"{self.mean:.17g}"}
        if self.p_suc_mc is not None and np.any(np.isfinite(self.p_suc_mc)):
            footer["min_p_suc_mc"] = f"{float(np.nanmin(self.p_suc_mc)):.17g}"
            footer["mean_p_suc_mc"] = f"{float(np.nanmean(self.p_suc_mc)):.17g}"
        write_tagged_csv(self.to_frame(), target, REPORT_SCHEMA, footer=footer)


def success_lower_bound(
    scenario: Scenario,
    pattern: PatternLike,
    b: Optional[np.ndarray] = None,
) -> SuccessReport:
    """p_suc_low = P_a(b_i) * clamp(p_d_low) per cell.

    Cells with b_i = 0 score zero and are flagged unserved.
    """
    x = as_matrix(pattern)
    b = x.sum(axis=1) if b is None else np.asarray(b, dtype=float)
    bound = decoding_success_lower_bound(scenario, x, b)

    served = ~bound.unserved
    p_a = np.zeros(scenario.n_cells)
    if np.any(served):
        p_a[served] = collision_avoidance(
            scenario.activation[served],
            scenario.demand[served],
            scenario.link.n_rb,
            b[served],
        )
    p_suc = p_a * bound.clamped
    if np.any(bound.unserved):
        logger.debug(f"Unserved cells: {np.flatnonzero(bound.unserved).tolist()}")
    return SuccessReport(
        p_a=p_a,
        p_d_low_raw=bound.raw,
        p_d_low=bound.clamped,
        p_suc_low=p_suc,
        unserved=bound.unserved,
        decoding_infeasible=bound.infeasible,
    )
