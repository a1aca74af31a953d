"""Beam-hopping pattern and beam allocation types, plus pattern persistence."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np
import pandas as pd

from ..scenario.models import Scenario
from ..utils.csvio import read_schema, read_tagged_csv, write_tagged_csv
from ..utils.errors import PatternShapeError, ScenarioParseError

logger = logging.getLogger(__name__)

PATTERN_SCHEMA = "beamhop-pattern/1"
HEATMAP_SCHEMA = "beamhop-heatmap/1"


@dataclass(frozen=True, eq=False)
class BeamHoppingPattern:
    """Binary cell-by-slot illumination matrix X."""
    matrix: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.matrix)
        if x.ndim != 2:
            raise PatternShapeError(f"pattern must be a 2-D matrix, got shape {x.shape}")
        if not np.all((x == 0) | (x == 1)):
            raise PatternShapeError("pattern entries must be 0 or 1")
        x = x.astype(np.int8)
        x.setflags(write=False)
        object.__setattr__(self, "matrix", x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BeamHoppingPattern):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_cells(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_slots(self) -> int:
        return self.matrix.shape[1]

    @property
    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1).astype(np.int64)

    @property
    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0).astype(np.int64)

    def allocation(self) -> np.ndarray:
        """b_i = sum_t x_i^t."""
        return self.row_sums

    def slot_capacity_ok(self, n_beams: int) -> bool:
        return bool(np.all(self.column_sums <= n_beams))

    def every_cell_served(self) -> bool:
        return bool(np.all(self.row_sums >= 1))

    def unserved_cells(self) -> np.ndarray:
        return np.flatnonzero(self.row_sums == 0)

    def is_feasible(self, n_beams: int) -> bool:
        """Binary, at most n_beams cells per slot, every cell lit at least once."""
        return self.slot_capacity_ok(n_beams) and self.every_cell_served()

    def check_shape(self, scenario: Scenario) -> None:
        expected = (scenario.n_cells, scenario.n_slots)
        if self.matrix.shape != expected:
            raise PatternShapeError(
                f"pattern shape {self.matrix.shape} does not match scenario {expected}"
            )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            self.matrix.astype(np.int64), columns=[f"s{t}" for t in range(self.n_slots)]
        )
        frame.insert(0, "cell_id", np.arange(self.n_cells))
        return frame


@dataclass(frozen=True, eq=False)
class BeamAllocation:
    """Integer beam-slot counts b_i per cell."""
    counts: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.counts)
        if b.ndim != 1:
            raise ValueError(f"allocation must be a vector, got shape {b.shape}")
        if not np.all(np.rint(b) == b):
            raise ValueError("allocation entries must be integers")
        b = b.astype(np.int64)
        b.setflags(write=False)
        object.__setattr__(self, "counts", b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BeamAllocation):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    __hash__ = None  # type: ignore[assignment]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def violations(self, scenario: Scenario) -> list[str]:
        """Human-readable list of violated allocation constraints."""
        problems = []
        if self.counts.shape != (scenario.n_cells,):
            return [f"allocation length {self.counts.size} != {scenario.n_cells} cells"]
        if np.any(self.counts < 1):
            problems.append(f"cells with b_i < 1: {np.flatnonzero(self.counts < 1).tolist()}")
        if np.any(self.counts > scenario.n_slots):
            problems.append(
                f"cells with b_i > {scenario.n_slots}: "
                f"{np.flatnonzero(self.counts > scenario.n_slots).tolist()}"
            )
        if self.total > scenario.capacity:
            problems.append(f"total {self.total} exceeds capacity {scenario.capacity}")
        return problems

    def is_feasible(self, scenario: Scenario) -> bool:
        return not self.violations(scenario)


def as_matrix(pattern: Union[BeamHoppingPattern, np.ndarray]) -> np.ndarray:
    """Float view of a pattern or a (possibly fractional) matrix."""
    if isinstance(pattern, BeamHoppingPattern):
        return pattern.matrix.astype(float)
    return np.asarray(pattern, dtype=float)


def save_pattern(pattern: BeamHoppingPattern, target: Union[str, Path, IO[str]]) -> None:
    """Write `cell_id,s0,...` rows under a schema header."""
    write_tagged_csv(pattern.to_frame(), target, PATTERN_SCHEMA)
    if isinstance(target, (str, Path)):
        logger.info(f"Saved {pattern.n_cells}x{pattern.n_slots} pattern to {target}")


def load_pattern(path: Union[str, Path]) -> BeamHoppingPattern:
    try:
        schema = read_schema(path)
        frame = read_tagged_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ScenarioParseError("pattern", str(e)) from e
    if schema not in (None, PATTERN_SCHEMA):
        raise ScenarioParseError("schema", f"unexpected pattern schema '{schema}'")
    if "cell_id" not in frame.columns:
        raise ScenarioParseError("cell_id", f"missing column in {path}")
    frame = frame.sort_values("cell_id")
    if frame["cell_id"].tolist() != list(range(len(frame))):
        raise ScenarioParseError("cell_id", "cell ids must be 0..N_c-1")
    slots = [c for c in frame.columns if c != "cell_id"]
    try:
        return BeamHoppingPattern(frame[slots].to_numpy())
    except PatternShapeError as e:
        raise ScenarioParseError("pattern", str(e)) from e


def heatmap_frame(pattern: BeamHoppingPattern, scenario: Optional[Scenario] = None) -> pd.DataFrame:
    """Long-format `cell_id,slot,lit,demand` rows for external heatmap plotting."""
    cells, slots = np.meshgrid(
        np.arange(pattern.n_cells), np.arange(pattern.n_slots), indexing="ij"
    )
    demand = (
        np.repeat(scenario.demand, pattern.n_slots)
        if scenario is not None
        else np.full(cells.size, np.nan)
    )
    return pd.DataFrame(
        {
            "cell_id": cells.ravel(),
            "slot": slots.ravel(),
            "lit": pattern.matrix.ravel().astype(np.int64),
            "demand": demand,
        }
    )


def save_heatmap(
    pattern: BeamHoppingPattern, scenario: Scenario, target: Union[str, Path, IO[str]]
) -> None:
    write_tagged_csv(heatmap_frame(pattern, scenario), target, HEATMAP_SCHEMA)
