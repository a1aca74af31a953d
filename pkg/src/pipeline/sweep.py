"""Satellite-position sweep comparing pattern methods.

Positions are drawn uniformly from a lat/lon box centred on the scenario's
sub-satellite point. Every method runs at every position; a position where
any method fails is logged and skipped.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from ..metrics.report import success_lower_bound
from ..scenario.builder import relocate_satellite
from ..scenario.models import Scenario
from ..utils.config import get_settings, get_yaml_config
from ..utils.csvio import write_tagged_csv
from ..utils.errors import BeamHoppingError
from ..utils.logging import get_logger, log_context
from .events import EventType, emit_event
from .methods import MethodFactory, PatternMethod

logger = get_logger(__name__)

SUMMARY_SCHEMA = "beamhop-sweep-summary/1"
CDF_SCHEMA = "beamhop-sweep-cdf/1"
FRACTION_SCHEMA = "beamhop-sweep-fraction/1"


class SweepConfig(BaseModel):
    yaml_section: ClassVar[str] = "sweep"

    positions: int = Field(default=100, ge=1)
    lat_span_deg: float = Field(default=2.0, ge=0.0)
    lon_span_deg: float = Field(default=2.0, ge=0.0)
    methods: list[str] = Field(default_factory=lambda: ["b-a", "b-l2a", "greedy", "round-robin", "random"])
    seed: int = 0
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value: list[str]) -> list[str]:
        if not value:
            raise ValueError("at least one method is required")
        unknown = [m for m in value if m not in MethodFactory.available()]
        if unknown:
            raise ValueError(f"Unknown methods: {unknown}")
        return value

    @classmethod
    def from_yaml(cls, **overrides) -> "SweepConfig":
        values = {
            k: v for k, v in get_yaml_config().section(cls.yaml_section).items() if k in cls.model_fields
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class PositionResult:
    position: int
    lat: float
    lon: float
    rows: list[dict]
    fractions: list[pd.DataFrame]


@dataclass
class SweepResult:
    results: list[PositionResult] = field(default_factory=list)
    failed: list[int] = field(default_factory=list)

    def summary_frame(self) -> pd.DataFrame:
        columns = ["position", "lat", "lon", "method", "min_psuc", "mean_psuc", "runtime_s", "feasible"]
        rows = [row for r in self.results for row in r.rows]
        return pd.DataFrame(rows, columns=columns)

    def cdf_frame(self) -> pd.DataFrame:
        """Empirical CDF of the minimum p_suc per method."""
        summary = self.summary_frame()
        parts = []
        for method, group in summary.groupby("method", sort=False):
            values = np.sort(group["min_psuc"].to_numpy())
            parts.append(
                pd.DataFrame(
                    {
                        "method": method,
                        "min_psuc": values,
                        "cdf": np.arange(1, len(values) + 1) / len(values),
                    }
                )
            )
        if not parts:
            return pd.DataFrame(columns=["method", "min_psuc", "cdf"])
        return pd.concat(parts, ignore_index=True)

    def fraction_frame(self) -> pd.DataFrame:
        frames = [f for r in self.results for f in r.fractions]
        if not frames:
            return pd.DataFrame(columns=["method", "position", "fraction", "value"])
        return pd.concat(frames, ignore_index=True)

    def write(self, output_dir: str | Path) -> dict[str, Path]:
        out = Path(output_dir)
        paths = {
            "summary": out / "sweep_summary.csv",
            "cdf": out / "sweep_cdf.csv",
            "fraction": out / "sweep_fraction.csv",
        }
        footer = {"positions": len(self.results), "failed": len(self.failed)}
        write_tagged_csv(self.summary_frame(), paths["summary"], SUMMARY_SCHEMA, footer=footer)
        write_tagged_csv(self.cdf_frame(), paths["cdf"], CDF_SCHEMA)
        write_tagged_csv(self.fraction_frame(), paths["fraction"], FRACTION_SCHEMA)
        return paths


def sample_positions(scenario: Scenario, config: SweepConfig) -> np.ndarray:
    """(positions, 2) array of lat/lon drawn uniformly around the sub-satellite point."""
    rng = np.random.default_rng(config.seed)
    lat = scenario.geometry.lat + rng.uniform(-0.5, 0.5, config.positions) * config.lat_span_deg
    lon = scenario.geometry.lon + rng.uniform(-0.5, 0.5, config.positions) * config.lon_span_deg
    lon = (lon + 180.0) % 360.0 - 180.0
    return np.column_stack([np.clip(lat, -90.0, 90.0), lon])


class SweepRunner:
    """Runs every configured method at every sampled satellite position."""

    def __init__(self, scenario: Scenario, config: Optional[SweepConfig] = None,
                 methods: Optional[dict[str, PatternMethod]] = None):
        self.scenario = scenario
        self.config = config or SweepConfig()
        self.methods = methods or {name: MethodFactory.from_yaml(name) for name in self.config.methods}

    def run_position(self, position: int, lat: float, lon: float) -> PositionResult:
        moved = relocate_satellite(self.scenario, float(lat), float(lon))
        rows, fractions = [], []
        for name, method in self.methods.items():
            outcome = method.run(moved, seed=self.config.seed + position)
            report = success_lower_bound(moved, outcome.pattern)
            rows.append(
                {
                    "position": position,
                    "lat": float(lat),
                    "lon": float(lon),
                    "method": name,
                    "min_psuc": report.min,
                    "mean_psuc": report.mean,
                    "runtime_s": outcome.elapsed_s,
                    "feasible": outcome.pattern.is_feasible(moved.n_beams),
                }
            )
            curve = report.cumulative_fraction()
            curve.insert(0, "position", position)
            curve.insert(0, "method", name)
            fractions.append(curve)
            logger.debug("method_finished", method=name, min_psuc=report.min)
        return PositionResult(position, float(lat), float(lon), rows, fractions)

    def _guarded(self, job: tuple[int, np.ndarray]) -> Optional[PositionResult]:
        position, (lat, lon) = job
        with log_context(position=position):
            try:
                result = self.run_position(position, lat, lon)
            except BeamHoppingError as e:
                emit_event(
                    EventType.POSITION_FAILED,
                    {"position": position, "lat": float(lat), "lon": float(lon), "error": str(e)},
                )
                return None
        emit_event(EventType.POSITION_COMPLETED, {"position": position})
        return result

    def run(self) -> SweepResult:
        points = sample_positions(self.scenario, self.config)
        workers = self.config.workers or get_settings().workers
        logger.info("sweep_started", positions=len(points), methods=list(self.methods), workers=workers)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(self._guarded, enumerate(points)))

        sweep = SweepResult()
        for position, outcome in enumerate(outcomes):
            if outcome is None:
                sweep.failed.append(position)
            else:
                sweep.results.append(outcome)
        emit_event(EventType.SWEEP_COMPLETED, {"completed": len(sweep.results), "failed": len(sweep.failed)})
        return sweep


def run_sweep(scenario: Scenario, config: Optional[SweepConfig] = None) -> SweepResult:
    return SweepRunner(scenario, config).run()
