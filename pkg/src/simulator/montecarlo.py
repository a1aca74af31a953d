"""Monte-Carlo simulation of grant-free access over a beam-hopping window.

Per trial every device of cell i activates with probability alpha_i, picks
one of the cell's lit slots and one of N_R resource blocks uniformly. A
transmission is collision-free when no other device of the same cell chose
the same slot and block, and decodes when its SINR against the devices of
the other lit cells on that slot and block exceeds the threshold.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, ClassVar, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..metrics.pattern import as_matrix
from ..metrics.probability import PatternLike
from ..scenario.models import Scenario
from ..utils.config import get_settings, get_yaml_config
from ..utils.csvio import write_tagged_csv
from ..utils.errors import PatternShapeError, UnservedCellError

logger = logging.getLogger(__name__)

MC_SCHEMA = "beamhop-mc/1"
WILSON_Z = 1.96


class McConfig(BaseModel):
    yaml_section: ClassVar[str] = "simulator"

    trials: int = Field(default=10_000, ge=1)
    seed: int = 0
    chunk_trials: int = Field(default=500, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)
    record_slots: bool = False

    @classmethod
    def from_yaml(cls, **overrides) -> "McConfig":
        values = {
            k: v for k, v in get_yaml_config().section(cls.yaml_section).items() if k in cls.model_fields
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def wilson_stderr(successes: np.ndarray, n: np.ndarray, z: float = WILSON_Z) -> np.ndarray:
    """Half-width of the Wilson score interval divided by z."""
    n = np.asarray(n, dtype=float)
    p = np.asarray(successes, dtype=float) / n
    denom = 1.0 + z * z / n
    half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return half / z


def binomial_stderr(successes: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Normal-approximation standard error; Wilson when fewer than 5 successes or failures."""
    successes = np.asarray(successes, dtype=float)
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = successes / n
        normal = np.sqrt(p * (1.0 - p) / n)
        wilson = wilson_stderr(successes, n)
    edge = (successes < 5) | (n - successes < 5)
    return np.where(n > 0, np.where(edge, wilson, normal), np.nan)


@dataclass
class McCounts:
    attempted: np.ndarray
    collision_free: np.ndarray
    decoded: np.ndarray
    slot_decoded: Optional[np.ndarray] = None

    def __add__(self, other: "McCounts") -> "McCounts":
        slots = None
        if self.slot_decoded is not None and other.slot_decoded is not None:
            slots = self.slot_decoded + other.slot_decoded
        return McCounts(
            attempted=self.attempted + other.attempted,
            collision_free=self.collision_free + other.collision_free,
            decoded=self.decoded + other.decoded,
            slot_decoded=slots,
        )


@dataclass
class McResult:
    """Per-cell counts and empirical rates; rates are NaN where a cell never transmitted."""
    attempted: np.ndarray
    collision_free: np.ndarray
    decoded: np.ndarray
    trials: int
    slot_decoded: Optional[np.ndarray] = field(default=None)

    @property
    def undefined(self) -> np.ndarray:
        return self.attempted == 0

    def _rate(self, num: np.ndarray, den: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den > 0, num / den, np.nan)

    @property
    def success_rate(self) -> np.ndarray:
        return self._rate(self.decoded, self.attempted)

    @property
    def stderr(self) -> np.ndarray:
        return binomial_stderr(self.decoded, self.attempted)

    @property
    def collision_free_rate(self) -> np.ndarray:
        return self._rate(self.collision_free, self.attempted)

    @property
    def collision_free_stderr(self) -> np.ndarray:
        return binomial_stderr(self.collision_free, self.attempted)

    @property
    def decoding_rate(self) -> np.ndarray:
        """Decoded share of collision-free transmissions."""
        return self._rate(self.decoded, self.collision_free)

    @property
    def decoding_stderr(self) -> np.ndarray:
        return binomial_stderr(self.decoded, self.collision_free)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "cell_id": np.arange(len(self.attempted)),
                "attempted": self.attempted,
                "collision_free": self.collision_free,
                "decoded": self.decoded,
                "p_a_mc": self.collision_free_rate,
                "p_d_mc": self.decoding_rate,
                "p_suc_mc": self.success_rate,
                "mc_stderr": self.stderr,
                "undefined": self.undefined,
            }
        )

    def write_csv(self, target: Union[str, Path, IO[str]]) -> None:
        write_tagged_csv(self.to_frame(), target, MC_SCHEMA, footer={"trials": self.trials})


class _Window:
    """Pattern-derived lookup tables shared by every chunk."""

    def __init__(self, scenario: Scenario, x: np.ndarray):
        self.n_cells, self.n_slots = x.shape
        self.n_rb = scenario.link.n_rb
        self.devices = scenario.integer_demand
        self.activation = scenario.activation
        self.b = x.sum(axis=1).astype(np.int64)

        self.lit_table = np.zeros((self.n_cells, self.n_slots), dtype=np.int64)
        for i in range(self.n_cells):
            slots = np.flatnonzero(x[i])
            self.lit_table[i, : slots.size] = slots

        slots, cells = np.nonzero(x.T)  # ordered by slot, then cell
        self.n_pairs = cells.size
        self.pair_id = np.full((self.n_cells, self.n_slots), -1, dtype=np.int64)
        self.pair_id[cells, slots] = np.arange(self.n_pairs)

        # per slot: the lit cells, their pair ids and the cross-gain block
        self.slot_groups = []
        for t in range(self.n_slots):
            lit = np.flatnonzero(x[:, t])
            if lit.size < 2:
                continue
            block = scenario.gains[np.ix_(lit, lit)].copy()
            np.fill_diagonal(block, 0.0)
            self.slot_groups.append((self.pair_id[lit, t], block))

        self.own_gain = np.diag(scenario.gains)
        self.noise = 1.0 / scenario.link.rho
        self.gamma_th = scenario.link.gamma_th


def _simulate_chunk(window: _Window, trials: int, seed: np.random.SeedSequence, record_slots: bool) -> McCounts:
    rng = np.random.Generator(np.random.Philox(seed))
    n, rb_count = window.n_cells, window.n_rb

    active = rng.binomial(window.devices, window.activation, size=(trials, n))
    per_entry = active.ravel()
    trial_of = np.repeat(np.repeat(np.arange(trials), n), per_entry)
    cell_of = np.repeat(np.tile(np.arange(n), trials), per_entry)

    choice = rng.integers(0, window.b[cell_of])
    slot_of = window.lit_table[cell_of, choice]
    rb_of = rng.integers(0, rb_count, size=cell_of.size)
    pair_of = window.pair_id[cell_of, slot_of]

    flat = (trial_of * window.n_pairs + pair_of) * rb_count + rb_of
    occupancy = np.bincount(flat, minlength=trials * window.n_pairs * rb_count)
    collision_free = occupancy[flat] == 1

    counts = occupancy.reshape(trials, window.n_pairs, rb_count).astype(float)
    interference = np.zeros_like(counts)
    for pairs, block in window.slot_groups:
        interference[:, pairs, :] = np.einsum("ij,cjr->cir", block, counts[:, pairs, :])

    sinr = window.own_gain[cell_of] / (interference.ravel()[flat] + window.noise)
    decoded = collision_free & (sinr > window.gamma_th)

    slot_decoded = None
    if record_slots:
        slot_decoded = np.bincount(
            cell_of * window.n_slots + slot_of, weights=decoded.astype(float), minlength=n * window.n_slots
        ).reshape(n, window.n_slots)
    return McCounts(
        attempted=active.sum(axis=0).astype(np.int64),
        collision_free=np.bincount(cell_of, weights=collision_free.astype(float), minlength=n).astype(np.int64),
        decoded=np.bincount(cell_of, weights=decoded.astype(float), minlength=n).astype(np.int64),
        slot_decoded=slot_decoded,
    )


def simulate(scenario: Scenario, pattern: PatternLike, config: Optional[McConfig] = None) -> McResult:
    """Estimate per-attempt success rates; fixed seed gives identical counts for any worker count."""
    config = config or McConfig()
    x = (as_matrix(pattern) > 0.5).astype(np.int8)
    if x.shape != (scenario.n_cells, scenario.n_slots):
        raise PatternShapeError(
            f"pattern shape {x.shape} does not match scenario ({scenario.n_cells}, {scenario.n_slots})"
        )
    dark = np.flatnonzero(x.sum(axis=1) == 0)
    if dark.size:
        raise UnservedCellError(dark)

    window = _Window(scenario, x)
    sizes = [config.chunk_trials] * (config.trials // config.chunk_trials)
    if config.trials % config.chunk_trials:
        sizes.append(config.trials % config.chunk_trials)
    seeds = np.random.SeedSequence(config.seed).spawn(len(sizes))
    workers = config.workers or get_settings().workers

    logger.info(f"Simulating {config.trials} trials in {len(sizes)} chunks on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda job: _simulate_chunk(window, job[0], job[1], config.record_slots),
                zip(sizes, seeds),
            )
        )
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return McResult(
        attempted=total.attempted,
        collision_free=total.collision_free,
        decoded=total.decoded,
        trials=config.trials,
        slot_decoded=total.slot_decoded,
    )
