"""Starting points and rounding bookkeeping shared by the ADMM variants.

The pattern objective couples cells only within a slot and both splittings
act entrywise, so a start whose columns are all equal keeps equal columns
forever. Starts built here differ from slot to slot.
"""

from typing import Optional

import numpy as np


def wraparound_pattern(b: np.ndarray, n_slots: int) -> np.ndarray:
    """Binary pattern lighting cell i in slots (o_i + k) mod T for k < b_i.

    o_i is the cumulative allocation of the cells before i. Row sums are b and
    each slot is lit at most ceil(sum(b) / T) times, so when sum(b) = T * N_b
    every slot lights exactly N_b cells.
    """
    counts = np.rint(np.asarray(b, dtype=float)).astype(int)
    if np.any(counts < 0) or np.any(counts > n_slots):
        raise ValueError(f"allocations must lie in [0, {n_slots}], got {counts.tolist()}")
    pattern = np.zeros((counts.size, n_slots))
    rows = np.repeat(np.arange(counts.size), counts)
    # o_i + k runs through 0 .. sum(b) - 1 in cell order
    slots = np.arange(counts.sum()) % n_slots
    pattern[rows, slots] = 1.0
    return pattern


def staggered_start(
    b: np.ndarray,
    n_slots: int,
    blend: float = 0.5,
    jitter: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """blend * wrap-around pattern + (1 - blend) * b_i / T, plus optional uniform jitter."""
    b = np.asarray(b, dtype=float)
    uniform = np.repeat((b / n_slots)[:, None], n_slots, axis=1)
    x = blend * wraparound_pattern(b, n_slots) + (1.0 - blend) * uniform
    if jitter > 0.0:
        rng = rng if rng is not None else np.random.default_rng(0)
        x = np.clip(x + rng.uniform(-jitter, jitter, size=x.shape), 0.0, 1.0)
    return x


class BestRounding:
    """Keeps the lowest-objective rounding that meets both sum constraints."""

    def __init__(self, g: np.ndarray, b: np.ndarray, n_b: int):
        self.g = g
        self.b = np.rint(np.asarray(b, dtype=float))
        self.n_b = n_b
        self.best: Optional[np.ndarray] = None
        self.objective = np.inf
        self.offers = 0

    def is_feasible(self, x: np.ndarray) -> bool:
        return bool(np.all(x.sum(axis=0) == self.n_b) and np.all(x.sum(axis=1) == self.b))

    def offer(self, x_binary: np.ndarray) -> bool:
        """Record a binary candidate; returns True when it becomes the incumbent."""
        self.offers += 1
        if not self.is_feasible(x_binary):
            return False
        value = float(np.einsum("it,ij,jt->", x_binary, self.g, x_binary))
        if value >= self.objective:
            return False
        self.best = x_binary.copy()
        self.objective = value
        return True

    def result(self, fallback: np.ndarray) -> np.ndarray:
        """Incumbent if any candidate was feasible, else `fallback`."""
        return self.best.copy() if self.best is not None else fallback
