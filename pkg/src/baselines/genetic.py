"""Genetic search over feasible beam-hopping patterns."""

import logging
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..metrics.pattern import BeamHoppingPattern
from ..metrics.report import success_lower_bound
from ..pipeline.ao import repair
from ..scenario.models import Scenario
from ..utils.config import get_yaml_config

logger = logging.getLogger(__name__)


class GeneticConfig(BaseModel):
    yaml_section: ClassVar[str] = "baselines.genetic"

    population: int = Field(default=100, ge=2)
    generations: int = Field(default=250, ge=0)
    crossover_rate: float = Field(default=0.9, ge=0.0, le=1.0)
    mutation_rate: Optional[float] = Field(default=None, ge=0.0, le=1.0)  # None: 1 / (N_c N_slot)
    tournament_size: int = Field(default=3, ge=1)
    elitism: int = Field(default=2, ge=0)
    seed: int = 0

    @model_validator(mode="after")
    def _check_elitism(self) -> "GeneticConfig":
        if self.elitism > self.population:
            raise ValueError("elitism cannot exceed the population size")
        return self

    @classmethod
    def from_yaml(cls, **overrides) -> "GeneticConfig":
        values = {
            k: v for k, v in get_yaml_config().section(cls.yaml_section).items() if k in cls.model_fields
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class GeneticResult:
    pattern: BeamHoppingPattern
    fitness: float
    best_history: list[float] = field(default_factory=list)


class GeneticScheduler:
    """Tournament selection, uniform slot-column crossover, bit-flip mutation, elitism.

    Every individual is repaired to a feasible pattern after each operator;
    fitness is the minimum per-cell success lower bound.
    """

    def __init__(self, scenario: Scenario, config: Optional[GeneticConfig] = None):
        self.scenario = scenario
        self.config = config or GeneticConfig()
        self.rng = np.random.default_rng(self.config.seed)
        size = scenario.n_cells * scenario.n_slots
        self.mutation_rate = (
            self.config.mutation_rate if self.config.mutation_rate is not None else 1.0 / size
        )

    def fitness(self, x: np.ndarray) -> float:
        return success_lower_bound(self.scenario, x).min

    def _repaired(self, x: np.ndarray) -> np.ndarray:
        scores = success_lower_bound(self.scenario, x).p_suc_low
        return repair(x, self.scenario, scores)

    def init_population(self) -> list[np.ndarray]:
        s = self.scenario
        population = []
        for _ in range(self.config.population):
            picks = self.rng.integers(0, s.n_cells, size=(s.n_slots, s.n_beams))
            x = np.zeros((s.n_cells, s.n_slots), dtype=np.int8)
            x[picks, np.arange(s.n_slots)[:, None]] = 1
            population.append(self._repaired(x))
        return population

    def tournament(self, ratings: np.ndarray) -> int:
        entrants = self.rng.integers(0, len(ratings), size=self.config.tournament_size)
        # lowest entrant index wins ties
        return int(min(entrants, key=lambda i: (-ratings[i], i)))

    def crossover(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        if self.rng.random() >= self.config.crossover_rate:
            return first.copy()
        take_first = self.rng.random(first.shape[1]) < 0.5
        return np.where(take_first[None, :], first, second).astype(np.int8)

    def mutate(self, x: np.ndarray) -> np.ndarray:
        flips = self.rng.random(x.shape) < self.mutation_rate
        return np.where(flips, 1 - x, x).astype(np.int8)

    def promote_elite(self, population: list[np.ndarray], ratings: np.ndarray) -> list[np.ndarray]:
        order = np.argsort(-ratings, kind="stable")
        return [population[i].copy() for i in order[: self.config.elitism]]

    def optimize(self) -> GeneticResult:
        population = self.init_population()
        ratings = np.array([self.fitness(x) for x in population])
        history = [float(ratings.max())]

        for generation in range(self.config.generations):
            next_gen = self.promote_elite(population, ratings)
            while len(next_gen) < self.config.population:
                first = population[self.tournament(ratings)]
                second = population[self.tournament(ratings)]
                child = self.mutate(self.crossover(first, second))
                next_gen.append(self._repaired(child))
            population = next_gen
            ratings = np.array([self.fitness(x) for x in population])
            history.append(float(ratings.max()))
            logger.debug(f"Generation {generation + 1}: best fitness {history[-1]:.6f}")

        best = int(np.argmax(ratings))
        return GeneticResult(
            pattern=BeamHoppingPattern(population[best]),
            fitness=float(ratings[best]),
            best_history=history,
        )


def genetic_pattern(scenario: Scenario, config: Optional[GeneticConfig] = None) -> BeamHoppingPattern:
    return GeneticScheduler(scenario, config).optimize().pattern
