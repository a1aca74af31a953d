import numpy as np
import pytest
from pydantic import ValidationError

from src.baselines import GeneticConfig, GeneticScheduler, genetic_pattern


def _small(seed: int = 0) -> GeneticConfig:
    return GeneticConfig(population=12, generations=8, seed=seed)


def test_elitism_cannot_exceed_population() -> None:
    with pytest.raises(ValidationError):
        GeneticConfig(population=4, elitism=5)


def test_default_mutation_rate_scales_with_pattern(tiny_scenario) -> None:
    scheduler = GeneticScheduler(tiny_scenario, _small())
    assert scheduler.mutation_rate == pytest.approx(1.0 / 16)


def test_initial_population_is_feasible(tiny_scenario) -> None:
    scheduler = GeneticScheduler(tiny_scenario, _small())
    population = scheduler.init_population()
    assert len(population) == 12
    for x in population:
        assert np.all(x.sum(axis=0) == tiny_scenario.n_beams)
        assert np.all(x.sum(axis=1) >= 1)


def test_crossover_mixes_whole_slots(tiny_scenario) -> None:
    scheduler = GeneticScheduler(tiny_scenario, GeneticConfig(crossover_rate=1.0))
    first = np.zeros((4, 4), dtype=np.int8)
    second = np.ones((4, 4), dtype=np.int8)
    child = scheduler.crossover(first, second)
    for t in range(4):
        assert len(np.unique(child[:, t])) == 1


def test_tournament_prefers_fitter_entrant(tiny_scenario) -> None:
    scheduler = GeneticScheduler(tiny_scenario, GeneticConfig(tournament_size=50))
    assert scheduler.tournament(np.array([0.1, 0.9, 0.5])) == 1


def test_elitism_keeps_best_fitness_monotone(tiny_scenario) -> None:
    result = GeneticScheduler(tiny_scenario, _small()).optimize()
    history = np.array(result.best_history)
    assert len(history) == 9
    assert np.all(np.diff(history) >= -1e-12)
    assert result.fitness == pytest.approx(history[-1])
    assert result.pattern.is_feasible(tiny_scenario.n_beams)


def test_genetic_is_seeded(tiny_scenario) -> None:
    assert genetic_pattern(tiny_scenario, _small(4)) == genetic_pattern(tiny_scenario, _small(4))
