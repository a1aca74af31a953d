from .genetic import GeneticConfig, GeneticResult, GeneticScheduler, genetic_pattern
from .simple import greedy_pattern, random_pattern, round_robin_pattern

__all__ = [
    "GeneticConfig",
    "GeneticResult",
    "GeneticScheduler",
    "genetic_pattern",
    "greedy_pattern",
    "random_pattern",
    "round_robin_pattern",
]
