"""Factory for beam-hopping pattern methods."""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Type

from ..baselines.genetic import GeneticConfig, GeneticScheduler
from ..baselines.simple import GreedyCriterion, greedy_pattern, random_pattern, round_robin_pattern
from ..metrics.pattern import BeamHoppingPattern
from ..scenario.models import Scenario
from ..utils.config import get_yaml_config
from .ao import AoConfig, AoResult, optimize


class MethodType(Enum):
    """Pattern methods available from the command line and the sweep runner."""
    B_A = "b-a"
    B_L2A = "b-l2a"
    RANDOM = "random"
    ROUND_ROBIN = "round-robin"
    GREEDY = "greedy"
    GENETIC = "genetic"


@dataclass
class MethodOutcome:
    pattern: BeamHoppingPattern
    elapsed_s: float
    ao_result: Optional[AoResult] = None


class PatternMethod(ABC):
    """A method maps a scenario (and a seed, where it is stochastic) to a pattern."""

    method_type: MethodType

    def run(self, scenario: Scenario, seed: int = 0) -> MethodOutcome:
        start = time.perf_counter()
        pattern, ao_result = self._solve(scenario, seed)
        return MethodOutcome(
            pattern=pattern, elapsed_s=time.perf_counter() - start, ao_result=ao_result
        )

    @abstractmethod
    def _solve(
        self, scenario: Scenario, seed: int
    ) -> tuple[BeamHoppingPattern, Optional[AoResult]]:
        ...


class _AlternatingMethod(PatternMethod):
    inner: str

    def __init__(self, config: Optional[AoConfig] = None):
        base = config or AoConfig()
        self.config = base.model_copy(update={"inner": self.inner})

    def _solve(self, scenario, seed):
        result = optimize(scenario, self.config.model_copy(update={"seed": seed}))
        return result.pattern, result


class BisectionAdmmMethod(_AlternatingMethod):
    method_type = MethodType.B_A
    inner = "admm"


class BisectionL2BoxMethod(_AlternatingMethod):
    method_type = MethodType.B_L2A
    inner = "l2box"


class RandomMethod(PatternMethod):
    method_type = MethodType.RANDOM

    def _solve(self, scenario, seed):
        return random_pattern(scenario, seed=seed), None


class RoundRobinMethod(PatternMethod):
    method_type = MethodType.ROUND_ROBIN

    def _solve(self, scenario, seed):
        return round_robin_pattern(scenario), None


class GreedyMethod(PatternMethod):
    method_type = MethodType.GREEDY

    def __init__(self, criterion: GreedyCriterion = "devices-per-beam"):
        self.criterion = criterion

    def _solve(self, scenario, seed):
        return greedy_pattern(scenario, self.criterion), None


class GeneticMethod(PatternMethod):
    method_type = MethodType.GENETIC

    def __init__(self, config: Optional[GeneticConfig] = None):
        self.config = config or GeneticConfig()

    def _solve(self, scenario, seed):
        config = self.config.model_copy(update={"seed": seed})
        return GeneticScheduler(scenario, config).optimize().pattern, None


class MethodFactory:
    """Factory for creating pattern methods based on type."""

    _methods: dict[MethodType, Type[PatternMethod]] = {
        MethodType.B_A: BisectionAdmmMethod,
        MethodType.B_L2A: BisectionL2BoxMethod,
        MethodType.RANDOM: RandomMethod,
        MethodType.ROUND_ROBIN: RoundRobinMethod,
        MethodType.GREEDY: GreedyMethod,
        MethodType.GENETIC: GeneticMethod,
    }

    @classmethod
    def create(cls, method: MethodType | str, **kwargs) -> PatternMethod:
        """Create a method instance; keyword arguments go to its constructor."""
        try:
            method_type = MethodType(method)
        except ValueError:
            raise ValueError(f"Unknown method: {method}") from None
        if method_type not in cls._methods:
            raise ValueError(f"Unknown method: {method}")
        return cls._methods[method_type](**kwargs)

    @classmethod
    def register(cls, method_type: MethodType, method_class: Type[PatternMethod]) -> None:
        cls._methods[method_type] = method_class

    @classmethod
    def available(cls) -> list[str]:
        return [m.value for m in cls._methods]

    @classmethod
    def from_yaml(cls, method: MethodType | str) -> PatternMethod:
        """Create a method configured from the YAML defaults."""
        try:
            method_type = MethodType(method)
        except ValueError:
            raise ValueError(f"Unknown method: {method}") from None
        if method_type in (MethodType.B_A, MethodType.B_L2A):
            return cls.create(method_type, config=AoConfig.from_yaml())
        if method_type == MethodType.GENETIC:
            return cls.create(method_type, config=GeneticConfig.from_yaml())
        if method_type == MethodType.GREEDY:
            criterion = get_yaml_config().get("baselines.greedy.criterion", "devices-per-beam")
            return cls.create(method_type, criterion=criterion)
        return cls.create(method_type)
