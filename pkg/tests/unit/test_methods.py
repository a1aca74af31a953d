import pytest

from src.baselines import GeneticConfig, round_robin_pattern
from src.pipeline import methods
from src.pipeline.ao import AoConfig
from src.pipeline.methods import (
    BisectionAdmmMethod,
    BisectionL2BoxMethod,
    GreedyMethod,
    MethodFactory,
    MethodType,
    PatternMethod,
    RandomMethod,
)
from src.solvers.config import AdmmConfig, L2BoxConfig


def test_available_lists_every_method() -> None:
    assert set(MethodFactory.available()) == {
        "b-a", "b-l2a", "random", "round-robin", "greedy", "genetic"
    }


def test_create_by_name_and_enum() -> None:
    assert isinstance(MethodFactory.create("random"), RandomMethod)
    greedy = MethodFactory.create(MethodType.GREEDY, criterion="inverse")
    assert isinstance(greedy, GreedyMethod)
    assert greedy.criterion == "inverse"


def test_create_rejects_unknown_method() -> None:
    with pytest.raises(ValueError, match="Unknown method"):
        MethodFactory.create("simulated-annealing")
    with pytest.raises(ValueError, match="Unknown method"):
        MethodFactory.from_yaml("simulated-annealing")


def test_alternating_methods_pin_their_inner_solver() -> None:
    config = AoConfig(inner="l2box")
    assert BisectionAdmmMethod(config).config.inner == "admm"
    assert BisectionL2BoxMethod(AoConfig(inner="admm")).config.inner == "l2box"
    assert config.inner == "l2box"


def test_from_yaml_configures_solvers() -> None:
    method = MethodFactory.from_yaml("b-a")
    assert method.config.inner == "admm"
    assert MethodFactory.from_yaml("genetic").config.population >= 2


def test_run_times_the_method(tiny_scenario) -> None:
    outcome = MethodFactory.create("round-robin").run(tiny_scenario)
    assert outcome.pattern == round_robin_pattern(tiny_scenario)
    assert outcome.elapsed_s >= 0.0
    assert outcome.ao_result is None


def test_random_method_uses_the_seed(tiny_scenario) -> None:
    method = MethodFactory.create("random")
    assert method.run(tiny_scenario, seed=2).pattern == method.run(tiny_scenario, seed=2).pattern


def test_genetic_method_overrides_seed(tiny_scenario) -> None:
    method = MethodFactory.create("genetic", config=GeneticConfig(population=6, generations=2, seed=99))
    outcome = method.run(tiny_scenario, seed=1)
    assert outcome.pattern.is_feasible(tiny_scenario.n_beams)
    assert method.config.seed == 99


def test_ao_method_returns_its_trace(tiny_scenario) -> None:
    config = AoConfig(n_ao=1, admm=AdmmConfig(iterations=20), l2box=L2BoxConfig(iterations=20))
    outcome = MethodFactory.create("b-l2a", config=config).run(tiny_scenario)
    assert outcome.ao_result is not None
    assert len(outcome.ao_result.trace) == 1


def test_register_replaces_a_method(monkeypatch) -> None:
    class Fixed(PatternMethod):
        method_type = MethodType.ROUND_ROBIN

        def _solve(self, scenario, seed):
            return round_robin_pattern(scenario), None

    monkeypatch.setattr(MethodFactory, "_methods", dict(MethodFactory._methods))
    MethodFactory.register(MethodType.ROUND_ROBIN, Fixed)
    assert isinstance(MethodFactory.create("round-robin"), Fixed)


def test_alternating_method_forwards_seed(mocker, tiny_scenario) -> None:
    spy = mocker.spy(methods, "optimize")
    method = BisectionAdmmMethod(AoConfig(n_ao=1, admm=AdmmConfig(iterations=10)))
    method.run(tiny_scenario, seed=9)
    assert spy.call_args.args[1].seed == 9
    assert method.config.seed == 0
