import pytest

from plambda.strategies import CallByName, CallByValue
from plambda.strategies.base import BaseStrategy
from plambda.strategies.registry import (
    _strategy_registry,
    add_strategy_alias,
    get_known_strategies,
    get_strategy,
    register_strategy,
    resolve_strategy,
)
from plambda.syntax import parse_term


def test_strategy_registry():
    try:
        name = "mock_strategy"

        class proxy(BaseStrategy):
            pass

        with pytest.raises(
            ValueError, match=f"Unknown strategy {name!r}. Available values are "
        ):
            get_strategy(name)
        register_strategy(name, proxy)
        assert get_strategy(name) is proxy
        assert name in get_known_strategies()
        with pytest.raises(
            ValueError,
            match=f"A strategy with name {name!r} is already registered. Please choose a ",
        ):
            register_strategy(name, proxy)
        with pytest.raises(TypeError, match="is not derived from"):
            register_strategy("mock_strategy2", object)
    finally:
        del _strategy_registry._strategy_registry[name]


def test_strategy_alias():
    try:
        alias = "mock_alias"
        add_strategy_alias(alias, "cbn")
        assert get_strategy(alias) is CallByName
        with pytest.raises(ValueError, match="is already registered"):
            add_strategy_alias(alias, "cbv")
        with pytest.raises(ValueError, match="Unknown strategy"):
            add_strategy_alias("mock_alias2", "mock_missing")
    finally:
        del _strategy_registry._strategy_registry[alias]
        del _strategy_registry._strategy_aliases[alias]


def test_builtin_aliases():
    assert get_strategy("name") is CallByName
    assert get_strategy("value") is CallByValue


@pytest.mark.usefixtures("strategies")
def test_resolve_strategy(strategies):
    instance = resolve_strategy(strategies)
    assert instance.name == strategies
    assert resolve_strategy(instance) is instance


@pytest.mark.usefixtures("wrong_strategies")
def test_unknown_strategies(wrong_strategies):
    with pytest.raises(ValueError, match="Unknown strategy"):
        resolve_strategy(wrong_strategies)


def test_value_arguments():
    cbv, cbn = CallByValue(), CallByName()
    choice = parse_term("I (+) OMEGA")
    assert cbn.accepts_argument(choice)
    assert not cbv.accepts_argument(choice)
    assert cbv.accepts_argument(parse_term("I"))
