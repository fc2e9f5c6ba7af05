from typing import Dict, List, Type, Union

from .base import BaseStrategy

__all__ = [
    "get_strategy",
    "register_strategy",
    "add_strategy_alias",
    "resolve_strategy",
    "get_known_strategies",
    "list_registered_strategies",
]


class _strategy_registry:
    _strategy_registry: Dict[str, Type[BaseStrategy]] = {}
    _strategy_aliases: Dict[str, str] = {}

    @classmethod
    def get_strategy(cls, name: str) -> Type[BaseStrategy]:
        """Get the strategy class registered with a given name.

        Parameters
        ----------
        name: str
            The strategy name, for example ``"cbn"``.

        Raises
        ------
        ValueError
            If the supplied ``name`` has not been registered.

        Returns
        -------
        Type[BaseStrategy]
            The strategy class.
        """
        try:
            return cls._strategy_registry[name]
        except Exception:
            raise ValueError(
                f"Unknown strategy {repr(name)}. "
                f"Available values are {list(cls._strategy_registry)}"
            )

    @classmethod
    def register_strategy(cls, name: str, strategy: Type[BaseStrategy]):
        """Register an evaluation strategy.

        Raises
        ------
        ValueError
            If ``name`` is already registered.
        TypeError
            If ``strategy`` is not a :class:`~plambda.strategies.base.BaseStrategy` subclass.
        """
        if name in cls._strategy_registry:
            raise ValueError(
                f"A strategy with name {repr(name)} is already registered. "
                "Please choose a different name."
            )
        try:
            if not issubclass(strategy, BaseStrategy):
                raise TypeError()
        except Exception:
            raise TypeError(
                f"The supplied strategy {strategy} is not derived from {BaseStrategy}"
            )
        cls._strategy_registry[name] = strategy

    @classmethod
    def add_strategy_alias(cls, alias: str, strategy: str):
        if alias in cls._strategy_registry:
            raise ValueError(
                f"The alias {repr(alias)} is already registered, please choose a different alias."
            )
        if strategy not in cls._strategy_registry:
            raise ValueError(
                f"Unknown strategy {repr(strategy)}. "
                f"Available values are {list(cls._strategy_registry)}"
            )
        cls._strategy_registry[alias] = cls._strategy_registry[strategy]
        cls._strategy_aliases[alias] = strategy


get_strategy = _strategy_registry.get_strategy

register_strategy = _strategy_registry.register_strategy

add_strategy_alias = _strategy_registry.add_strategy_alias


def resolve_strategy(strategy: Union[str, BaseStrategy]) -> BaseStrategy:
    """Return a strategy instance from a registered name or pass an instance through."""
    if isinstance(strategy, BaseStrategy):
        return strategy
    return get_strategy(strategy)()


def get_known_strategies() -> List[str]:
    """Get the names (aliases included) of the registered strategies."""
    return list(_strategy_registry._strategy_registry)


def list_registered_strategies() -> List[Type[BaseStrategy]]:  # pragma: no cover
    return list(_strategy_registry._strategy_registry.values())
