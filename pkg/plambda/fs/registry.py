from typing import Dict, List, Type

from .base import BaseCLBChecker

__all__ = [
    "get_checker",
    "register_checker",
    "add_checker_alias",
    "get_known_checkers",
    "list_registered_checkers",
]


class _checker_registry:
    _checker_registry: Dict[str, Type[BaseCLBChecker]] = {}
    _checker_aliases: Dict[str, str] = {}

    @classmethod
    def get_checker(cls, mode: str) -> Type[BaseCLBChecker]:
        """Get the checker class registered for a checking mode.

        Parameters
        ----------
        mode: str
            The mode name, for example ``"bigstep"``.

        Raises
        ------
        ValueError
            If ``mode`` has not been registered.

        Returns
        -------
        Type[BaseCLBChecker]
            The checker class.
        """
        try:
            return cls._checker_registry[mode]
        except Exception:
            raise ValueError(
                f"Unknown checking mode {repr(mode)}. "
                f"Available values are {list(cls._checker_registry)}"
            )

    @classmethod
    def register_checker(cls, mode: str, checker: Type[BaseCLBChecker]):
        if mode in cls._checker_registry:
            raise ValueError(
                f"A checker for mode {repr(mode)} is already registered. "
                "Please choose a different name."
            )
        try:
            if not issubclass(checker, BaseCLBChecker):
                raise TypeError()
        except Exception:
            raise TypeError(
                f"The supplied checker {checker} is not derived from {BaseCLBChecker}"
            )
        cls._checker_registry[mode] = checker

    @classmethod
    def add_checker_alias(cls, alias: str, mode: str):
        if alias in cls._checker_registry:
            raise ValueError(
                f"The alias {repr(alias)} is already registered, please choose a different alias."
            )
        if mode not in cls._checker_registry:
            raise ValueError(
                f"Unknown checking mode {repr(mode)}. "
                f"Available values are {list(cls._checker_registry)}"
            )
        cls._checker_registry[alias] = cls._checker_registry[mode]
        cls._checker_aliases[alias] = mode


get_checker = _checker_registry.get_checker

register_checker = _checker_registry.register_checker

add_checker_alias = _checker_registry.add_checker_alias


def get_known_checkers() -> List[str]:
    return list(_checker_registry._checker_registry)


def list_registered_checkers() -> List[Type[BaseCLBChecker]]:  # pragma: no cover
    return list(_checker_registry._checker_registry.values())
