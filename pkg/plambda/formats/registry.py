from typing import Any, Dict, List, Optional, Sequence, Type

from ..syntax.env import NamedEnv
from ..utils import PathType, input_path
from .base import BaseFormat

__all__ = [
    "get_format",
    "get_format_from_extension",
    "get_format_name_from_extension",
    "register_format",
    "add_format_alias",
    "get_registered_extensions",
    "get_known_formats",
    "infer_format",
    "load",
    "loads",
]


class _format_registry:
    _format_registry: Dict[str, Type[BaseFormat]] = {}
    _format_aliases: Dict[str, str] = {}
    _format_extension_map: Dict[str, str] = {}

    @classmethod
    def get_format(cls, name: str) -> Type[BaseFormat]:
        """Get the format class registered with a given name.

        Raises
        ------
        ValueError
            If the supplied ``name`` has not been registered.
        """
        try:
            return cls._format_registry[name]
        except Exception:
            raise ValueError(
                f"Unknown format {repr(name)}. "
                f"Available values are {list(cls._format_registry)}"
            )

    @classmethod
    def get_format_name_from_extension(cls, extension: str) -> str:
        """Get the format name registered with a file extension.

        Parameters
        ----------
        extension : str
            The file extension, for example ``".lmc"``. Leading dots are stripped,
            so ``".lmc"`` and ``"lmc"`` are equivalent.

        Raises
        ------
        ValueError
            If the supplied ``extension`` has not been registered.
        """
        try:
            return cls._format_extension_map[extension.lstrip(".")]
        except Exception:
            raise ValueError(
                f"Unregistered extension {repr(extension)}. "
                f"Registered extensions are {list(cls._format_extension_map)}"
            )

    @classmethod
    def get_format_from_extension(cls, extension: str) -> Type[BaseFormat]:
        return cls._format_registry[cls.get_format_name_from_extension(extension)]

    @classmethod
    def register_format(cls, name: str, fmt: Type[BaseFormat], extensions: Sequence[str]):
        """Register an input format along with its file extensions.

        Parameters
        ----------
        name : str
            The format name.
        fmt : Type[BaseFormat]
            The reader class, a :class:`~plambda.formats.base.BaseFormat` subclass.
        extensions : Sequence[str]
            File name extensions used to infer the format from a path.

        Raises
        ------
        ValueError
            If ``name`` or any of the ``extensions`` is already registered.
        TypeError
            If ``fmt`` is not a :class:`~plambda.formats.base.BaseFormat` subclass.
        """
        if name in cls._format_registry:
            raise ValueError(
                f"A format with name {repr(name)} is already registered. "
                "Please choose a different name."
            )
        try:
            if not issubclass(fmt, BaseFormat):
                raise TypeError()
        except Exception:
            raise TypeError(f"The supplied format {fmt} is not derived from {BaseFormat}")
        extensions = [ext.lstrip(".") for ext in extensions]
        for ext in extensions:
            if ext in cls._format_extension_map:
                raise ValueError(
                    f"Tried to register the extension {repr(ext)} to format {name}, but it "
                    "is already registered in favour of format "
                    f"{repr(cls._format_extension_map[ext])}."
                )
        cls._format_registry[name] = fmt
        cls._format_extension_map.update({ext: name for ext in extensions})

    @classmethod
    def add_format_alias(cls, alias: str, name: str):
        if alias in cls._format_registry:
            raise ValueError(
                f"The alias {repr(alias)} is already registered, please choose a different alias."
            )
        if name not in cls._format_registry:
            raise ValueError(
                f"Unknown format {repr(name)}. Available values are {list(cls._format_registry)}"
            )
        cls._format_registry[alias] = cls._format_registry[name]
        cls._format_aliases[alias] = name


get_format = _format_registry.get_format

get_format_from_extension = _format_registry.get_format_from_extension

get_format_name_from_extension = _format_registry.get_format_name_from_extension

register_format = _format_registry.register_format

add_format_alias = _format_registry.add_format_alias


def get_registered_extensions() -> Dict[str, str]:  # pragma: no cover
    return _format_registry._format_extension_map.copy()


def get_known_formats() -> List[str]:
    return list(_format_registry._format_registry)


def infer_format(path: PathType) -> str:
    """Name of the format registered for the extension of ``path``.

    Raises
    ------
    ValueError
        If the extension is missing or unregistered.
    """
    path = input_path(path)
    extension = path.suffix
    if not extension:
        raise ValueError(
            f"Cannot infer the format of {str(path)!r}: it has no extension"
        )
    return get_format_name_from_extension(extension)


def load(path: PathType, fmt: str = "infer", env: Optional[NamedEnv] = None) -> Any:
    """Read a file in a registered format.

    Parameters
    ----------
    path : PathType
        The file to read.
    fmt : str
        A registered format name, or ``"infer"`` to pick it from the extension
        of ``path``.
    env : Optional[NamedEnv]
        Definitions used to resolve names in term-bearing formats.
    """
    if fmt == "infer":
        fmt = infer_format(path)
    return get_format(fmt)().load(path, env)


def loads(text: str, fmt: str, env: Optional[NamedEnv] = None) -> Any:
    return get_format(fmt)().loads(text, env)
