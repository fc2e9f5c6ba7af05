import os
from fractions import Fraction
from pathlib import Path
from typing import Union

PathType = Union[str, bytes, os.PathLike]

__all__ = ["input_path", "format_fraction", "read_text"]


def input_path(path: PathType) -> Path:
    """Normalize the name of an input file (definitions, bounds, corpus cases).

    ``bytes`` names are decoded with the file system encoding.

    Raises
    ------
    TypeError
        If ``path`` does not name a file.
    """
    try:
        return Path(os.fsdecode(os.fspath(path)))
    except TypeError:
        raise TypeError(
            f"Expected the name of an input file, got {type(path).__name__} {path!r}"
        ) from None


def read_text(path: PathType) -> str:
    return input_path(path).read_text(encoding="utf-8")


def format_fraction(value) -> str:
    """Print an exact rational as a reduced ``a/b``, integers included."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"
