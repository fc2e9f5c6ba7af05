"""Readers for labelled Markov chains and probability assignments."""
from fractions import Fraction
from typing import Dict, FrozenSet, Optional

from ..flow import ProbabilityAssignment
from ..lmc import MLMC, parse_lmc
from ..syntax.env import NamedEnv
from ..syntax.parser import parse_fraction
from .base import BaseFormat
from .registry import register_format

__all__ = ["LMCFormat", "AssignmentFormat", "parse_assignment"]


class LMCFormat(BaseFormat):
    name = "lmc"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> MLMC:
        return parse_lmc(text)


def parse_assignment(text: str) -> ProbabilityAssignment:
    """Read a probability assignment.

    Lines are ``p i a/b`` for the mass of index ``i`` and ``r i,j,... a/b`` for
    the mass of a nonempty subset. Indices start at 1 and ``n`` is the largest
    index mentioned by a ``p`` line. Missing subsets have mass 0.

    Raises
    ------
    ValueError
        On a malformed line, naming its line number.
    """
    p: Dict[int, Fraction] = {}
    r: Dict[FrozenSet[int], Fraction] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if len(words) != 3 or words[0] not in ("p", "r"):
                raise ValueError(f"unrecognised line {line!r}")
            value = parse_fraction(words[2])
            if words[0] == "p":
                p[int(words[1])] = value
            else:
                subset = frozenset(int(w) for w in words[1].split(","))
                r[subset] = r.get(subset, Fraction(0)) + value
        except ValueError as err:
            raise ValueError(f"line {number}: {err}") from err
    if not p:
        raise ValueError("a probability assignment needs at least one 'p' line")
    n = max(p)
    missing = [i for i in range(1, n + 1) if i not in p]
    if missing:
        raise ValueError(f"missing masses for indices {missing}")
    return ProbabilityAssignment(n, tuple(p[i] for i in range(1, n + 1)), r)


class AssignmentFormat(BaseFormat):
    name = "assignment"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> ProbabilityAssignment:
        return parse_assignment(text)


register_format("lmc", LMCFormat, ["lmc"])
register_format("assignment", AssignmentFormat, ["pa"])
