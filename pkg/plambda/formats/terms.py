"""Readers for the term-bearing formats: definitions, argument sets and stacks."""
from typing import List, Optional

from ..syntax.contexts import FrameStack
from ..syntax.env import NamedEnv
from ..syntax.parser import parse_definitions, parse_term
from ..syntax.terms import Term
from .base import BaseFormat
from .registry import register_format

__all__ = ["DefinitionsFormat", "ArgumentsFormat", "StacksFormat", "NIL"]

NIL = "nil"


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


class DefinitionsFormat(BaseFormat):
    """Lines ``name = term``; later definitions may use earlier ones."""

    name = "definitions"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> NamedEnv:
        return parse_definitions(text, env)


class ArgumentsFormat(BaseFormat):
    """One closed term per line."""

    name = "arguments"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> List[Term]:
        terms = []
        for number, line in _lines(text):
            term = parse_term(line, env, line=number)
            terms.append(term)
        return terms


class StacksFormat(BaseFormat):
    """One stack per line, frames separated by ``;`` with the top frame first.

    The empty stack is written ``nil``.
    """

    name = "stacks"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> List[FrameStack]:
        stacks = []
        for number, line in _lines(text):
            if line == NIL:
                stacks.append(FrameStack.of(()))
                continue
            frames = [parse_term(chunk, env, line=number) for chunk in line.split(";")]
            stacks.append(FrameStack.of(frames))
        return stacks


register_format("definitions", DefinitionsFormat, ["lop", "defs"])
register_format("arguments", ArgumentsFormat, ["args"])
register_format("stacks", StacksFormat, ["stk"])
