"""Single-hole contexts, multi-hole contexts and frame stacks."""
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

from .parser import HOLE
from .terms import Abs, App, Choice, Term, Var

__all__ = [
    "Context",
    "Hole",
    "CtxAbs",
    "CtxAppLeft",
    "CtxAppRight",
    "CtxChoiceLeft",
    "CtxChoiceRight",
    "plug_context",
    "context_from_term",
    "count_holes",
    "plug_holes",
    "FrameStack",
    "plug_stack",
]


class Context:
    pass


@dataclass(frozen=True)
class Hole(Context):
    pass


@dataclass(frozen=True)
class CtxAbs(Context):
    binder: str
    body: Context


@dataclass(frozen=True)
class CtxAppLeft(Context):
    fun: Context
    arg: Term


@dataclass(frozen=True)
class CtxAppRight(Context):
    fun: Term
    arg: Context


@dataclass(frozen=True)
class CtxChoiceLeft(Context):
    left: Context
    right: Term


@dataclass(frozen=True)
class CtxChoiceRight(Context):
    left: Term
    right: Context


def plug_context(c: Context, m: Term) -> Term:
    """Fill the hole of ``c`` with ``m``. Binders of ``c`` may capture free variables of ``m``."""
    if isinstance(c, Hole):
        return m
    if isinstance(c, CtxAbs):
        return Abs(c.binder, plug_context(c.body, m))
    if isinstance(c, CtxAppLeft):
        return App(plug_context(c.fun, m), c.arg)
    if isinstance(c, CtxAppRight):
        return App(c.fun, plug_context(c.arg, m))
    if isinstance(c, CtxChoiceLeft):
        return Choice(plug_context(c.left, m), c.right)
    if isinstance(c, CtxChoiceRight):
        return Choice(c.left, plug_context(c.right, m))
    raise TypeError(f"Not a context: {c!r}")


def count_holes(term: Term) -> int:
    """Number of occurrences of the hole marker ``_`` in ``term``."""
    if isinstance(term, Var):
        return int(term.name == HOLE)
    if isinstance(term, Abs):
        return count_holes(term.body)
    if isinstance(term, App):
        return count_holes(term.fun) + count_holes(term.arg)
    return count_holes(term.left) + count_holes(term.right)  # type: ignore


def context_from_term(term: Term) -> Context:
    """Convert a term with exactly one ``_`` into a :class:`Context`."""
    holes = count_holes(term)
    if holes != 1:
        raise ValueError(f"A context must contain exactly one hole, found {holes}")
    return _to_context(term)


def _to_context(term: Term) -> Context:
    if isinstance(term, Var):
        return Hole()
    if isinstance(term, Abs):
        return CtxAbs(term.binder, _to_context(term.body))
    if isinstance(term, App):
        if count_holes(term.fun):
            return CtxAppLeft(_to_context(term.fun), term.arg)
        return CtxAppRight(term.fun, _to_context(term.arg))
    if count_holes(term.left):  # type: ignore
        return CtxChoiceLeft(_to_context(term.left), term.right)  # type: ignore
    return CtxChoiceRight(term.left, _to_context(term.right))  # type: ignore


def plug_holes(term: Term, fillers: Sequence[Term]) -> Term:
    """Fill the holes of a multi-hole context left to right, without renaming."""
    filled, rest = _plug(term, iter(fillers))
    if next(rest, None) is not None:
        raise ValueError("More fillers than holes")
    return filled


def _plug(term: Term, fillers: Iterator[Term]) -> Tuple[Term, Iterator[Term]]:
    if isinstance(term, Var):
        if term.name != HOLE:
            return term, fillers
        try:
            return next(fillers), fillers
        except StopIteration:
            raise ValueError("Fewer fillers than holes")
    if isinstance(term, Abs):
        body, fillers = _plug(term.body, fillers)
        return Abs(term.binder, body), fillers
    if isinstance(term, App):
        fun, fillers = _plug(term.fun, fillers)
        arg, fillers = _plug(term.arg, fillers)
        return App(fun, arg), fillers
    left, fillers = _plug(term.left, fillers)  # type: ignore
    right, fillers = _plug(term.right, fillers)  # type: ignore
    return Choice(left, right), fillers


@dataclass(frozen=True)
class FrameStack:
    """A stack of pending arguments; ``frames[0]`` is the top."""

    frames: Tuple[Term, ...] = ()

    @classmethod
    def of(cls, frames: Iterable[Term]) -> "FrameStack":
        return cls(tuple(frames))

    def push(self, term: Term) -> "FrameStack":
        return FrameStack((term,) + self.frames)

    def pop(self) -> Tuple[Term, "FrameStack"]:
        return self.frames[0], FrameStack(self.frames[1:])

    @property
    def is_nil(self) -> bool:
        return not self.frames

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)


def plug_stack(s: FrameStack, m: Term) -> Term:
    """``nil[M] = M`` and ``(N::S)[M] = S[M N]``."""
    for frame in s.frames:
        m = App(m, frame)
    return m
