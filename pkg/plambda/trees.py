"""Lazy head reduction of pure terms, Levy-Longo trees and their approximant game.

Solvability is only semi-decidable, so every procedure here runs under a
reduction budget. Without the divergence detector a term that does not reach a
head normal form within budget is reported as unknown; with it, a head redex
that comes back unchanged is certified divergent (``⊥``, after the λs peeled so
far) and one that comes back under more λs is certified of infinite order (``⊤``).
"""
import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .syntax.printer import print_term
from .syntax.terms import Abs, App, Term, Var, apply_all, fresh_name, is_pure, spine, substitute

__all__ = [
    "Hnf",
    "AbstractionChain",
    "Exhausted",
    "Diverges",
    "HeadForm",
    "Bottom",
    "Top",
    "Head",
    "Unknown",
    "LevyLongoTree",
    "SameUpTo",
    "Different",
    "Inconclusive",
    "head_reduce",
    "split_head_form",
    "llt",
    "render_tree",
    "llt_eq",
]

_logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 200


@dataclass(frozen=True)
class Hnf:
    binders: Tuple[str, ...]
    head: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class AbstractionChain:
    binders: Tuple[str, ...]
    residual: Term


@dataclass(frozen=True)
class Exhausted:
    residual: Term


@dataclass(frozen=True)
class Diverges:
    binders: Tuple[str, ...]
    infinite: bool


HeadForm = Union[Hnf, AbstractionChain, Exhausted, Diverges]


def head_reduce(m: Term, budget: int = DEFAULT_BUDGET, detect: bool = False) -> HeadForm:
    """Reduce the head redex of ``m`` at most ``budget`` times, peeling λs on the way.

    Peeled binders that clash with earlier binders or free variables are renamed.

    Raises
    ------
    ValueError
        If ``m`` contains a probabilistic choice.
    """
    if not is_pure(m):
        raise ValueError(f"Head reduction needs a pure term, got {print_term(m)}")
    binders: List[str] = []
    taken = set(m.free_vars)
    seen: Dict[Hashable, int] = {}
    term = m
    steps = 0
    while True:
        while isinstance(term, Abs):
            binder = term.binder
            body = term.body
            if binder in taken:
                renamed = fresh_name(binder, taken | body.free_vars)
                body = substitute(body, binder, Var(renamed))
                binder = renamed
            taken.add(binder)
            binders.append(binder)
            term = body
        head, args = spine(term)
        if isinstance(head, Var):
            return Hnf(tuple(binders), head.name, args)
        if detect:
            previous = seen.get(term.key)
            if previous is not None:
                return Diverges(tuple(binders), infinite=len(binders) > previous)
            seen[term.key] = len(binders)
        if steps >= budget:
            if binders:
                return AbstractionChain(tuple(binders), term)
            return Exhausted(term)
        steps += 1
        redex = head  # an abstraction applied to args[0]
        term = apply_all(substitute(redex.body, redex.binder, args[0]), args[1:])  # type: ignore


@dataclass(frozen=True)
class Bottom:
    binders: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Head:
    binders: Tuple[str, ...]
    head: str
    children: Tuple["LevyLongoTree", ...]


@dataclass(frozen=True)
class Unknown:
    note: str = ""


LevyLongoTree = Union[Bottom, Top, Head, Unknown]


def llt(m: Term, depth: int, budget: int = DEFAULT_BUDGET, detect: bool = True) -> LevyLongoTree:
    """The Levy-Longo tree of ``m``, truncated at ``depth`` nodes from the root.

    Nodes below the truncation depth and nodes whose head reduction exhausts the
    budget are :class:`Unknown`.
    """
    if depth <= 0:
        return Unknown("depth")
    form = head_reduce(m, budget, detect)
    if isinstance(form, Hnf):
        children = tuple(llt(arg, depth - 1, budget, detect) for arg in form.args)
        return Head(form.binders, form.head, children)
    if isinstance(form, Diverges):
        return Top() if form.infinite else Bottom(form.binders)
    _logger.debug("Budget %d exhausted on %s", budget, print_term(m))
    return Unknown("budget")


def _node_label(tree: LevyLongoTree) -> str:
    if isinstance(tree, Top):
        return "⊤"
    if isinstance(tree, Unknown):
        return "?"
    prefix = "\\" + " ".join(tree.binders) + ". " if tree.binders else ""
    if isinstance(tree, Bottom):
        return prefix + "⊥"
    return prefix + tree.head


def render_tree(tree: LevyLongoTree, indent: int = 0) -> str:
    """One node per line, children indented by two spaces."""
    lines = [" " * indent + _node_label(tree)]
    if isinstance(tree, Head):
        lines.extend(render_tree(child, indent + 2) for child in tree.children)
    return "\n".join(lines)


@dataclass(frozen=True)
class SameUpTo:
    level: int


@dataclass(frozen=True)
class Different:
    """The least level at which the game fails, with the path and clause that failed."""

    level: int
    path: Tuple[str, ...]
    clause: str


@dataclass(frozen=True)
class Inconclusive:
    path: Tuple[str, ...]
    reason: str


ApproxVerdict = Union[SameUpTo, Different, Inconclusive]


def split_head_form(form: HeadForm):
    """Split a head form into its λ prefix and what lies under it."""
    if isinstance(form, Hnf):
        return form.binders, ("head", form.head, form.args)
    if isinstance(form, Diverges):
        return form.binders, ("top",) if form.infinite else ("bottom",)
    if isinstance(form, AbstractionChain):
        return form.binders, ("unknown",)
    return (), ("unknown",)


def _rename(args: Sequence[Term], binders: Sequence[str], common: Sequence[str]) -> Tuple[Term, ...]:
    renamed = []
    for arg in args:
        for old, new in zip(binders, common):
            if old != new:
                arg = substitute(arg, old, Var(new))
        renamed.append(arg)
    return tuple(renamed)


class _Game:
    def __init__(self, budget: int, detect: bool):
        self.budget = budget
        self.detect = detect

    def play(self, m: Term, n: Term, level: int, path: Tuple[str, ...]) -> ApproxVerdict:
        if level <= 0:
            return SameUpTo(0)
        left_binders, left_tail = split_head_form(head_reduce(m, self.budget, self.detect))
        right_binders, right_tail = split_head_form(head_reduce(n, self.budget, self.detect))
        left_infinite = left_tail[0] == "top"
        right_infinite = right_tail[0] == "top"
        if left_infinite and right_infinite:
            return SameUpTo(level)
        if left_infinite or right_infinite:
            binders, tail = (right_binders, right_tail) if left_infinite else (left_binders, left_tail)
            if len(binders) >= level:
                return SameUpTo(level)
            if tail[0] == "unknown":
                return Inconclusive(path, "budget exhausted")
            return Different(len(binders) + 1, path + tuple(f"\\{b}" for b in binders), "abstraction")
        shared = min(len(left_binders), len(right_binders))
        avoid = m.free_vars | n.free_vars | set(left_binders) | set(right_binders)
        common: List[str] = []
        for index in range(shared):
            name = left_binders[index]
            if name != right_binders[index]:
                name = fresh_name(name, avoid | set(common))
            common.append(name)
        if shared >= level:
            return SameUpTo(level)
        path = path + tuple(f"\\{name}" for name in common)
        if len(left_binders) != len(right_binders):
            shorter = left_tail if len(left_binders) < len(right_binders) else right_tail
            if shorter[0] == "unknown":
                return Inconclusive(path, "budget exhausted")
            return Different(shared + 1, path, "abstraction")
        if "unknown" in (left_tail[0], right_tail[0]):
            return Inconclusive(path, "budget exhausted")
        if left_tail[0] == "bottom" and right_tail[0] == "bottom":
            return SameUpTo(level)
        if left_tail[0] != right_tail[0]:
            return Different(shared + 1, path, "head variable")
        left_head = dict(zip(left_binders, common)).get(left_tail[1], left_tail[1])
        right_head = dict(zip(right_binders, common)).get(right_tail[1], right_tail[1])
        if left_head != right_head:
            return Different(shared + 1, path, "head variable")
        if len(left_tail[2]) != len(right_tail[2]):
            return Different(shared + 1, path + (left_head,), "arity")
        left_args = _rename(left_tail[2], left_binders, common)
        right_args = _rename(right_tail[2], right_binders, common)
        found: Optional[Different] = None
        unknown: Optional[Inconclusive] = None
        for index, (left, right) in enumerate(zip(left_args, right_args), start=1):
            verdict = self.play(left, right, level - shared - 1, path + (f"{left_head}#{index}",))
            if isinstance(verdict, Different):
                if found is None or verdict.level < found.level:
                    found = verdict
            elif isinstance(verdict, Inconclusive) and unknown is None:
                unknown = verdict
        if found is not None:
            return Different(found.level + shared + 1, found.path, found.clause)
        if unknown is not None:
            return unknown
        return SameUpTo(level)


def llt_eq(
    m: Term, n: Term, level: int, budget: int = DEFAULT_BUDGET, detect: bool = True
) -> ApproxVerdict:
    """Play the approximant game for ``level`` rounds on two pure terms.

    Each λ clause and each head-variable clause costs one level. Free variables
    are allowed and compared by name.

    Returns
    -------
    Union[SameUpTo, Different, Inconclusive]
        ``Different`` carries the least failing level, the path of binders and
        argument positions leading to the failure, and the failing clause.
    """
    if not (is_pure(m) and is_pure(n)):
        raise ValueError("The approximant game is defined on pure terms")
    return _Game(budget, detect).play(m, n, level, ())
