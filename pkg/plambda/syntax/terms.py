"""Abstract syntax of the probabilistic lambda calculus.

Terms are immutable. Equality of the dataclasses is structural (names matter);
α-equivalence is decided through :attr:`Term.key`, the nameless canonical form.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import AbstractSet, FrozenSet, Hashable, Tuple

__all__ = [
    "Term",
    "Var",
    "Abs",
    "App",
    "Choice",
    "alpha_eq",
    "substitute",
    "fresh_name",
    "is_value",
    "is_closed",
    "is_pure",
    "size",
    "abstract",
    "apply_all",
    "spine",
    "OMEGA",
    "XI",
    "IDENTITY",
    "FIRST",
    "permutator_term",
]


class Term:
    """Base class of the four term constructors."""

    @cached_property
    def key(self) -> Hashable:
        """Nameless canonical form: two terms are α-equivalent iff their keys are equal."""
        return _nameless(self, ())

    @cached_property
    def free_vars(self) -> FrozenSet[str]:
        raise NotImplementedError  # pragma: no cover

    def __str__(self):
        from .printer import print_term

        return print_term(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str

    @cached_property
    def free_vars(self) -> FrozenSet[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=True)
class Abs(Term):
    binder: str
    body: Term

    def __post_init__(self):
        if not self.binder:
            raise ValueError("Binders must be nonempty identifiers")

    @cached_property
    def free_vars(self) -> FrozenSet[str]:
        return self.body.free_vars - {self.binder}


@dataclass(frozen=True, eq=True)
class App(Term):
    fun: Term
    arg: Term

    @cached_property
    def free_vars(self) -> FrozenSet[str]:
        return self.fun.free_vars | self.arg.free_vars


@dataclass(frozen=True, eq=True)
class Choice(Term):
    left: Term
    right: Term

    @cached_property
    def free_vars(self) -> FrozenSet[str]:
        return self.left.free_vars | self.right.free_vars


def _nameless(term: Term, bound: Tuple[str, ...]) -> Hashable:
    if isinstance(term, Var):
        for index in range(len(bound) - 1, -1, -1):
            if bound[index] == term.name:
                return ("b", len(bound) - 1 - index)
        return ("f", term.name)
    if isinstance(term, Abs):
        return ("l", _nameless(term.body, bound + (term.binder,)))
    if isinstance(term, App):
        return ("a", _nameless(term.fun, bound), _nameless(term.arg, bound))
    if isinstance(term, Choice):
        return ("c", _nameless(term.left, bound), _nameless(term.right, bound))
    raise TypeError(f"Not a term: {term!r}")


def alpha_eq(m: Term, n: Term) -> bool:
    """Return ``True`` iff ``m`` and ``n`` are equal up to renaming of bound variables."""
    return m is n or m.key == n.key


def fresh_name(base: str, avoid: AbstractSet[str]) -> str:
    """Return ``base`` with the least numeric suffix that is not in ``avoid``."""
    root = base.rstrip("0123456789") or base
    index = 1
    while f"{root}{index}" in avoid:
        index += 1
    return f"{root}{index}"


def substitute(m: Term, x: str, n: Term) -> Term:
    """Capture-avoiding substitution ``m[n/x]``.

    Parameters
    ----------
    m : Term
        The term in which free occurrences of ``x`` are replaced.
    x : str
        The variable name.
    n : Term
        The substituted term.

    Returns
    -------
    Term
        The result. When ``x`` does not occur free in ``m``, ``m`` itself is
        returned. Binders that would capture a free variable of ``n`` are
        renamed with :func:`fresh_name`.
    """
    if x not in m.free_vars:
        return m
    if isinstance(m, Var):
        return n
    if isinstance(m, App):
        return App(substitute(m.fun, x, n), substitute(m.arg, x, n))
    if isinstance(m, Choice):
        return Choice(substitute(m.left, x, n), substitute(m.right, x, n))
    if isinstance(m, Abs):
        if m.binder in n.free_vars:
            renamed = fresh_name(m.binder, n.free_vars | m.body.free_vars | {x})
            body = substitute(m.body, m.binder, Var(renamed))
            return Abs(renamed, substitute(body, x, n))
        return Abs(m.binder, substitute(m.body, x, n))
    raise TypeError(f"Not a term: {m!r}")


def is_closed(term: Term) -> bool:
    return not term.free_vars


def is_value(term: Term) -> bool:
    """Values are closed abstractions."""
    return isinstance(term, Abs) and not term.free_vars


def is_pure(term: Term) -> bool:
    """Return ``True`` if ``term`` contains no probabilistic choice."""
    stack = [term]
    while stack:
        current = stack.pop()
        if isinstance(current, Choice):
            return False
        if isinstance(current, Abs):
            stack.append(current.body)
        elif isinstance(current, App):
            stack.extend((current.fun, current.arg))
    return True


def size(term: Term) -> int:
    if isinstance(term, Var):
        return 1
    if isinstance(term, Abs):
        return 1 + size(term.body)
    if isinstance(term, App):
        return 1 + size(term.fun) + size(term.arg)
    return 1 + size(term.left) + size(term.right)  # type: ignore


def abstract(binders, body: Term) -> Term:
    for binder in reversed(tuple(binders)):
        body = Abs(binder, body)
    return body


def apply_all(head: Term, args) -> Term:
    for arg in args:
        head = App(head, arg)
    return head


def spine(term: Term) -> Tuple[Term, Tuple[Term, ...]]:
    """Split ``term`` into its head and the arguments applied to it, leftmost first."""
    args = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fun
    return term, tuple(reversed(args))


_DELTA = Abs("x", App(Var("x"), Var("x")))
OMEGA = App(_DELTA, _DELTA)
_XI_HALF = Abs("x", Abs("y", App(Var("x"), Var("x"))))
XI = App(_XI_HALF, _XI_HALF)
IDENTITY = Abs("x", Var("x"))
FIRST = Abs("x", Abs("y", Var("x")))


def permutator_term(n: int, r: int = None) -> Term:
    """Build ``Q_n``, or its ⊕-flavour with ``r`` leading binders when ``r`` is given."""
    names = [f"x{i}" for i in range(1, n + 1)]
    body = apply_all(Var(names[-1]), [Var(name) for name in names[:-1]])
    if r is None:
        return abstract(names, body)
    inner = abstract(names[r:], body)
    return abstract(names[:r], Choice(OMEGA, inner))
