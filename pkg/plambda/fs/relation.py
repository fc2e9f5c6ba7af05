"""Coupled relations, their concrete syntax and the finite context closure of ``R1``.

Relation files have up to four sections::

    [DEFS]
    L = \\z. OMEGA
    [V]
    M | N
    [E]
    M | N
    {1: M} | {1/2: \\x. L, 1/2: \\x. P}
    [CTX]
    _ (\\x. x)

Contexts are terms in which ``_`` marks the holes.
"""
import itertools
from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence, Set, Tuple

from ..syntax.contexts import count_holes, plug_holes
from ..syntax.env import NamedEnv
from ..syntax.parser import HOLE, ParseError, TermParser, parse_definitions, tokenize
from ..syntax.printer import print_term
from ..syntax.terms import Abs, App, Choice, Term, Var
from .sums import ExtApp, ExtTerm, FormalSum, ext_key, print_ext

__all__ = [
    "ExtTermParser",
    "parse_ext_term",
    "parse_pair",
    "CoupledRelation",
    "parse_relation",
    "ContextClosure",
    "AUTOMATIC_CONTEXTS",
]

Pair = Tuple[ExtTerm, ExtTerm]

AUTOMATIC_CONTEXTS = (
    App(Var(HOLE), Var(HOLE)),
    Choice(Var(HOLE), Var(HOLE)),
    Abs("x", Var(HOLE)),
)


class ExtTermParser(TermParser):
    """Adds formal sums ``{p: M, q: N}`` in head position to the term grammar."""

    def ext_term(self) -> ExtTerm:
        if self.current.kind != "{":
            return self.term()
        result: ExtTerm = self.formal_sum()
        while self.current.kind in ("ident", "(", "lam"):
            if self.current.kind == "lam":
                result = ExtApp(result, self.abstraction(frozenset()))
            else:
                result = ExtApp(result, self.atom(frozenset()))
        return result

    def formal_sum(self) -> FormalSum:
        self.expect("{")
        components = []
        if self.current.kind != "}":
            while True:
                weight = self.fraction()
                self.expect(":")
                components.append((self.term(), weight))
                if self.current.kind != ",":
                    break
                self.advance()
        self.expect("}")
        try:
            return FormalSum(components)
        except ValueError as err:
            raise self.error(str(err))


def parse_ext_term(text: str, env: Optional[NamedEnv] = None, line: int = 1) -> ExtTerm:
    parser = ExtTermParser(tokenize(text, line), env)
    result = parser.ext_term()
    parser.finish()
    return result


def parse_pair(text: str, env: Optional[NamedEnv] = None, line: int = 1) -> Pair:
    """Parse a relation line ``lhs | rhs``."""
    parser = ExtTermParser(tokenize(text, line), env)
    left = parser.ext_term()
    parser.expect("|")
    right = parser.ext_term()
    parser.finish()
    return left, right


@dataclass
class CoupledRelation:
    """A pair ``(V, E)`` of relations with ``V ⊆ E``, and contexts approximating ``V*``.

    Raises
    ------
    ValueError
        If a pair of ``V`` is missing from ``E``, or a term or context is open.
    """

    v: List[Tuple[Term, Term]] = field(default_factory=list)
    e: List[Pair] = field(default_factory=list)
    ctx_basis: List[Term] = field(default_factory=list)

    def __post_init__(self):
        keys = self.e_keys()
        for left, right in self.v:
            if not isinstance(left, Term) or not isinstance(right, Term):
                raise ValueError("Pairs of V must be ordinary terms")
            if (ext_key(left), ext_key(right)) not in keys:
                raise ValueError(
                    f"Pair ({print_term(left)}, {print_term(right)}) of V is not in E"
                )
        for left, right in self.e:
            for side in (left, right):
                if _is_open(side):
                    raise ValueError(f"Pair member {print_ext(side)} is not closed")
        for context in self.ctx_basis:
            if context.free_vars - {"_"}:
                raise ValueError(f"Context {print_term(context)} has free variables")

    def e_keys(self) -> Set[Tuple[Hashable, Hashable]]:
        return {(ext_key(left), ext_key(right)) for left, right in self.e}

    def inverse(self) -> "CoupledRelation":
        return CoupledRelation(
            [(r, l) for l, r in self.v], [(r, l) for l, r in self.e], list(self.ctx_basis)
        )

    def closure(self) -> "ContextClosure":
        return ContextClosure(self.v, self.ctx_basis)


def _is_open(e: ExtTerm) -> bool:
    if isinstance(e, FormalSum):
        return any(t.free_vars for t, _ in e.components)
    if isinstance(e, ExtApp):
        return _is_open(e.fun) or bool(e.arg.free_vars)
    return bool(e.free_vars)


class ContextClosure:
    """A finite part of ``V*``: ``V``, the depth-one contexts ``_ _``, ``_ (+) _`` and
    ``\\x. _`` filled from ``V``, and every basis context filled from ``V``.

    Membership is wider than enumeration: it also accepts identical terms, and
    applications or choices whose two sides are related pairwise.
    """

    def __init__(self, v: Sequence[Tuple[Term, Term]], ctx_basis: Sequence[Term] = ()):
        pairs: List[Tuple[Term, Term]] = list(v)
        for context in AUTOMATIC_CONTEXTS + tuple(ctx_basis):
            holes = count_holes(context)
            for fillers in itertools.product(v, repeat=holes):
                pairs.append(
                    (
                        plug_holes(context, [left for left, _ in fillers]),
                        plug_holes(context, [right for _, right in fillers]),
                    )
                )
        unique = {}
        for left, right in pairs:
            unique.setdefault((left.key, right.key), (left, right))
        self._pairs = list(unique.values())
        self._keys = set(unique)

    def pairs(self) -> List[Tuple[Term, Term]]:
        return list(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def _base(self, a: Term, b: Term) -> bool:
        return a.key == b.key or (a.key, b.key) in self._keys

    def __contains__(self, pair) -> bool:
        a, b = pair
        if self._base(a, b):
            return True
        if isinstance(a, App) and isinstance(b, App):
            return self._base(a.fun, b.fun) and self._base(a.arg, b.arg)
        if isinstance(a, Choice) and isinstance(b, Choice):
            return self._base(a.left, b.left) and self._base(a.right, b.right)
        return False


def parse_relation(text: str, env: Optional[NamedEnv] = None) -> CoupledRelation:
    """Parse a relation file with sections ``[DEFS]``, ``[V]``, ``[E]`` and ``[CTX]``.

    Raises
    ------
    ParseError
        On malformed lines, with their line numbers.
    ValueError
        If the parsed relation is not a coupled relation.
    """
    section = None
    sections = {"DEFS": [], "V": [], "E": [], "CTX": []}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().upper()
            if section not in sections:
                raise ParseError(f"Unknown section [{section}]", number, 1)
            continue
        if section is None:
            raise ParseError("Expected a section header such as [E]", number, 1)
        sections[section].append((number, line))
    env = parse_definitions("\n".join(_numbered(sections["DEFS"])), env)
    v = []
    for number, line in sections["V"]:
        left, right = parse_pair(line, env, number)
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise ParseError("Pairs of [V] must be ordinary terms", number, 1)
        v.append((left, right))
    e = [parse_pair(line, env, number) for number, line in sections["E"]]
    contexts = []
    for number, line in sections["CTX"]:
        parser = TermParser(tokenize(line, number), env, allow_holes=True)
        context = parser.term()
        parser.finish()
        contexts.append(context)
    return CoupledRelation(v, e, contexts)


def _numbered(lines):
    """Lay out definition lines at their original line numbers."""
    result: List[str] = []
    for number, line in lines:
        result.extend([""] * (number - 1 - len(result)))
        result.append(line)
    return result
