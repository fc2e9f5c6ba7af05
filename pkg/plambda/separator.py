"""Böhm-out separation of pure terms that have different Levy-Longo trees.

Given two pure terms that differ in the approximant game, the separator
instantiates their free variables with permutators and builds a list of closed
arguments such that the two applied instances converge with different
probabilities. Every witness is checked by evaluation before it is returned.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .eval import ProbInterval, converge_prob
from .syntax.contexts import count_holes, plug_holes
from .syntax.terms import OMEGA, Term, Var, abstract, apply_all, permutator_term, substitute
from .trees import DEFAULT_BUDGET, Different, head_reduce, llt_eq, split_head_form

__all__ = [
    "Permutator",
    "SeparationWitness",
    "NotSeparatedAtLevel",
    "VerificationTimeout",
    "ContextWitness",
    "bohm_permutator",
    "oplus_permutator",
    "separate",
    "instantiate",
    "verify_witness",
    "context_witness",
    "VERIFICATION_DEPTHS",
]

_logger = logging.getLogger(__name__)

VERIFICATION_DEPTHS = (4, 8, 16, 32, 64)
DEFAULT_LEVEL = 6


def bohm_permutator(n: int) -> Term:
    """``Q_n = λx1 … xn. xn x1 … x(n-1)``."""
    if n < 1:
        raise ValueError(f"Permutator degree must be at least 1, got {n}")
    return permutator_term(n)


def oplus_permutator(n: int, r: int) -> Term:
    """``λx1 … xr. Ω ⊕ (λx(r+1) … xn. xn x1 … x(n-1))`` for ``0 <= r < n``."""
    if n < 1:
        raise ValueError(f"Permutator degree must be at least 1, got {n}")
    if not 0 <= r < n:
        raise ValueError(f"The number of leading binders must be in [0, {n}), got {r}")
    return permutator_term(n, r)


@dataclass(frozen=True)
class Permutator:
    """A permutator of a given degree, Böhm flavoured when ``r`` is ``None``."""

    degree: int
    r: Optional[int] = None

    def term(self) -> Term:
        if self.r is None:
            return bohm_permutator(self.degree)
        return oplus_permutator(self.degree, self.r)

    def __str__(self):
        return f"Q{self.degree}" if self.r is None else f"Q{self.degree}[+{self.r}]"


@dataclass(frozen=True)
class SeparationWitness:
    substitution: Tuple[Tuple[str, Permutator], ...]
    offsets: Tuple[Tuple[str, int], ...]
    k: int
    m: int
    arguments: Tuple[Term, ...]
    probs: Tuple[ProbInterval, ProbInterval]
    depth: int


@dataclass(frozen=True)
class NotSeparatedAtLevel:
    level: int
    reason: str


@dataclass(frozen=True)
class VerificationTimeout:
    """A witness whose intervals still overlapped at the deepest verification depth."""

    witness: SeparationWitness


@dataclass(frozen=True)
class ContextWitness:
    context: Term
    probs: Tuple[ProbInterval, ProbInterval]
    depth: int

    @property
    def separates(self) -> bool:
        return self.probs[0].disjoint(self.probs[1])


SeparationResult = Union[SeparationWitness, NotSeparatedAtLevel, VerificationTimeout]


@dataclass
class _Plan:
    k: int
    arguments: Callable[[int], List[Term]]
    offsets: Dict[str, int] = field(default_factory=dict)
    flavors: Dict[str, Optional[int]] = field(default_factory=dict)

    def permutator(self, name: str, m: int) -> Permutator:
        return Permutator(m + self.offsets.get(name, 1), self.flavors.get(name))

    def fix(self, name: str):
        self.offsets.setdefault(name, 1)
        self.flavors.setdefault(name, None)


def _omegas(count: int) -> List[Term]:
    return [OMEGA] * count


def _selector(arity: int, index: int) -> Term:
    names = [f"x{i}" for i in range(1, arity + 1)]
    return abstract(names, Var(names[index - 1]))


def _rename_tail(tail, old: str, new: str):
    if tail[0] != "head":
        return tail
    head = new if tail[1] == old else tail[1]
    return ("head", head, tuple(substitute(arg, old, Var(new)) for arg in tail[2]))


class _BohmOut:
    def __init__(self, budget: int, used):
        self.budget = budget
        self.used = set(used)

    def view(self, term: Term):
        binders, tail = split_head_form(head_reduce(term, self.budget, True))
        self.used.update(binders)
        return binders, tail

    def fresh(self, name: str) -> str:
        candidate = name
        index = 0
        while candidate in self.used:
            index += 1
            candidate = f"{name}{index}"
        self.used.add(candidate)
        return candidate

    def drop_binder(self, view, name: str):
        binders, tail = view
        if not binders:
            return view
        rest = list(binders[1:])
        return tuple(rest), _rename_tail(tail, binders[0], name)

    def plan(self, left, right, level: int) -> Optional[_Plan]:
        if level <= 0:
            return None
        (left_binders, left_tail), (right_binders, right_tail) = left, right
        left_lambda = bool(left_binders) or left_tail[0] == "top"
        right_lambda = bool(right_binders) or right_tail[0] == "top"
        if left_lambda and right_lambda:
            if not left_binders and not right_binders:
                return None
            base = (left_binders or right_binders)[0]
            name = self.fresh(base.rstrip("0123456789") or base)
            inner = self.plan(
                self.drop_binder(left, name), self.drop_binder(right, name), level - 1
            )
            if inner is None:
                return None
            inner.fix(name)
            permutator = inner.permutator
            rest = inner.arguments
            inner.arguments = lambda m: [permutator(name, m).term()] + rest(m)
            return inner
        if left_lambda or right_lambda:
            other = right_tail if left_lambda else left_tail
            if other[0] == "head":
                return _Plan(
                    len(other[2]), lambda m: [], offsets={other[1]: 1}, flavors={other[1]: 0}
                )
            if other[0] == "bottom":
                return _Plan(0, lambda m: [])
            return None
        if "unknown" in (left_tail[0], right_tail[0]):
            return None
        if left_tail[0] == "bottom" and right_tail[0] == "bottom":
            return None
        if left_tail[0] == "bottom" or right_tail[0] == "bottom":
            other = right_tail if left_tail[0] == "bottom" else left_tail
            return _Plan(len(other[2]), lambda m: [])
        (_, x, left_args), (_, y, right_args) = left_tail, right_tail
        t, s = len(left_args), len(right_args)
        if x == y and t != s:
            return _Plan(0, _omegas, offsets={x: max(t, s)}, flavors={x: None})
        if x != y:
            if t > s:
                (x, t), (y, s) = (y, s), (x, t)
            return _Plan(0, _omegas, offsets={x: s + 1, y: s}, flavors={x: None, y: None})
        for index, (left_arg, right_arg) in enumerate(zip(left_args, right_args), start=1):
            inner = self.plan(self.view(left_arg), self.view(right_arg), level - 1)
            if inner is None:
                continue
            inner.fix(x)
            inner.k = max(inner.k, s + 1)
            offset = inner.offsets[x]
            rest = inner.arguments
            inner.arguments = lambda m, i=index, o=offset, r=rest: (
                _omegas(m + o - s - 1) + [_selector(m + o - 1, i)] + r(m)
            )
            return inner
        return None


def instantiate(term: Term, substitution: Sequence[Tuple[str, Permutator]], arguments: Sequence[Term]) -> Term:
    """Substitute permutators for free variables and apply the result to ``arguments``."""
    for name, permutator in substitution:
        term = substitute(term, name, permutator.term())
    return apply_all(term, arguments)


def _evaluate(left: Term, right: Term, depths: Sequence[int]):
    probs = None
    depth = 0
    for depth in depths:
        probs = (
            converge_prob(left, depth, detect_divergence=True),
            converge_prob(right, depth, detect_divergence=True),
        )
        _logger.debug("Verification at depth %d: %s vs %s", depth, *probs)
        if probs[0].disjoint(probs[1]):
            break
    return probs, depth


def separate(
    m: Term, n: Term, max_level: int = DEFAULT_LEVEL, budget: int = DEFAULT_BUDGET
) -> SeparationResult:
    """Build and verify a Böhm-out witness separating ``m`` and ``n``.

    Parameters
    ----------
    m, n: Term
        Pure terms, possibly open.
    max_level: int
        Largest approximant level at which a difference is searched.
    budget: int
        Head reduction budget per node.

    Returns
    -------
    Union[SeparationWitness, NotSeparatedAtLevel, VerificationTimeout]
        A verified witness; ``NotSeparatedAtLevel`` when the terms agree up to
        ``max_level`` (or the difference could not be reached within budget);
        ``VerificationTimeout`` when evaluation never made the intervals disjoint.
    """
    verdict = llt_eq(m, n, max_level, budget)
    if not isinstance(verdict, Different):
        reason = "inconclusive" if hasattr(verdict, "reason") else "no difference"
        return NotSeparatedAtLevel(max_level, reason)
    free = sorted(m.free_vars | n.free_vars)
    search = _BohmOut(budget, free)
    plan = search.plan(search.view(m), search.view(n), verdict.level)
    if plan is None:
        return NotSeparatedAtLevel(verdict.level, "budget exhausted on the differing branch")
    size = plan.k + 1
    substitution = tuple((name, plan.permutator(name, size)) for name in free)
    arguments = tuple(plan.arguments(size))
    offsets = tuple((name, plan.offsets.get(name, 1)) for name in free)
    probs, depth = _evaluate(
        instantiate(m, substitution, arguments),
        instantiate(n, substitution, arguments),
        VERIFICATION_DEPTHS,
    )
    witness = SeparationWitness(substitution, offsets, plan.k, size, arguments, probs, depth)
    if not probs[0].disjoint(probs[1]):
        _logger.warning("Witness not verified up to depth %d", VERIFICATION_DEPTHS[-1])
        return VerificationTimeout(witness)
    return witness


def verify_witness(m: Term, n: Term, w: SeparationWitness, depth: Optional[int] = None) -> bool:
    """Close both terms with ``w`` and check that their convergence intervals are disjoint."""
    depths = VERIFICATION_DEPTHS if depth is None else (depth,)
    probs, _ = _evaluate(
        instantiate(m, w.substitution, w.arguments),
        instantiate(n, w.substitution, w.arguments),
        depths,
    )
    return probs[0].disjoint(probs[1])


def context_witness(m: Term, n: Term, context: Term, depth: Optional[int] = None) -> ContextWitness:
    """Evaluate a user-supplied context (a term with ``_`` holes) around ``m`` and ``n``."""
    holes = count_holes(context)
    if holes == 0:
        raise ValueError("The context has no hole")
    left = plug_holes(context, [m] * holes)
    right = plug_holes(context, [n] * holes)
    if left.free_vars or right.free_vars:
        raise ValueError("The plugged context must be closed")
    probs, used = _evaluate(left, right, VERIFICATION_DEPTHS if depth is None else (depth,))
    return ContextWitness(context, probs, used)
