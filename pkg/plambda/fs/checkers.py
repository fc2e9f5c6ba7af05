"""The four checking modes for coupled logical bisimulations.

``smallstep`` plays the step and value clauses, ``bigstep`` jumps to summed
values, ``upto_fs`` additionally admits the split, λ and β clauses on ordinary
terms, and ``upto_ctx`` plays the big-step game with ``E`` enlarged by the
coupling closure of ``V*``.
"""
import logging
from fractions import Fraction

from ..flow import transport_value
from ..syntax.terms import Abs, Term, apply_all, spine, substitute
from .base import OK, UNRESOLVED, BaseCLBChecker, CLBVerdict, Fail, Outcome, RelationView
from .reduction import DEFAULT_SEM_DEPTH, DEFAULT_STEPS
from .registry import add_checker_alias, get_checker, register_checker
from .relation import CoupledRelation
from .sums import ExtTerm, dist_extract

__all__ = [
    "SmallStepChecker",
    "BigStepChecker",
    "UpToFormalSumsChecker",
    "UpToContextsChecker",
    "CouplingView",
    "check_clb",
]

_logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class SmallStepChecker(BaseCLBChecker):
    name = "smallstep"

    def check_pair(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        return self.smallstep_clauses(view, e, f)


class BigStepChecker(BaseCLBChecker):
    name = "bigstep"

    def check_pair(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        return self.bigstep_clauses(view, e, f)


class UpToFormalSumsChecker(BaseCLBChecker):
    """Small-step clauses, or on ordinary terms one of the split, λ and β clauses."""

    name = "upto_fs"

    def check_pair(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        outcome = self.smallstep_clauses(view, e, f)
        if outcome == OK or not (isinstance(e, Term) and isinstance(f, Term)):
            return outcome
        alternatives = [self.split_clause(view, e, f), self.lambda_clause(view, e, f), self.beta_clause(view, e, f)]
        if OK in alternatives:
            return OK
        if outcome == UNRESOLVED or UNRESOLVED in alternatives:
            return UNRESOLVED
        return outcome

    def split_clause(self, view: RelationView, e: Term, f: Term) -> str:
        left = _halves(self.successor(e))
        right = _halves(self.successor(f))
        if left is None or right is None:
            return "n/a"
        (m, n), (l, p) = left, right
        if view.related(m, l) and view.related(n, p):
            return OK
        return "n/a"

    def lambda_clause(self, view: RelationView, e: Term, f: Term) -> str:
        if not (isinstance(e, Abs) and isinstance(f, Abs)):
            return "n/a"
        for p, q in view.arguments:
            if not view.related(substitute(e.body, e.binder, p), substitute(f.body, f.binder, q)):
                return "n/a"
        return OK

    def beta_clause(self, view: RelationView, e: Term, f: Term) -> str:
        left, right = _head_reduct(e), _head_reduct(f)
        if left is None or right is None:
            return "n/a"
        return OK if view.related(left, right) else "n/a"


def _halves(d: ExtTerm):
    components = dist_extract(d).components
    if len(components) == 2 and all(weight == HALF for _, weight in components):
        return components[0][0], components[1][0]
    return None


def _head_reduct(m: Term):
    head, args = spine(m)
    if not isinstance(head, Abs) or not args:
        return None
    return apply_all(substitute(head.body, head.binder, args[0]), args[1:])


class CouplingView(RelationView):
    """Membership in ``E`` or in the lifting of ``V*`` to formal sums.

    Two extended terms are related by the lifting when their extracted sums have
    equal mass and a coupling of their components exists along ``V*``.
    """

    def related(self, a: ExtTerm, b: ExtTerm) -> bool:
        if super().related(a, b):
            return True
        left, right = dist_extract(a), dist_extract(b)
        if left.mass != right.mass:
            return False
        supply = {index: weight for index, (_, weight) in enumerate(left.components)}
        demand = {index: weight for index, (_, weight) in enumerate(right.components)}

        def coupled(i, j) -> bool:
            return (left.components[i][0], right.components[j][0]) in self.closure

        return transport_value(supply, demand, coupled) == left.mass


class UpToContextsChecker(BaseCLBChecker):
    name = "upto_ctx"

    def view(self, relation: CoupledRelation) -> RelationView:
        return CouplingView(relation, relation.closure(), relation.e_keys())

    def check_pair(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        return self.bigstep_clauses(view, e, f)


register_checker("smallstep", SmallStepChecker)
register_checker("bigstep", BigStepChecker)
register_checker("upto_fs", UpToFormalSumsChecker)
register_checker("upto_ctx", UpToContextsChecker)
add_checker_alias("big", "bigstep")


def check_clb(
    r: CoupledRelation,
    mode: str = "smallstep",
    steps: int = DEFAULT_STEPS,
    sem_depth: int = DEFAULT_SEM_DEPTH,
) -> CLBVerdict:
    """Check a candidate coupled logical bisimulation.

    Parameters
    ----------
    r : CoupledRelation
        The candidate. Arguments of the value clause range over the finite part
        of ``V*`` computed by :class:`~plambda.fs.relation.ContextClosure`.
    mode : str
        A registered checking mode: ``"smallstep"``, ``"bigstep"``, ``"upto_fs"``
        or ``"upto_ctx"``.
    steps : int
        Reduction steps allowed to answer a move of the other side.
    sem_depth : int
        Depth of the bounded semantics used by rule ``spc``.

    Returns
    -------
    Union[Pass, Fail]
        ``Pass`` if no clause was refuted at these bounds. ``Fail`` names the pair,
        the clause and a witness.
    """
    checker = get_checker(mode)(steps, sem_depth)
    verdict = checker.check(r)
    _logger.debug("Mode %s on %d pairs of E: %s", mode, len(r.e), type(verdict).__name__)
    return verdict
