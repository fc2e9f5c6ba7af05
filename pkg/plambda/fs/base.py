import logging
from abc import abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Tuple, Union

from ..syntax.terms import Term
from .reduction import DEFAULT_SEM_DEPTH, DEFAULT_STEPS, _Stepper
from .relation import ContextClosure, CoupledRelation
from .sums import ExtTerm, FormalSum, dist_extract, ext_key, fs_apply, is_summed_value, print_ext

__all__ = ["BaseCLBChecker", "Pass", "Fail", "CLBVerdict", "RelationView", "OK", "UNRESOLVED"]

_logger = logging.getLogger(__name__)

OK = "ok"
UNRESOLVED = "unresolved"

Pair = Tuple[ExtTerm, ExtTerm]


@dataclass(frozen=True)
class Pass:
    """No clause was refuted at the given bounds.

    ``unresolved`` lists the pairs for which a clause could neither be confirmed
    nor refuted because a reduction ran out of steps or masses only overlapped.
    """

    pairs_checked: int
    unresolved: Tuple[Pair, ...] = ()

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Fail:
    """A pair of ``E`` that violates ``clause``.

    ``exact`` is ``False`` when the refutation relies on bounded semantics that
    left residual mass somewhere along the way.
    """

    pair: Pair
    clause: str
    witness: str
    exact: bool = True
    direction: str = "forward"

    def __bool__(self):
        return False


CLBVerdict = Union[Pass, Fail]
Outcome = Union[str, Fail]


@dataclass
class RelationView:
    """One direction of a coupled relation, prepared for membership queries."""

    relation: CoupledRelation
    closure: ContextClosure
    keys: set = field(default_factory=set)

    @classmethod
    def of(cls, relation: CoupledRelation) -> "RelationView":
        return cls(relation, relation.closure(), relation.e_keys())

    @property
    def arguments(self) -> List[Tuple[Term, Term]]:
        return self.closure.pairs()

    def related(self, a: ExtTerm, b: ExtTerm) -> bool:
        return (ext_key(a), ext_key(b)) in self.keys


def _residual(e: ExtTerm) -> Fraction:
    return dist_extract(e).residual


class BaseCLBChecker:
    """Coupled logical bisimulation checker abstract base class.

    A checker plays the clauses of its definition on every pair of ``E``, then on
    every pair of the converse relation.

    Parameters
    ----------
    steps: int
        Maximum number of reduction steps used to answer ``F ⇝* G``.
    sem_depth: int
        Depth of the bounded semantics used by rule ``spc``.
    """

    name = ""

    def __init__(self, steps: int = DEFAULT_STEPS, sem_depth: int = DEFAULT_SEM_DEPTH):
        if steps < 1 or sem_depth < 1:
            raise ValueError("steps and sem_depth must be positive")
        self.steps = steps
        self.sem_depth = sem_depth
        self._stepper = _Stepper(sem_depth)
        self._sequences: Dict[Hashable, List[ExtTerm]] = {}

    def view(self, relation: CoupledRelation) -> RelationView:
        return RelationView.of(relation)

    @abstractmethod
    def check_pair(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:  # pragma: no cover
        """Play the clauses of the definition on ``(e, f)``.

        Returns
        -------
        Union[str, Fail]
            :data:`OK`, :data:`UNRESOLVED` or the refutation.
        """
        pass

    def check(self, relation: CoupledRelation) -> CLBVerdict:
        checked = 0
        unresolved: List[Pair] = []
        seen = set()
        for direction, oriented in (("forward", relation), ("converse", relation.inverse())):
            view = self.view(oriented)
            for e, f in oriented.e:
                outcome = self.check_pair(view, e, f)
                checked += 1
                if isinstance(outcome, Fail):
                    _logger.debug("Pair %s | %s fails clause %s", print_ext(e), print_ext(f), outcome.clause)
                    if direction == "converse":
                        return Fail((f, e), outcome.clause, outcome.witness, outcome.exact, direction)
                    return outcome
                if outcome == UNRESOLVED:
                    pair = (e, f) if direction == "forward" else (f, e)
                    key = (ext_key(pair[0]), ext_key(pair[1]))
                    if key not in seen:
                        seen.add(key)
                        unresolved.append(pair)
        return Pass(checked, tuple(unresolved))

    def sequence(self, e: ExtTerm) -> List[ExtTerm]:
        """``e`` and its successors up to a summed value or the step bound."""
        key = ext_key(e)
        if key not in self._sequences:
            sequence = [e]
            while len(sequence) <= self.steps and not is_summed_value(sequence[-1]):
                sequence.append(self._stepper.step(sequence[-1]))
            self._sequences[key] = sequence
        return self._sequences[key]

    def successor(self, e: ExtTerm) -> ExtTerm:
        return self.sequence(e)[1]

    def step_clause(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        """``E ⇝ D`` must be answered by ``F ⇝* G`` with ``D`` related to ``G``."""
        d = self.successor(e)
        sequence = self.sequence(f)
        if any(view.related(d, g) for g in sequence):
            return OK
        if not is_summed_value(sequence[-1]):
            return UNRESOLVED
        exact = _residual(d) == 0 and all(_residual(g) == 0 for g in sequence)
        return Fail(
            (e, f),
            "step",
            f"{print_ext(e)} ⇝ {print_ext(d)} is not matched by any reduct of {print_ext(f)}",
            exact,
        )

    def value_clause(self, view: RelationView, z: FormalSum, f: ExtTerm) -> Outcome:
        """``F ⇝* Y`` with the mass of ``Y`` equal to that of ``z``, then every argument pair."""
        y = self.sequence(f)[-1]
        if not is_summed_value(y):
            return UNRESOLVED
        outcome = OK
        z_low, z_high = z.mass, z.mass + z.residual
        y_low, y_high = y.mass, y.mass + y.residual  # type: ignore
        if z_high < y_low or y_high < z_low:
            return Fail(
                (z, f),
                "value-mass",
                f"mass of {print_ext(z)} is {z.mass}, mass of {print_ext(y)} is {y.mass}",  # type: ignore
                z.residual == 0 and y.residual == 0,  # type: ignore
            )
        if z_low != y_low:
            outcome = UNRESOLVED
        for a, b in view.arguments:
            left, right = fs_apply(z, a), fs_apply(y, b)  # type: ignore
            if not view.related(left, right):
                return Fail(
                    (z, f),
                    "value-argument",
                    f"{print_ext(left)} and {print_ext(right)} are not related",
                    z.residual == 0 and y.residual == 0,  # type: ignore
                )
        return outcome

    def smallstep_clauses(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        if is_summed_value(e):
            outcome = self.value_clause(view, e, f)  # type: ignore
        else:
            outcome = self.step_clause(view, e, f)
        if isinstance(outcome, Fail):
            return Fail((e, f), outcome.clause, outcome.witness, outcome.exact)
        return outcome

    def bigstep_clauses(self, view: RelationView, e: ExtTerm, f: ExtTerm) -> Outcome:
        z = self.sequence(e)[-1]
        if not is_summed_value(z):
            return UNRESOLVED
        outcome = self.value_clause(view, z, f)  # type: ignore
        if isinstance(outcome, Fail):
            return Fail((e, f), outcome.clause, outcome.witness, outcome.exact)
        return outcome
