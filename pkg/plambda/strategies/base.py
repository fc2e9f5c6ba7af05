from abc import abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Hashable, NamedTuple, Tuple, Union

from ..syntax.terms import App, Term

if TYPE_CHECKING:  # pragma: no cover
    from ..eval import Approximator

__all__ = [
    "BaseStrategy",
    "Unfolding",
    "ValueStep",
    "DeterministicStep",
    "SplitStep",
    "StuckStep",
    "StepOutcome",
]


@dataclass(frozen=True)
class ValueStep:
    pass


@dataclass(frozen=True)
class DeterministicStep:
    next: Term


@dataclass(frozen=True)
class SplitStep:
    """A ⊕-redex: each side is reached with probability 1/2."""

    left: Term
    right: Term


@dataclass(frozen=True)
class StuckStep:
    pass


StepOutcome = Union[ValueStep, DeterministicStep, SplitStep, StuckStep]


class Unfolding(NamedTuple):
    """Raw result of a bounded unfolding.

    ``values`` maps canonical keys to ``(value, weight)``. ``unexplored`` is the
    mass cut by the depth bound. Mass that is neither converged nor unexplored
    has been certified divergent.
    """

    values: Dict[Hashable, Tuple[Term, Fraction]]
    unexplored: Fraction

    @property
    def mass(self) -> Fraction:
        return sum((weight for _, weight in self.values.values()), Fraction(0))

    def point_mass(self):
        """The single value this unfolding converges to with certainty, or ``None``."""
        if self.unexplored or len(self.values) != 1:
            return None
        ((value, weight),) = self.values.values()
        return value if weight == 1 else None


class BaseStrategy:
    """Evaluation strategy abstract base class.

    A strategy fixes the one-step reduction relation and the application rule of
    the big-step approximation semantics. Every other rule is shared and lives in
    :class:`~plambda.eval.Approximator`.
    """

    name = ""

    @abstractmethod
    def step(self, term: Term) -> StepOutcome:  # pragma: no cover
        """Perform one reduction step on a closed term."""
        pass

    @abstractmethod
    def unfold_application(
        self, machine: "Approximator", term: App, depth: int, chain: Tuple[Hashable, ...]
    ) -> Unfolding:  # pragma: no cover
        """Unfold the application rule for ``term`` at ``depth`` (at least 1).

        Parameters
        ----------
        machine : Approximator
            Evaluates subterms, memoizes, and follows deterministic links.
        term : App
            The application.
        depth : int
            The remaining depth; sub-derivations run at ``depth - 1``.
        chain : Tuple[Hashable, ...]
            Keys of the terms on the current deterministic chain.
        """
        pass

    def accepts_argument(self, term: Term) -> bool:
        """Whether ``term`` may label an argument-passing transition."""
        return True
