
from ..syntax.terms import Abs, App, Choice, Term, substitute
from .base import (
    BaseStrategy,
    DeterministicStep,
    SplitStep,
    StepOutcome,
    StuckStep,
    Unfolding,
    ValueStep,
)
from .registry import add_strategy_alias, register_strategy

__all__ = ["CallByName"]


class CallByName(BaseStrategy):
    """Lazy evaluation: arguments are substituted unevaluated."""

    name = "cbn"

    def step(self, term: Term) -> StepOutcome:
        if isinstance(term, Abs):
            return ValueStep()
        if isinstance(term, Choice):
            return SplitStep(term.left, term.right)
        if isinstance(term, App):
            if isinstance(term.fun, Abs):
                return DeterministicStep(substitute(term.fun.body, term.fun.binder, term.arg))
            return _under_argument(self.step(term.fun), term.arg)
        return StuckStep()

    def unfold_application(self, machine, term, depth, chain):
        head = machine.run(term.fun, depth - 1)
        value = head.point_mass()
        if value is not None:
            continuation = substitute(value.body, value.binder, term.arg)
            return machine.follow(term, continuation, depth - 1, chain)
        result = Unfolding({}, head.unexplored)
        for value, weight in head.values.values():
            branch = machine.run(substitute(value.body, value.binder, term.arg), depth - 1)
            result = machine.accumulate(result, branch, weight)
        return result


def _under_argument(outcome: StepOutcome, arg: Term) -> StepOutcome:
    if isinstance(outcome, DeterministicStep):
        return DeterministicStep(App(outcome.next, arg))
    if isinstance(outcome, SplitStep):
        return SplitStep(App(outcome.left, arg), App(outcome.right, arg))
    return StuckStep()


register_strategy("cbn", CallByName)
add_strategy_alias("name", "cbn")
