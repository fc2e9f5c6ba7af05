from ..syntax.terms import Abs, App, Choice, Term, is_value, substitute
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

__all__ = ["CallByValue"]


class CallByValue(BaseStrategy):
    """Strict evaluation: the argument is evaluated to a value before β-reduction.

    Arguments passed by the applicative chain are restricted to values.
    """

    name = "cbv"

    def step(self, term: Term) -> StepOutcome:
        if isinstance(term, Abs):
            return ValueStep()
        if isinstance(term, Choice):
            return SplitStep(term.left, term.right)
        if isinstance(term, App):
            if not isinstance(term.fun, Abs):
                outcome = self.step(term.fun)
                if isinstance(outcome, DeterministicStep):
                    return DeterministicStep(App(outcome.next, term.arg))
                if isinstance(outcome, SplitStep):
                    return SplitStep(App(outcome.left, term.arg), App(outcome.right, term.arg))
                return StuckStep()
            if not isinstance(term.arg, Abs):
                outcome = self.step(term.arg)
                if isinstance(outcome, DeterministicStep):
                    return DeterministicStep(App(term.fun, outcome.next))
                if isinstance(outcome, SplitStep):
                    return SplitStep(App(term.fun, outcome.left), App(term.fun, outcome.right))
                return StuckStep()
            return DeterministicStep(substitute(term.fun.body, term.fun.binder, term.arg))
        return StuckStep()

    def unfold_application(self, machine, term, depth, chain):
        head = machine.run(term.fun, depth - 1)
        if not head.values:
            return Unfolding({}, head.unexplored)
        argument = machine.run(term.arg, depth - 1)
        function, value = head.point_mass(), argument.point_mass()
        if function is not None and value is not None:
            continuation = substitute(function.body, function.binder, value)
            return machine.follow(term, continuation, depth - 1, chain)
        result = Unfolding({}, head.unexplored + head.mass * argument.unexplored)
        for function, weight in head.values.values():
            for value, arg_weight in argument.values.values():
                branch = machine.run(substitute(function.body, function.binder, value), depth - 1)
                result = machine.accumulate(result, branch, weight * arg_weight)
        return result

    def accepts_argument(self, term: Term) -> bool:
        return is_value(term)


register_strategy("cbv", CallByValue)
add_strategy_alias("value", "cbv")
