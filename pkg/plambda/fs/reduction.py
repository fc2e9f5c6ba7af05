"""The deterministic reduction of extended terms.

Rule ``spc`` needs the full semantics of each non-value component; here it uses
the approximation semantics at a fixed depth, with the divergence detector on,
and moves the unexplored mass to the residual of the resulting sum.
"""
import logging
from fractions import Fraction
from typing import List, NamedTuple

from ..eval import Approximator
from ..syntax.printer import print_term
from ..syntax.terms import Abs, App, Choice, Term
from .sums import ExtApp, ExtTerm, FormalSum, dist_extract, fs_apply, is_summed_value, print_ext

__all__ = ["FSResult", "fs_step", "fs_eval", "reduction_sequence", "DEFAULT_SEM_DEPTH", "DEFAULT_STEPS"]

_logger = logging.getLogger(__name__)

DEFAULT_SEM_DEPTH = 8
DEFAULT_STEPS = 64

HALF = Fraction(1, 2)


class FSResult(NamedTuple):
    value: FormalSum
    residual: Fraction
    steps: int
    reached: bool


def fs_step(e: ExtTerm, sem_depth: int = DEFAULT_SEM_DEPTH) -> ExtTerm:
    """The unique successor of ``e``.

    Raises
    ------
    ValueError
        If ``e`` is a summed value (it is terminal) or is open.
    """
    return _Stepper(sem_depth).step(e)


class _Stepper:
    def __init__(self, sem_depth: int):
        self.sem_depth = sem_depth
        self.machine = Approximator("cbn", detect_divergence=True)

    def step(self, e: ExtTerm) -> ExtTerm:
        if isinstance(e, FormalSum):
            if e.is_value:
                raise ValueError(f"{print_ext(e)} is a summed value and cannot reduce")
            return self.components(e)
        if isinstance(e, ExtApp):
            if is_summed_value(e.fun):
                return fs_apply(e.fun, e.arg)  # type: ignore
            return ExtApp(self.step(e.fun), e.arg)
        if e.free_vars:
            raise ValueError(f"Cannot reduce open term {print_term(e)}")
        if isinstance(e, Choice):
            return FormalSum([(e.left, HALF), (e.right, HALF)])
        if isinstance(e, Abs):
            return FormalSum([(e, Fraction(1))])
        if isinstance(e, App):
            return ExtApp(self.step(e.fun), e.arg)
        raise ValueError(f"Cannot reduce {print_term(e)}")

    def components(self, h: FormalSum) -> FormalSum:
        components = []
        residual = h.residual
        for term, weight in h.components:
            if isinstance(term, Abs):
                components.append((term, weight))
                continue
            approximation = self.machine.approximate(term, self.sem_depth)
            components.extend((v, w * weight) for v, w in approximation.distribution)
            residual += weight * approximation.interval.width
        return FormalSum(components, residual)


def reduction_sequence(e: ExtTerm, steps: int = DEFAULT_STEPS, sem_depth: int = DEFAULT_SEM_DEPTH) -> List[ExtTerm]:
    """``e`` followed by its successors, up to a summed value or ``steps`` reductions."""
    stepper = _Stepper(sem_depth)
    sequence = [e]
    while len(sequence) <= steps and not is_summed_value(sequence[-1]):
        sequence.append(stepper.step(sequence[-1]))
    return sequence


def fs_eval(e: ExtTerm, steps: int = DEFAULT_STEPS, sem_depth: int = DEFAULT_SEM_DEPTH) -> FSResult:
    """Reduce ``e`` to a summed value, or report the value mass reached when steps run out."""
    sequence = reduction_sequence(e, steps, sem_depth)
    last = sequence[-1]
    if is_summed_value(last):
        return FSResult(last, last.residual, len(sequence) - 1, True)  # type: ignore
    values = FormalSum()
    if isinstance(last, FormalSum):
        values = FormalSum([(t, w) for t, w in last.components if isinstance(t, Abs)])
    residual = dist_extract(e).mass - values.mass
    _logger.debug("No summed value after %d steps", steps)
    return FSResult(values, residual, len(sequence) - 1, False)
