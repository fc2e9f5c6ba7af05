"""Frame-stack semantics and bounded CIU comparison.

A configuration pairs a stack of pending arguments with a closed term. Each
``(term)`` rule application costs one unit of depth; a configuration of the
empty stack and a value converges with probability 1 at any depth.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .applicative import default_arguments
from .eval import ProbInterval, converge_prob
from .syntax.contexts import FrameStack, plug_stack
from .syntax.printer import print_term
from .syntax.terms import Abs, App, Choice, Term, substitute

__all__ = [
    "StackConfig",
    "NotCIULess",
    "ConsistentUpToBound",
    "StackMachine",
    "stack_step",
    "stack_prob",
    "MatchedStackMachine",
    "matched_stack_prob",
    "default_stacks",
    "ciu_compare",
    "stack_vs_bigstep",
]

_logger = logging.getLogger(__name__)

DEFAULT_STACK_DEPTH = 40


@dataclass(frozen=True)
class StackConfig:
    stack: FrameStack
    term: Term

    @property
    def key(self) -> Hashable:
        return (tuple(frame.key for frame in self.stack), self.term.key)


def stack_step(c: StackConfig) -> List[StackConfig]:
    """Successors of a configuration; empty when it is terminal."""
    term, stack = c.term, c.stack
    if isinstance(term, App):
        return [StackConfig(stack.push(term.arg), term.fun)]
    if isinstance(term, Choice):
        return [StackConfig(stack, term.left), StackConfig(stack, term.right)]
    if isinstance(term, Abs) and not stack.is_nil:
        arg, rest = stack.pop()
        return [StackConfig(rest, substitute(term.body, term.binder, arg))]
    return []


class StackMachine:
    """Memoized unfolding of the frame-stack rules into (lower, residual) pairs.

    With ``detect_divergence`` a configuration that comes back along a run of
    single-successor steps counts as divergent and contributes no residual.
    """

    def __init__(self, detect_divergence: bool = False):
        self.detect_divergence = detect_divergence
        self._memo: Dict[Tuple[Hashable, int], Tuple[Fraction, Fraction]] = {}

    def run(
        self, config: StackConfig, depth: int, chain: Tuple[Hashable, ...] = ()
    ) -> Tuple[Fraction, Fraction]:
        if config.stack.is_nil and isinstance(config.term, Abs):
            return Fraction(1), Fraction(0)
        if depth <= 0:
            return Fraction(0), Fraction(1)
        memo_key = (config.key, depth)
        if memo_key in self._memo:
            return self._memo[memo_key]
        successors = stack_step(config)
        if len(successors) == 1 and self.detect_divergence:
            link = chain + (config.key,)
            if successors[0].key in link:
                _logger.debug("Divergent stack cycle through %s", print_term(config.term))
                return Fraction(0), Fraction(0)
            return self._store(memo_key, self.run(successors[0], depth - 1, link))
        lower, residual = Fraction(0), Fraction(0)
        for successor in successors:
            low, rest = self.run(successor, depth - 1)
            lower += low
            residual += rest
        if successors:
            lower /= len(successors)
            residual /= len(successors)
        return self._store(memo_key, (lower, residual))

    def _store(self, memo_key, result: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
        self._memo[memo_key] = result
        return result

    def interval(self, s: FrameStack, m: Term, depth: int) -> ProbInterval:
        if m.free_vars or any(frame.free_vars for frame in s):
            raise ValueError(f"Configuration with {print_term(m)} is not closed")
        lower, residual = self.run(StackConfig(s, m), depth)
        return ProbInterval(lower, lower + residual)


def stack_prob(s: FrameStack, m: Term, depth: int, detect_divergence: bool = False) -> ProbInterval:
    """Bounds on the probability that ``(s, m)`` reaches the empty stack with a value.

    Examples
    --------
    >>> from plambda.syntax import parse_term
    >>> stack_prob(FrameStack(), parse_term("I (+) OMEGA"), 2)
    ProbInterval(lower=Fraction(1, 2), upper=Fraction(1, 1))
    """
    return StackMachine(detect_divergence).interval(s, m, depth)


class MatchedStackMachine:
    """Frame-stack unfolding charged with the big-step budget.

    Each frame remembers the budget of the application that pushed it, less one,
    and popping it resumes at that budget. Budgets are thus spent along the
    height of a derivation instead of its length, which makes the bounds of
    ``(nil, m)`` coincide with the call-by-name bounds of ``m``.
    """

    def __init__(self):
        self._memo: Dict[Hashable, Tuple[Fraction, Fraction]] = {}

    def run(
        self, frames: Tuple[Tuple[Term, int], ...], term: Term, budget: int
    ) -> Tuple[Fraction, Fraction]:
        while budget > 0:
            if isinstance(term, App):
                frames = ((term.arg, budget - 1),) + frames
                term, budget = term.fun, budget - 1
            elif isinstance(term, Abs) and frames:
                (arg, resume), frames = frames[0], frames[1:]
                term, budget = substitute(term.body, term.binder, arg), resume
            else:
                break
        if budget <= 0:
            return Fraction(0), Fraction(1)
        if isinstance(term, Abs):
            return Fraction(1), Fraction(0)
        if not isinstance(term, Choice):
            return Fraction(0), Fraction(0)
        memo_key = (tuple((frame.key, resume) for frame, resume in frames), term.key, budget)
        cached = self._memo.get(memo_key)
        if cached is not None:
            return cached
        left_lower, left_rest = self.run(frames, term.left, budget - 1)
        right_lower, right_rest = self.run(frames, term.right, budget - 1)
        result = ((left_lower + right_lower) / 2, (left_rest + right_rest) / 2)
        self._memo[memo_key] = result
        return result

    def interval(self, s: FrameStack, m: Term, depth: int) -> ProbInterval:
        term = plug_stack(s, m)
        if term.free_vars:
            raise ValueError(f"Configuration with {print_term(m)} is not closed")
        lower, residual = self.run((), term, depth)
        return ProbInterval(lower, lower + residual)


def matched_stack_prob(s: FrameStack, m: Term, depth: int) -> ProbInterval:
    """Frame-stack bounds for ``(s, m)`` under the big-step budget ``depth``.

    The frames of ``s`` are pushed the way the application ``s[m]`` pushes them.

    Examples
    --------
    >>> from plambda.syntax import parse_term
    >>> matched_stack_prob(FrameStack(), parse_term("I I"), 2)
    ProbInterval(lower=Fraction(1, 1), upper=Fraction(1, 1))
    """
    return MatchedStackMachine().interval(s, m, depth)


def default_stacks(args: Optional[Sequence[Term]] = None, max_length: int = 2) -> List[FrameStack]:
    """Every stack of at most ``max_length`` frames over ``args``, shortest first."""
    args = list(default_arguments() if args is None else args)
    return [
        FrameStack.of(frames)
        for length in range(max_length + 1)
        for frames in itertools.product(args, repeat=length)
    ]


@dataclass(frozen=True)
class NotCIULess:
    stack: FrameStack
    left: ProbInterval
    right: ProbInterval


@dataclass(frozen=True)
class ConsistentUpToBound:
    stacks: int
    depth: int


CIUVerdict = Union[NotCIULess, ConsistentUpToBound]


def ciu_compare(
    m: Term,
    n: Term,
    stacks: Optional[Sequence[FrameStack]] = None,
    depth: int = DEFAULT_STACK_DEPTH,
    detect_divergence: bool = False,
) -> CIUVerdict:
    """Look for a stack on which ``m`` converges strictly more often than ``n``.

    A stack refutes ``m ⪯ n`` only when the lower bound for ``m`` exceeds the
    upper bound for ``n``. Stacks are tried in order and the first witness is
    returned. ``detect_divergence`` lets certified stack cycles close the upper
    bound of ``n``.
    """
    stacks = default_stacks() if stacks is None else list(stacks)
    machine = StackMachine(detect_divergence)
    for s in stacks:
        left = machine.interval(s, m, depth)
        right = machine.interval(s, n, depth)
        if left.lower > right.upper:
            _logger.debug("Stack of %d frames refutes the comparison", len(s))
            return NotCIULess(s, left, right)
    return ConsistentUpToBound(len(stacks), depth)


def stack_vs_bigstep(s: FrameStack, m: Term, depth: int, bigstep_depth: Optional[int] = None) -> bool:
    """Check the frame-stack semantics of ``(s, m)`` against the big-step semantics of ``s[m]``.

    Under the big-step budget the frame-stack bounds must equal the call-by-name
    bounds of ``s[m]`` at ``depth``. Under the per-step budget they must overlap the
    big-step bounds at ``bigstep_depth`` (``depth`` by default).
    """
    plugged = plug_stack(s, m)
    bigstep_bounds = converge_prob(plugged, depth)
    matched_bounds = matched_stack_prob(s, m, depth)
    if matched_bounds != bigstep_bounds:
        _logger.warning(
            "Frame-stack bounds %s differ from big-step bounds %s for %s",
            matched_bounds,
            bigstep_bounds,
            print_term(plugged),
        )
        return False
    if bigstep_depth is not None and bigstep_depth != depth:
        bigstep_bounds = converge_prob(plugged, bigstep_depth)
    return stack_prob(s, m, depth).overlaps(bigstep_bounds)
