"""Probabilistic evaluation in exact rationals.

The big-step approximation semantics is unfolded to a bounded depth. One unit of
depth is consumed by every application and every choice on the recursion path;
values are free, and depth 0 yields the empty distribution.

Mass that the depth bound cuts off is tracked as *unexplored*, so every result
comes with a sound :class:`ProbInterval` for the convergence probability. With
``detect_divergence`` on, an application whose head converges with certainty to
a single abstraction is a deterministic link; a term that comes back along a
chain of such links is divergent, and its mass is dropped from both bounds.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, NamedTuple, Tuple, Union

from .strategies import (
    BaseStrategy,
    DeterministicStep,
    SplitStep,
    StepOutcome,
    Unfolding,
    ValueStep,
    resolve_strategy,
)
from .syntax.printer import print_term
from .syntax.terms import Abs, App, Choice, Term, is_value

__all__ = [
    "ValueDistribution",
    "ProbInterval",
    "Approximation",
    "LubResult",
    "Approximator",
    "StepOutcome",
    "cbn_step",
    "cbv_step",
    "step",
    "approximate",
    "approx_semantics",
    "converge_prob",
    "semantics_lub",
    "smallstep_semantics",
    "biased_choice",
]

_logger = logging.getLogger(__name__)

StrategyType = Union[str, BaseStrategy]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class ValueDistribution:
    """Finite subdistribution over closed abstractions, keyed by α-equivalence class."""

    def __init__(self, items: Mapping[Hashable, Tuple[Term, Fraction]] = None):
        self._items: Dict[Hashable, Tuple[Term, Fraction]] = {}
        for key, (term, weight) in (items or {}).items():
            if weight < 0:
                raise ValueError(f"Negative weight {weight} for {print_term(term)}")
            if not weight:
                continue
            if not is_value(term):
                raise ValueError(f"{print_term(term)} is not a closed abstraction")
            self._items[key] = (term, Fraction(weight))
        self.mass = sum((weight for _, weight in self._items.values()), ZERO)
        if self.mass > 1:
            raise ValueError(f"Total mass {self.mass} exceeds 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Term, Fraction]]) -> "ValueDistribution":
        merged: Dict[Hashable, Tuple[Term, Fraction]] = {}
        for term, weight in pairs:
            previous = merged.get(term.key)
            merged[term.key] = (term, Fraction(weight) + (previous[1] if previous else ZERO))
        return cls(merged)

    def weight(self, term: Term) -> Fraction:
        entry = self._items.get(term.key)
        return entry[1] if entry else ZERO

    def support(self) -> List[Term]:
        return [term for term, _ in self.items()]

    def items(self) -> List[Tuple[Term, Fraction]]:
        """Pairs ``(value, weight)`` in a deterministic order (by printed form)."""
        return sorted(self._items.values(), key=lambda item: (print_term(item[0]), repr(item[0].key)))

    def keys(self):
        return self._items.keys()

    def __iter__(self) -> Iterator[Tuple[Term, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValueDistribution):
            return NotImplemented
        return {k: w for k, (_, w) in self._items.items()} == {
            k: w for k, (_, w) in other._items.items()
        }

    def __le__(self, other: "ValueDistribution") -> bool:
        return all(weight <= other.weight(term) for term, weight in self._items.values())

    def scale(self, factor) -> "ValueDistribution":
        return ValueDistribution({k: (t, w * factor) for k, (t, w) in self._items.items()})

    def __add__(self, other: "ValueDistribution") -> "ValueDistribution":
        return ValueDistribution.from_pairs(list(self._items.values()) + list(other._items.values()))

    def lub(self, other: "ValueDistribution") -> "ValueDistribution":
        """Pointwise maximum; the least upper bound of a chain is its last element."""
        merged = dict(self._items)
        for key, (term, weight) in other._items.items():
            if key not in merged or merged[key][1] < weight:
                merged[key] = (term, weight)
        return ValueDistribution(merged)

    def __repr__(self):
        inner = ", ".join(f"{print_term(t)}: {w}" for t, w in self.items())
        return f"ValueDistribution({{{inner}}})"


@dataclass(frozen=True)
class ProbInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"Invalid probability interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def disjoint(self, other: "ProbInterval") -> bool:
        return self.upper < other.lower or other.upper < self.lower

    def overlaps(self, other: "ProbInterval") -> bool:
        return not self.disjoint(other)


class Approximation(NamedTuple):
    distribution: ValueDistribution
    interval: ProbInterval


class LubResult(NamedTuple):
    distribution: ValueDistribution
    gap: Fraction
    depth: int
    reached: bool


class Approximator:
    """Depth-bounded unfolding of the big-step semantics with memoization.

    One instance may be reused across calls (and across depths); the memo table
    is private to the instance.
    """

    def __init__(self, strategy: StrategyType = "cbn", detect_divergence: bool = False):
        self.strategy = resolve_strategy(strategy)
        self.detect_divergence = detect_divergence
        self._memo: Dict[Tuple[Hashable, int], Unfolding] = {}

    def run(self, term: Term, depth: int, chain: Tuple[Hashable, ...] = ()) -> Unfolding:
        if depth <= 0:
            return Unfolding({}, ONE)
        if isinstance(term, Abs):
            if term.free_vars:
                raise ValueError(f"Cannot evaluate open term {print_term(term)}")
            return Unfolding({term.key: (term, ONE)}, ZERO)
        memo_key = (term.key, depth)
        cached = self._memo.get(memo_key)
        if cached is not None:
            return cached
        if isinstance(term, Choice):
            result = self.accumulate(Unfolding({}, ZERO), self.run(term.left, depth - 1), HALF)
            result = self.accumulate(result, self.run(term.right, depth - 1), HALF)
        elif isinstance(term, App):
            result = self.strategy.unfold_application(self, term, depth, chain)
        else:
            raise ValueError(f"Cannot evaluate open term {print_term(term)}")
        self._memo[memo_key] = result
        return result

    def follow(
        self, origin: Term, continuation: Term, depth: int, chain: Tuple[Hashable, ...]
    ) -> Unfolding:
        """Continue a deterministic link from ``origin`` to ``continuation``."""
        if not self.detect_divergence:
            return self.run(continuation, depth)
        link = chain + (origin.key,)
        if continuation.key in link:
            _logger.debug("Divergent cycle through %s", print_term(continuation))
            return Unfolding({}, ZERO)
        return self.run(continuation, depth, link)

    @staticmethod
    def accumulate(total: Unfolding, part: Unfolding, weight: Fraction) -> Unfolding:
        values = dict(total.values)
        for key, (term, mass) in part.values.items():
            previous = values.get(key)
            values[key] = (term, mass * weight + (previous[1] if previous else ZERO))
        return Unfolding(values, total.unexplored + weight * part.unexplored)

    def approximate(self, term: Term, depth: int) -> Approximation:
        if term.free_vars:
            raise ValueError(f"Cannot evaluate open term {print_term(term)}")
        unfolding = self.run(term, depth)
        distribution = ValueDistribution(unfolding.values)
        interval = ProbInterval(distribution.mass, distribution.mass + unfolding.unexplored)
        return Approximation(distribution, interval)


def approximate(
    m: Term, depth: int, strategy: StrategyType = "cbn", detect_divergence: bool = False
) -> Approximation:
    return Approximator(strategy, detect_divergence).approximate(m, depth)


def approx_semantics(
    m: Term, depth: int, strategy: StrategyType = "cbn", detect_divergence: bool = False
) -> ValueDistribution:
    """Approximate the semantics of a closed term to a bounded derivation depth.

    Parameters
    ----------
    m : Term
        A closed term.
    depth : int
        Derivation depth; one unit per application or choice rule on a path.
    strategy : Union[str, BaseStrategy]
        A registered strategy name (``"cbn"``, ``"cbv"``) or an instance.
    detect_divergence : bool
        Enable the deterministic-cycle detector. It never changes the returned
        distribution, only how the missing mass is classified.

    Returns
    -------
    ValueDistribution
        A lower approximation, monotone in ``depth``.

    Raises
    ------
    ValueError
        If ``m`` is open.
    """
    return approximate(m, depth, strategy, detect_divergence).distribution


def converge_prob(
    m: Term, depth: int, strategy: StrategyType = "cbn", detect_divergence: bool = False
) -> ProbInterval:
    """Bounds on the probability that ``m`` converges.

    The lower bound is the mass of :func:`approx_semantics`; the upper bound adds
    the mass that the depth bound left unexplored.
    """
    return approximate(m, depth, strategy, detect_divergence).interval


def semantics_lub(
    m: Term,
    mass_gap,
    max_depth: int,
    strategy: StrategyType = "cbn",
    detect_divergence: bool = False,
) -> LubResult:
    """Deepen the approximation until the unexplored mass falls below ``mass_gap``.

    Returns
    -------
    LubResult
        The last lower approximation, the gap achieved, the depth used and whether
        the requested gap was reached before ``max_depth``.
    """
    mass_gap = Fraction(mass_gap)
    if mass_gap <= 0:
        raise ValueError(f"The mass gap must be positive, got {mass_gap}")
    machine = Approximator(strategy, detect_divergence)
    result = machine.approximate(m, 0)
    for depth in range(1, max_depth + 1):
        result = machine.approximate(m, depth)
        if result.interval.width < mass_gap:
            return LubResult(result.distribution, result.interval.width, depth, True)
    _logger.info("Gap %s not reached within depth %d", mass_gap, max_depth)
    return LubResult(result.distribution, result.interval.width, max_depth, False)


def step(m: Term, strategy: StrategyType = "cbn") -> StepOutcome:
    return resolve_strategy(strategy).step(m)


def cbn_step(m: Term) -> StepOutcome:
    """One call-by-name reduction step. Open redexes are reported as stuck."""
    return step(m, "cbn")


def cbv_step(m: Term) -> StepOutcome:
    return step(m, "cbv")


def smallstep_semantics(m: Term, steps: int, strategy: StrategyType = "cbn") -> ValueDistribution:
    """Explore the whole reduction tree of ``m`` for ``steps`` rounds.

    Each round collects the values on the frontier and reduces every other term
    once. The result never exceeds the approximation semantics at depth
    ``steps + 1``.
    """
    machine = resolve_strategy(strategy)
    frontier: Dict[Hashable, Tuple[Term, Fraction]] = {m.key: (m, ONE)}
    values: List[Tuple[Term, Fraction]] = []
    for _ in range(steps):
        successors: Dict[Hashable, Tuple[Term, Fraction]] = {}

        def push(term: Term, weight: Fraction):
            previous = successors.get(term.key)
            successors[term.key] = (term, weight + (previous[1] if previous else ZERO))

        for term, weight in frontier.values():
            outcome = machine.step(term)
            if isinstance(outcome, ValueStep):
                values.append((term, weight))
            elif isinstance(outcome, DeterministicStep):
                push(outcome.next, weight)
            elif isinstance(outcome, SplitStep):
                push(outcome.left, weight * HALF)
                push(outcome.right, weight * HALF)
        frontier = successors
    return ValueDistribution.from_pairs(values)


def biased_choice(p, m: Term, n: Term) -> Term:
    """Encode the choice taking ``m`` with probability ``p`` out of fair choices.

    ``p`` must be a dyadic rational in ``[0, 1]``.
    """
    p = Fraction(p)
    if not 0 <= p <= 1 or p.denominator & (p.denominator - 1):
        raise ValueError(f"Biased choice needs a dyadic probability in [0, 1], got {p}")
    if p == 1:
        return m
    if p == 0:
        return n
    if p >= HALF:
        return Choice(m, biased_choice(2 * p - 1, m, n))
    return Choice(biased_choice(2 * p, m, n), n)
