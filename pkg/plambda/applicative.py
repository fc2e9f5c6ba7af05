"""The applicative labelled Markov chain of closed terms and bounded (bi)similarity.

Term-states evaluate (label ``τ``) to distinguished value-states, and value-states
consume an argument (one label per argument) to become term-states again. The
exploration stops after a fixed number of such alternations and evaluates to a
fixed depth, so rows carry slack for the mass that was not explored. Refutations
are sound for every completion of that slack; agreement is only reported up to
the bounds.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .eval import Approximator, converge_prob
from .lmc import (
    MLMC,
    Removal,
    SplitRecord,
    greatest_simulation,
    refine_partition,
    verify_refinement,
    verify_removals,
)
from .strategies import resolve_strategy
from .syntax.printer import print_term
from .syntax.terms import Abs, Choice, OMEGA, Term, Var, abstract, substitute

__all__ = [
    "TERM_SORT",
    "VALUE_SORT",
    "default_arguments",
    "AppState",
    "BoundParams",
    "ApplicativeChain",
    "BisimCertificate",
    "NotBisimilar",
    "NotSimilar",
    "IndistinguishableUpToBound",
    "build_applicative_lmc",
    "check_bounded_bisim",
    "check_bounded_sim",
    "replay_certificate",
    "adequacy_check",
]

_logger = logging.getLogger(__name__)

TERM_SORT = 0
VALUE_SORT = 1
TAU = "τ"

DEFAULT_DEPTH = 8
DEFAULT_ALTERNATION = 3
DEFAULT_MAX_STATES = 5000


def default_arguments() -> List[Term]:
    """``I``, ``K``, ``λz.Ω``, ``λy.λz.Ω``, ``Ω ⊕ λz.λu.z`` and ``I ⊕ Ω``."""
    identity = Abs("x", Var("x"))
    return [
        identity,
        abstract(["x", "y"], Var("x")),
        Abs("z", OMEGA),
        abstract(["y", "z"], OMEGA),
        Choice(OMEGA, abstract(["z", "u"], Var("z"))),
        Choice(identity, OMEGA),
    ]


@dataclass(frozen=True)
class AppState:
    kind: str
    term: Term
    level: int
    truncated: bool = False

    @property
    def name(self) -> str:
        text = print_term(self.term)
        return f"ν({text})" if self.kind == "value" else text


@dataclass(frozen=True)
class BoundParams:
    terms: Tuple[Term, ...]
    args: Tuple[Term, ...]
    k: int
    d: int
    strategy: str
    max_states: int = DEFAULT_MAX_STATES


class ApplicativeChain(MLMC):
    """An :class:`~plambda.lmc.MLMC` whose states are term-states and value-states."""

    def __init__(self, states: Sequence[AppState], params: BoundParams, labels, trans, slack):
        self.states = tuple(states)
        self.params = params
        self.arg_labels = tuple(labels)
        super().__init__(
            [TERM_SORT if s.kind == "term" else VALUE_SORT for s in self.states],
            [TERM_SORT] + [VALUE_SORT] * len(self.arg_labels),
            trans,
            slack,
            state_names=[s.name for s in self.states],
            label_names=[TAU] + [print_term(arg) for arg in self.arg_labels],
        )
        self._index = {(s.kind, s.term.key): i for i, s in enumerate(self.states)}

    def term_state(self, term: Term) -> int:
        return self._index[("term", term.key)]

    def value_state(self, term: Term) -> Optional[int]:
        return self._index.get(("value", term.key))

    def residual(self, state: int) -> Fraction:
        return self.slack(state, 0)


def build_applicative_lmc(
    terms: Sequence[Term],
    args: Optional[Sequence[Term]] = None,
    k: int = DEFAULT_DEPTH,
    d: int = DEFAULT_ALTERNATION,
    strategy="cbn",
    detect_divergence: bool = True,
    max_states: int = DEFAULT_MAX_STATES,
) -> ApplicativeChain:
    """Explore the applicative chain of ``terms`` breadth first.

    Parameters
    ----------
    terms: Sequence[Term]
        Closed initial terms; they become the first term-states, in order.
    args: Sequence[Term], optional
        Closed arguments, one label each. Under call-by-value only the values are
        kept. Defaults to :func:`default_arguments`.
    k: int
        Evaluation depth of every ``τ`` row. Unexplored mass becomes row slack.
    d: int
        Number of evaluate-then-apply alternations. Term-states reached after
        ``d`` alternations are not evaluated: their ``τ`` row is all slack.
    strategy: Union[str, BaseStrategy]
        Evaluation strategy.
    detect_divergence: bool
        Certify deterministic cycles as divergent instead of leaving their mass
        unexplored.
    max_states: int
        Exploration cap. States left unexpanded are marked truncated and get a
        row of slack 1 on every label.

    Returns
    -------
    ApplicativeChain

    Raises
    ------
    ValueError
        If a term or argument is open, or the bounds are negative.
    """
    if k < 0 or d < 0:
        raise ValueError(f"Bounds must be nonnegative, got k={k}, d={d}")
    strategy = resolve_strategy(strategy)
    args = list(default_arguments() if args is None else args)
    for term in list(terms) + args:
        if term.free_vars:
            raise ValueError(f"Term {print_term(term)} is not closed")
    labels = [arg for arg in args if strategy.accepts_argument(arg)]
    params = BoundParams(tuple(terms), tuple(args), k, d, strategy.name, max_states)
    machine = Approximator(strategy, detect_divergence)

    states: List[AppState] = []
    index: Dict[Tuple[str, Hashable], int] = {}
    queue: deque = deque()
    trans: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    slack: Dict[Tuple[int, int], Fraction] = {}

    def discover(kind: str, term: Term, level: int) -> int:
        key = (kind, term.key)
        if key not in index:
            index[key] = len(states)
            states.append(AppState(kind, term, level))
            queue.append(index[key])
        return index[key]

    for term in terms:
        discover("term", term, 0)
    truncated = 0
    while queue:
        s = queue.popleft()
        state = states[s]
        if len(states) > max_states:
            states[s] = AppState(state.kind, state.term, state.level, truncated=True)
            truncated += 1
            if state.kind == "term":
                slack[(s, 0)] = Fraction(1)
            else:
                for label in range(1, len(labels) + 1):
                    slack[(s, label)] = Fraction(1)
            continue
        if state.kind == "term":
            if state.level >= d:
                slack[(s, 0)] = Fraction(1)
                continue
            approximation = machine.approximate(state.term, k)
            row = {}
            for value, weight in approximation.distribution:
                target = discover("value", value, state.level)
                row[target] = row.get(target, Fraction(0)) + weight
            trans[(s, 0)] = row
            slack[(s, 0)] = approximation.interval.width
        else:
            for label, arg in enumerate(labels, start=1):
                body = substitute(state.term.body, state.term.binder, arg)
                trans[(s, label)] = {discover("term", body, state.level + 1): Fraction(1)}
    if truncated:
        _logger.warning("Exploration truncated: %d states left unexpanded", truncated)
    _logger.debug("Applicative chain with %d states and %d labels", len(states), len(labels) + 1)
    return ApplicativeChain(states, params, labels, trans, slack)


@dataclass(frozen=True)
class BisimCertificate:
    """The splits separating two initial states, replayable from the bounds."""

    params: BoundParams
    trace: Tuple[SplitRecord, ...]
    names: Tuple[str, ...]
    label_names: Tuple[str, ...]


@dataclass(frozen=True)
class NotBisimilar:
    certificate: BisimCertificate


@dataclass(frozen=True)
class NotSimilar:
    """Pairs removed from the candidate simulation, ending with the initial pair."""

    params: BoundParams
    removals: Tuple[Removal, ...]
    names: Tuple[str, ...]
    label_names: Tuple[str, ...]


@dataclass(frozen=True)
class IndistinguishableUpToBound:
    params: BoundParams
    n_states: int


BisimVerdict = Union[NotBisimilar, IndistinguishableUpToBound]
SimVerdict = Union[NotSimilar, IndistinguishableUpToBound]


def check_bounded_bisim(
    m: Term,
    n: Term,
    args: Optional[Sequence[Term]] = None,
    k: int = DEFAULT_DEPTH,
    d: int = DEFAULT_ALTERNATION,
    strategy="cbn",
    max_states: int = DEFAULT_MAX_STATES,
) -> BisimVerdict:
    """Try to refute bisimilarity of ``m`` and ``n`` on the bounded fragment.

    The fragment is refined with interval-aware splitting, which separates two
    states only when their block masses are disjoint for every completion of the
    slack. The verdict never claims bisimilarity.
    """
    chain = build_applicative_lmc([m, n], args, k, d, strategy, max_states=max_states)
    first, second = chain.term_state(m), chain.term_state(n)
    refinement = refine_partition(chain)
    if refinement.partition.same_block(first, second):
        return IndistinguishableUpToBound(chain.params, chain.n_states)
    trace = []
    for record in refinement.trace:
        trace.append(record)
        if _separates(record, first, second):
            break
    return NotBisimilar(
        BisimCertificate(chain.params, tuple(trace), chain.state_names, chain.label_names)
    )


def replay_certificate(certificate: Union[BisimCertificate, NotSimilar]) -> bool:
    """Rebuild the fragment from the recorded bounds and re-verify the refutation."""
    params = certificate.params
    chain = build_applicative_lmc(
        params.terms, params.args, params.k, params.d, params.strategy, max_states=params.max_states
    )
    first, second = (chain.term_state(term) for term in params.terms[:2])
    if isinstance(certificate, NotSimilar):
        candidates = _reachable_pairs(chain, first, second)
        removed = {removal.pair for removal in certificate.removals}
        return (first, second) in removed and verify_removals(
            chain, certificate.removals, candidates
        )
    if not verify_refinement(chain, certificate.trace):
        return False
    return bool(certificate.trace) and _separates(certificate.trace[-1], first, second)


def _separates(record: SplitRecord, s: int, t: int) -> bool:
    return s in record.block and t in record.block and not any(
        s in piece and t in piece for piece in record.pieces
    )


def _reachable_pairs(chain: MLMC, s: int, t: int):
    """Pairs whose status can influence ``(s, t)`` in the simulation condition."""
    seen = {(s, t)}
    frontier = [(s, t)]
    while frontier:
        u, v = frontier.pop()
        for label in chain.labels_for(u):
            for x in chain.row(u, label):
                for y in chain.row(v, label):
                    if (x, y) not in seen and chain.sort_of(x) == chain.sort_of(y):
                        seen.add((x, y))
                        frontier.append((x, y))
    return seen


def check_bounded_sim(
    m: Term,
    n: Term,
    args: Optional[Sequence[Term]] = None,
    k: int = DEFAULT_DEPTH,
    d: int = DEFAULT_ALTERNATION,
    strategy="cbn",
    max_states: int = DEFAULT_MAX_STATES,
) -> SimVerdict:
    """Try to refute that ``n`` simulates ``m`` on the bounded fragment.

    Pairs are removed when the mass of the left state cannot be routed into the
    related successors of the right state plus its slack.
    """
    chain = build_applicative_lmc([m, n], args, k, d, strategy, max_states=max_states)
    first, second = chain.term_state(m), chain.term_state(n)
    result = greatest_simulation(chain, _reachable_pairs(chain, first, second))
    if (first, second) in result.relation:
        return IndistinguishableUpToBound(chain.params, chain.n_states)
    last_round = next(r.round for r in result.removals if r.pair == (first, second))
    removals = tuple(r for r in result.removals if r.round <= last_round)
    return NotSimilar(chain.params, removals, chain.state_names, chain.label_names)


def adequacy_check(
    m: Term, n: Term, k: int = DEFAULT_DEPTH, strategy="cbn", detect_divergence: bool = True
) -> bool:
    """True when the convergence intervals of ``m`` and ``n`` at depth ``k`` are disjoint."""
    return converge_prob(m, k, strategy, detect_divergence).disjoint(
        converge_prob(n, k, strategy, detect_divergence)
    )
