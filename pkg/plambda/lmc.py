"""Finite multisorted labelled Markov chains and (bi)simulation procedures.

States and labels are numbered from 0. Every state carries a sort, every label
carries the sort of the states it applies to, and the targets of a label all
share one sort. Rows may carry a *slack*: mass that is known to exist but whose
destination has not been explored. Exact chains have no slack.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    AbstractSet,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from .flow import transport_value
from .syntax.parser import parse_fraction
from .utils import format_fraction

__all__ = [
    "MLMC",
    "StateRelation",
    "Partition",
    "RelationCheck",
    "SplitRecord",
    "Refinement",
    "Removal",
    "SimulationResult",
    "parse_lmc",
    "format_lmc",
    "refine_partition",
    "verify_refinement",
    "bisim_partition",
    "check_bisimulation",
    "check_simulation_bruteforce",
    "check_simulation_flow",
    "simulation_condition",
    "greatest_simulation",
    "largest_simulation",
    "verify_removals",
    "BRUTEFORCE_LIMIT",
]

_logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 20

Pair = Tuple[int, int]


class MLMC:
    """A finite multisorted labelled Markov chain.

    Parameters
    ----------
    state_sorts: Sequence[int]
        The sort of each state.
    label_sorts: Sequence[int]
        The sort of the states each label applies to.
    trans: Mapping[Tuple[int, int], Mapping[int, Fraction]]
        Sparse rows ``(s, l) -> {t: P(s, l, t)}`` with positive entries.
    slack: Mapping[Tuple[int, int], Fraction], optional
        Unexplored mass of a row.
    state_names: Sequence[str], optional
        Display names of the states.
    label_names: Sequence[str], optional
        Display names of the labels.

    Raises
    ------
    ValueError
        If a row has mass above 1, a transition leaves a state of the wrong
        sort, or the targets of a label have different sorts.
    """

    def __init__(
        self,
        state_sorts: Sequence[int],
        label_sorts: Sequence[int],
        trans: Mapping[Tuple[int, int], Mapping[int, Fraction]],
        slack: Optional[Mapping[Tuple[int, int], Fraction]] = None,
        state_names: Optional[Sequence[str]] = None,
        label_names: Optional[Sequence[str]] = None,
    ):
        self.state_sorts = tuple(state_sorts)
        self.label_sorts = tuple(label_sorts)
        self.state_names = tuple(state_names) if state_names else tuple(
            str(s) for s in range(len(self.state_sorts))
        )
        self.label_names = tuple(label_names) if label_names else tuple(
            str(l) for l in range(len(self.label_sorts))
        )
        self._trans: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        self._slack: Dict[Tuple[int, int], Fraction] = {}
        self._target_sorts: Dict[int, int] = {}
        for (s, l), row in trans.items():
            self._check_row_source(s, l)
            cleaned = {}
            for t, weight in row.items():
                weight = Fraction(weight)
                if not 0 <= t < self.n_states:
                    raise ValueError(f"Unknown target state {t} in row ({s}, {l})")
                if weight < 0:
                    raise ValueError(f"Negative probability {weight} on ({s}, {l}, {t})")
                if weight:
                    self._note_target_sort(l, t)
                    cleaned[t] = cleaned.get(t, Fraction(0)) + weight
            if cleaned:
                self._trans[(s, l)] = cleaned
        for (s, l), value in (slack or {}).items():
            self._check_row_source(s, l)
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"Negative slack {value} on row ({s}, {l})")
            if value:
                self._slack[(s, l)] = value
        for key in set(self._trans) | set(self._slack):
            total = sum(self._trans.get(key, {}).values(), Fraction(0)) + self.slack(*key)
            if total > 1:
                raise ValueError(f"Row {key} has total mass {total} > 1")

    def _check_row_source(self, s: int, l: int):
        if not 0 <= s < self.n_states:
            raise ValueError(f"Unknown state {s}")
        if not 0 <= l < self.n_labels:
            raise ValueError(f"Unknown label {l}")
        if self.label_sorts[l] != self.state_sorts[s]:
            raise ValueError(
                f"Label {l} applies to sort {self.label_sorts[l]}, "
                f"but state {s} has sort {self.state_sorts[s]}"
            )

    def _note_target_sort(self, l: int, t: int):
        sort = self.state_sorts[t]
        known = self._target_sorts.setdefault(l, sort)
        if known != sort:
            raise ValueError(f"Label {l} reaches states of sorts {known} and {sort}")

    @property
    def n_states(self) -> int:
        return len(self.state_sorts)

    @property
    def n_labels(self) -> int:
        return len(self.label_sorts)

    @property
    def sorts(self) -> List[int]:
        return sorted(set(self.state_sorts))

    @property
    def is_exact(self) -> bool:
        return not self._slack

    def sort_of(self, s: int) -> int:
        return self.state_sorts[s]

    def states_of_sort(self, sort: int) -> List[int]:
        return [s for s, k in enumerate(self.state_sorts) if k == sort]

    def labels_for(self, s: int) -> List[int]:
        sort = self.state_sorts[s]
        return [l for l, k in enumerate(self.label_sorts) if k == sort]

    def target_sort(self, l: int) -> Optional[int]:
        return self._target_sorts.get(l)

    def row(self, s: int, l: int) -> Dict[int, Fraction]:
        return dict(self._trans.get((s, l), {}))

    def slack(self, s: int, l: int) -> Fraction:
        return self._slack.get((s, l), Fraction(0))

    def prob(self, s: int, l: int, t: int) -> Fraction:
        return self._trans.get((s, l), {}).get(t, Fraction(0))

    def mass(self, s: int, l: int, block: Optional[AbstractSet[int]] = None) -> Fraction:
        """``P(s, l, block)``; the whole row when ``block`` is ``None``."""
        row = self._trans.get((s, l), {})
        return sum(
            (w for t, w in row.items() if block is None or t in block), Fraction(0)
        )

    def rows(self) -> Iterator[Tuple[Tuple[int, int], Dict[int, Fraction]]]:
        for key in sorted(self._trans):
            yield key, dict(self._trans[key])

    def slack_rows(self) -> Iterator[Tuple[Tuple[int, int], Fraction]]:
        for key in sorted(self._slack):
            yield key, self._slack[key]

    def __repr__(self):
        return f"MLMC(states={self.n_states}, labels={self.n_labels}, rows={len(self._trans)})"


class StateRelation:
    """A binary relation over the states ``0..n_states-1``."""

    def __init__(self, pairs: Iterable[Pair], n_states: int):
        self.n_states = n_states
        self.pairs: FrozenSet[Pair] = frozenset((int(s), int(t)) for s, t in pairs)
        for s, t in self.pairs:
            if not (0 <= s < n_states and 0 <= t < n_states):
                raise ValueError(f"Pair ({s}, {t}) is outside 0..{n_states - 1}")

    @classmethod
    def identity(cls, n_states: int) -> "StateRelation":
        return cls(((s, s) for s in range(n_states)), n_states)

    @classmethod
    def same_sort(cls, chain: MLMC) -> "StateRelation":
        """The full sort-respecting relation."""
        return cls(
            (
                (s, t)
                for s in range(chain.n_states)
                for t in range(chain.n_states)
                if chain.sort_of(s) == chain.sort_of(t)
            ),
            chain.n_states,
        )

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateRelation):
            return NotImplemented
        return self.n_states == other.n_states and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.n_states, self.pairs))

    def __repr__(self):
        return f"StateRelation({sorted(self.pairs)}, n_states={self.n_states})"

    def image(self, states: Iterable[int]) -> FrozenSet[int]:
        """``R(X)``: every state related to some state of ``X``."""
        states = set(states)
        return frozenset(t for s, t in self.pairs if s in states)

    def inverse(self) -> "StateRelation":
        return StateRelation(((t, s) for s, t in self.pairs), self.n_states)

    def union(self, other: "StateRelation") -> "StateRelation":
        return StateRelation(self.pairs | other.pairs, self.n_states)

    def intersection(self, other: "StateRelation") -> "StateRelation":
        return StateRelation(self.pairs & other.pairs, self.n_states)

    def reflexive_closure(self) -> "StateRelation":
        return StateRelation(self.pairs | {(s, s) for s in range(self.n_states)}, self.n_states)

    def symmetric_closure(self) -> "StateRelation":
        return StateRelation(self.pairs | self.inverse().pairs, self.n_states)

    def transitive_closure(self) -> "StateRelation":
        successors: Dict[int, Set[int]] = {}
        for s, t in self.pairs:
            successors.setdefault(s, set()).add(t)
        closure = set()
        for start in successors:
            seen: Set[int] = set()
            frontier = list(successors[start])
            while frontier:
                node = frontier.pop()
                if node in seen:
                    continue
                seen.add(node)
                frontier.extend(successors.get(node, ()))
            closure.update((start, t) for t in seen)
        return StateRelation(closure, self.n_states)

    def preorder_closure(self) -> "StateRelation":
        return self.reflexive_closure().transitive_closure()

    def equivalence_closure(self) -> "StateRelation":
        return self.symmetric_closure().preorder_closure()

    def is_reflexive(self) -> bool:
        return all((s, s) in self.pairs for s in range(self.n_states))

    def is_symmetric(self) -> bool:
        return all((t, s) in self.pairs for s, t in self.pairs)

    def is_transitive(self) -> bool:
        return self.transitive_closure().pairs == self.pairs

    @property
    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    @property
    def is_equivalence(self) -> bool:
        return self.is_preorder and self.is_symmetric()

    def mixed_pair(self, chain: MLMC) -> Optional[Pair]:
        """The first pair relating states of different sorts, if any."""
        for s, t in sorted(self.pairs):
            if chain.sort_of(s) != chain.sort_of(t):
                return (s, t)
        return None


class Partition:
    """Disjoint nonempty blocks covering ``0..n_states-1``, ordered by least state."""

    def __init__(self, blocks: Iterable[Iterable[int]], n_states: int):
        ordered = sorted((frozenset(b) for b in blocks), key=min_state)
        seen: Set[int] = set()
        for block in ordered:
            if not block:
                raise ValueError("Partition blocks must be nonempty")
            if seen & block:
                raise ValueError(f"Blocks overlap on states {sorted(seen & block)}")
            seen |= block
        if seen != set(range(n_states)):
            raise ValueError(f"Blocks do not cover the states 0..{n_states - 1}")
        self.blocks: Tuple[FrozenSet[int], ...] = tuple(ordered)
        self.n_states = n_states

    @classmethod
    def by_sort(cls, chain: MLMC) -> "Partition":
        return cls((chain.states_of_sort(k) for k in chain.sorts), chain.n_states)

    @classmethod
    def from_relation(cls, relation: StateRelation) -> "Partition":
        if not relation.is_equivalence:
            raise ValueError("Only an equivalence relation induces a partition")
        blocks = {relation.image([s]) for s in range(relation.n_states)}
        return cls(blocks, relation.n_states)

    def to_relation(self) -> StateRelation:
        return StateRelation(
            ((s, t) for block in self.blocks for s in block for t in block), self.n_states
        )

    def block_of(self, s: int) -> FrozenSet[int]:
        for block in self.blocks:
            if s in block:
                return block
        raise ValueError(f"State {s} is not covered")

    def same_block(self, s: int, t: int) -> bool:
        return t in self.block_of(s)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[FrozenSet[int]]:
        return iter(self.blocks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.blocks == other.blocks

    def __repr__(self):
        return f"Partition({[sorted(b) for b in self.blocks]})"


def min_state(block: AbstractSet[int]) -> int:
    return min(block) if block else -1


@dataclass(frozen=True)
class RelationCheck:
    """Verdict of a relation check; truthy when the relation passes."""

    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class SplitRecord:
    """One refinement split: ``block`` separated by ``label`` into ``splitter``."""

    block: FrozenSet[int]
    label: int
    splitter: FrozenSet[int]
    pieces: Tuple[FrozenSet[int], ...]
    intervals: Tuple[Tuple[int, Fraction, Fraction], ...]


class Refinement(NamedTuple):
    partition: Partition
    trace: List[SplitRecord]


def _intervals(chain: MLMC, block, label, splitter):
    bounds = []
    for s in sorted(block):
        low = chain.mass(s, label, splitter)
        bounds.append((s, low, low + chain.slack(s, label)))
    return bounds


def _overlap_components(bounds) -> List[FrozenSet[int]]:
    """Connected components of the interval overlap graph, by a sweep on lower ends."""
    ordered = sorted(bounds, key=lambda item: (item[1], item[0]))
    components: List[Set[int]] = []
    reach = None
    for s, low, high in ordered:
        if reach is None or low > reach:
            components.append({s})
            reach = high
        else:
            components[-1].add(s)
            reach = max(reach, high)
    return sorted((frozenset(c) for c in components), key=min_state)


def _find_split(chain: MLMC, block, blocks) -> Optional[SplitRecord]:
    representative = min(block)
    for label in chain.labels_for(representative):
        for splitter in blocks:
            bounds = _intervals(chain, block, label, splitter)
            pieces = _overlap_components(bounds)
            if len(pieces) > 1:
                return SplitRecord(block, label, splitter, tuple(pieces), tuple(bounds))
    return None


def refine_partition(chain: MLMC, initial: Optional[Partition] = None) -> Refinement:
    """Split blocks until no label and block distinguish two states of a block.

    Two states are separated only when their probability intervals
    ``[P(s,l,B), P(s,l,B) + slack(s,l)]`` fall in different overlap components,
    so every split is sound for any completion of the slack. Blocks and labels
    are tried in a fixed order, which makes the trace reproducible.
    """
    partition = initial or Partition.by_sort(chain)
    blocks = list(partition.blocks)
    trace: List[SplitRecord] = []
    rounds = 0
    while True:
        rounds += 1
        record = None
        for block in blocks:
            if len(block) > 1:
                record = _find_split(chain, block, blocks)
                if record is not None:
                    break
        if record is None:
            break
        _logger.debug(
            "Round %d: label %d splits %s into %s",
            rounds,
            record.label,
            sorted(record.block),
            [sorted(p) for p in record.pieces],
        )
        blocks.remove(record.block)
        blocks.extend(record.pieces)
        blocks.sort(key=min_state)
        trace.append(record)
    return Refinement(Partition(blocks, chain.n_states), trace)


def verify_refinement(chain: MLMC, trace: Sequence[SplitRecord]) -> bool:
    """Replay a split trace, re-checking that every split separates disjoint intervals."""
    blocks = list(Partition.by_sort(chain).blocks)
    for record in trace:
        if record.block not in blocks or record.splitter not in blocks:
            return False
        if frozenset().union(*record.pieces) != record.block:
            return False
        bounds = {s: (low, high) for s, low, high in _intervals(chain, record.block, record.label, record.splitter)}
        for first, second in itertools.combinations(record.pieces, 2):
            for s in first:
                for t in second:
                    (a, b), (c, d) = bounds[s], bounds[t]
                    if not (b < c or d < a):
                        return False
        blocks.remove(record.block)
        blocks.extend(record.pieces)
    return True


def bisim_partition(chain: MLMC) -> Partition:
    """The coarsest partition whose blocks agree on ``P(·, l, B)`` for all ``l`` and ``B``."""
    return refine_partition(chain).partition


def check_bisimulation(chain: MLMC, r: StateRelation, close: bool = False) -> RelationCheck:
    """Check that ``r`` is a probabilistic bisimulation.

    Parameters
    ----------
    chain: MLMC
        An exact chain.
    r: StateRelation
        The candidate relation.
    close: bool
        Replace ``r`` by its equivalence closure instead of rejecting it when it
        is not an equivalence.
    """
    mixed = r.mixed_pair(chain)
    if mixed is not None:
        return RelationCheck(False, "relation mixes sorts", mixed)
    if close:
        r = r.equivalence_closure()
    elif not r.is_equivalence:
        return RelationCheck(False, "not an equivalence relation")
    classes = Partition.from_relation(r)
    for block in classes:
        states = sorted(block)
        first = states[0]
        for other in states[1:]:
            for label in chain.labels_for(first):
                for target in classes:
                    if chain.mass(first, label, target) != chain.mass(other, label, target):
                        return RelationCheck(
                            False,
                            f"mass mismatch at ({first},{other},{label},{sorted(target)})",
                            (first, other, label, target),
                        )
    return RelationCheck(True)


def _preorder_failure(chain: MLMC, r: StateRelation) -> Optional[RelationCheck]:
    mixed = r.mixed_pair(chain)
    if mixed is not None:
        return RelationCheck(False, "relation mixes sorts", mixed)
    if not r.is_preorder:
        return RelationCheck(False, "not a preorder")
    return None


def check_simulation_bruteforce(chain: MLMC, r: StateRelation) -> RelationCheck:
    """Check ``P(s,l,X) <= P(t,l,R(X))`` literally for every related pair.

    Only subsets of the support of ``P(s,l,·)`` are enumerated: any other ``X``
    has the same left side as its intersection with the support and a larger
    right side.

    Raises
    ------
    ValueError
        If the chain has more than ``BRUTEFORCE_LIMIT`` states.
    """
    if chain.n_states > BRUTEFORCE_LIMIT:
        raise ValueError(
            f"Subset enumeration is limited to {BRUTEFORCE_LIMIT} states, got {chain.n_states}"
        )
    failure = _preorder_failure(chain, r)
    if failure is not None:
        return failure
    for s, t in r:
        for label in chain.labels_for(s):
            support = sorted(chain.row(s, label))
            for count in range(1, len(support) + 1):
                for subset in itertools.combinations(support, count):
                    left = chain.mass(s, label, subset)
                    right = chain.mass(t, label, r.image(subset)) + chain.slack(t, label)
                    if left > right:
                        return RelationCheck(
                            False,
                            f"mass {format_fraction(left)} > {format_fraction(right)} "
                            f"at ({s},{t},{label},{list(subset)})",
                            (s, t, label, frozenset(subset)),
                        )
    return RelationCheck(True)


def simulation_condition(
    chain: MLMC, s: int, t: int, label: int, related: Callable[[int, int], bool]
) -> Tuple[Fraction, Fraction]:
    """Mass required from ``s`` and the maximum flow ``t`` can match under ``related``."""
    row = chain.row(s, label)
    required = sum(row.values(), Fraction(0))
    if not required:
        return required, required
    target_row = chain.row(t, label)
    slack = chain.slack(t, label)
    if len(row) == 1:
        (u,) = row
        reachable = sum((w for v, w in target_row.items() if related(u, v)), Fraction(0))
        return required, min(required, reachable + slack)
    return required, transport_value(row, target_row, related, slack)


def check_simulation_flow(chain: MLMC, r: StateRelation) -> RelationCheck:
    """Check that the preorder ``r`` is a simulation via one maximum flow per pair and label."""
    failure = _preorder_failure(chain, r)
    if failure is not None:
        return failure
    related = r.__contains__
    for s, t in r:
        for label in chain.labels_for(s):
            required, achieved = simulation_condition(chain, s, t, label, lambda u, v: related((u, v)))
            if achieved < required:
                return RelationCheck(
                    False,
                    f"flow {format_fraction(achieved)} < {format_fraction(required)} at ({s},{t},{label})",
                    (s, t, label, required, achieved),
                )
    return RelationCheck(True)


@dataclass(frozen=True)
class Removal:
    """A pair dropped during simulation refinement, with the flow it lacked."""

    round: int
    pair: Pair
    label: int
    required: Fraction
    achieved: Fraction


@dataclass(frozen=True)
class SimulationResult:
    relation: StateRelation
    removals: Tuple[Removal, ...] = field(default=())


def _failing_label(chain: MLMC, pair: Pair, current: FrozenSet[Pair]):
    s, t = pair
    for label in chain.labels_for(s):
        required, achieved = simulation_condition(
            chain, s, t, label, lambda u, v: (u, v) in current
        )
        if achieved < required:
            return label, required, achieved
    return None


def greatest_simulation(
    chain: MLMC,
    candidates: Optional[Iterable[Pair]] = None,
    jobs: int = 1,
) -> SimulationResult:
    """The largest simulation contained in ``candidates``.

    Rounds check every remaining pair against the relation as it stood at the
    start of the round, then drop all failing pairs at once. Per-pair checks are
    independent and run on ``jobs`` threads; results are merged in pair order.
    """
    if candidates is None:
        current = StateRelation.same_sort(chain).pairs
    else:
        current = frozenset(
            p for p in candidates if chain.sort_of(p[0]) == chain.sort_of(p[1])
        )
    removals: List[Removal] = []
    round_index = 0
    while True:
        round_index += 1
        pairs = sorted(current)
        snapshot = current
        if jobs > 1 and len(pairs) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(lambda p: _failing_label(chain, p, snapshot), pairs))
        else:
            outcomes = [_failing_label(chain, p, snapshot) for p in pairs]
        failing = [
            Removal(round_index, pair, *outcome)
            for pair, outcome in zip(pairs, outcomes)
            if outcome is not None
        ]
        if not failing:
            break
        _logger.debug("Round %d removes %d pairs", round_index, len(failing))
        removals.extend(failing)
        current = current - {removal.pair for removal in failing}
    return SimulationResult(StateRelation(current, chain.n_states), tuple(removals))


def largest_simulation(chain: MLMC) -> StateRelation:
    """Similarity: the union of all simulations, itself a preorder."""
    return greatest_simulation(chain).relation


def verify_removals(
    chain: MLMC,
    removals: Sequence[Removal],
    candidates: Optional[Iterable[Pair]] = None,
) -> bool:
    """Replay the removals of :func:`greatest_simulation`, re-checking each flow deficit."""
    if candidates is None:
        current = StateRelation.same_sort(chain).pairs
    else:
        current = frozenset(candidates)
    for _, group in itertools.groupby(removals, key=lambda removal: removal.round):
        group = list(group)
        for removal in group:
            if removal.pair not in current:
                return False
            s, t = removal.pair
            required, achieved = simulation_condition(
                chain, s, t, removal.label, lambda u, v: (u, v) in current
            )
            if achieved >= required or (required, achieved) != (removal.required, removal.achieved):
                return False
        current = current - {removal.pair for removal in group}
    return True


def parse_lmc(text: str) -> MLMC:
    """Read the LMC text format.

    The first non-comment line is ``states N sorts K labels M``; the remaining
    lines are ``sort s k``, ``label l k``, ``trans s l t a/b`` and ``slack s l a/b``.
    States without a ``sort`` line have sort 0. ``#`` starts a comment.

    Raises
    ------
    ValueError
        On a malformed line, naming its line number.
    """
    header = None
    state_sorts: List[int] = []
    label_sorts: List[int] = []
    trans: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    slack: Dict[Tuple[int, int], Fraction] = {}
    n_sorts = 1
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if header is None:
                if len(words) != 6 or words[0::2] != ["states", "sorts", "labels"]:
                    raise ValueError("expected 'states N sorts K labels M'")
                header = [int(w) for w in words[1::2]]
                n_states, n_sorts, n_labels = header
                state_sorts = [0] * n_states
                label_sorts = [0] * n_labels
            elif words[0] == "sort" and len(words) == 3:
                state_sorts[_index(words[1], len(state_sorts))] = _index(words[2], n_sorts)
            elif words[0] == "label" and len(words) == 3:
                label_sorts[_index(words[1], len(label_sorts))] = _index(words[2], n_sorts)
            elif words[0] == "trans" and len(words) == 5:
                s, l, t = (int(w) for w in words[1:4])
                row = trans.setdefault((s, l), {})
                row[t] = row.get(t, Fraction(0)) + parse_fraction(words[4])
            elif words[0] == "slack" and len(words) == 4:
                slack[(int(words[1]), int(words[2]))] = parse_fraction(words[3])
            else:
                raise ValueError(f"unrecognised line {line!r}")
        except ValueError as err:
            raise ValueError(f"line {number}: {err}") from err
    if header is None:
        raise ValueError("missing 'states N sorts K labels M' header")
    return MLMC(state_sorts, label_sorts, trans, slack)


def _index(word: str, bound: int) -> int:
    value = int(word)
    if not 0 <= value < bound:
        raise ValueError(f"index {value} out of range 0..{bound - 1}")
    return value


def format_lmc(chain: MLMC) -> str:
    lines = [
        f"states {chain.n_states} sorts {max(chain.sorts, default=0) + 1} labels {chain.n_labels}"
    ]
    lines += [f"sort {s} {k}" for s, k in enumerate(chain.state_sorts)]
    lines += [f"label {l} {k}" for l, k in enumerate(chain.label_sorts)]
    for (s, l), row in chain.rows():
        lines += [f"trans {s} {l} {t} {format_fraction(w)}" for t, w in sorted(row.items())]
    lines += [f"slack {s} {l} {format_fraction(w)}" for (s, l), w in chain.slack_rows()]
    return "\n".join(lines) + "\n"
