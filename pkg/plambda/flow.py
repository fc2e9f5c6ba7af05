"""Exact maximum flow and the disentangling of probability assignments.

Maximum flows are computed by :func:`networkx.algorithms.flow.edmonds_karp` on
:class:`fractions.Fraction` capacities, so values and cuts are exact.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Hashable, Iterator, List, Mapping, NamedTuple, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

__all__ = [
    "UNBOUNDED",
    "FlowNetwork",
    "FlowResult",
    "max_flow",
    "cut_capacity",
    "enumerate_cuts",
    "transport_value",
    "ProbabilityAssignment",
    "DisentangleResult",
    "build_disentangling_network",
    "disentangle",
    "verify_disentanglement",
]

_logger = logging.getLogger(__name__)


class _Unbounded:
    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()

SOURCE = "source"
TARGET = "target"


class FlowNetwork:
    """A directed network with rational (or unbounded) capacities.

    Adding an edge twice sums the capacities, so the network never has parallel
    edges.
    """

    def __init__(self, source: Hashable = SOURCE, target: Hashable = TARGET):
        if source == target:
            raise ValueError("Source and target must differ")
        self.graph = nx.DiGraph()
        self.graph.add_node(source)
        self.graph.add_node(target)
        self.source = source
        self.target = target

    def add_node(self, node: Hashable):
        self.graph.add_node(node)

    def add_edge(self, u: Hashable, v: Hashable, capacity):
        if capacity is not UNBOUNDED:
            capacity = Fraction(capacity)
            if capacity < 0:
                raise ValueError(f"Negative capacity {capacity} on edge {u!r} -> {v!r}")
        if self.graph.has_edge(u, v):
            previous = self.graph[u][v]["capacity"]
            if previous is UNBOUNDED or capacity is UNBOUNDED:
                capacity = UNBOUNDED
            else:
                capacity = previous + capacity
        self.graph.add_edge(u, v, capacity=capacity)

    @property
    def nodes(self) -> List[Hashable]:
        return list(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[Hashable, Hashable]]:
        return list(self.graph.edges)

    def capacity(self, u: Hashable, v: Hashable):
        return self.graph[u][v]["capacity"]

    def unbounded_value(self) -> Fraction:
        """A finite stand-in for unbounded capacities that can never bind."""
        finite = (
            c for _, _, c in self.graph.edges(data="capacity") if c is not UNBOUNDED
        )
        return sum(finite, Fraction(0)) + 1

    def resolved(self) -> nx.DiGraph:
        bound = self.unbounded_value()
        graph = nx.DiGraph()
        graph.add_nodes_from(self.graph.nodes)
        for u, v, capacity in self.graph.edges(data="capacity"):
            graph.add_edge(u, v, capacity=bound if capacity is UNBOUNDED else capacity)
        return graph


class FlowResult(NamedTuple):
    value: Fraction
    flow: Dict[Tuple[Hashable, Hashable], Fraction]
    cut: FrozenSet[Hashable]
    cut_capacity: Fraction


def max_flow(net: FlowNetwork) -> FlowResult:
    """Compute a maximum flow and a minimum cut certifying it.

    Returns
    -------
    FlowResult
        ``value`` is the flow value, ``flow`` maps every edge to its flow,
        ``cut`` is the source side of a saturated cut and ``cut_capacity``
        its capacity, which equals ``value``.
    """
    graph = net.resolved()
    residual = edmonds_karp(graph, net.source, net.target, capacity="capacity")
    value = Fraction(residual.graph["flow_value"])
    flow = {
        (u, v): Fraction(max(residual[u][v]["flow"], 0)) for u, v in graph.edges
    }
    reachable = {net.source}
    frontier = [net.source]
    while frontier:
        u = frontier.pop()
        for v, attr in residual[u].items():
            if v not in reachable and attr["capacity"] - attr["flow"] > 0:
                reachable.add(v)
                frontier.append(v)
    cut = frozenset(reachable)
    return FlowResult(value, flow, cut, cut_capacity(net, cut))


def cut_capacity(net: FlowNetwork, source_side) -> Fraction:
    bound = net.unbounded_value()
    total = Fraction(0)
    for u, v, capacity in net.graph.edges(data="capacity"):
        if u in source_side and v not in source_side:
            total += bound if capacity is UNBOUNDED else capacity
    return total


def enumerate_cuts(net: FlowNetwork) -> Iterator[FrozenSet[Hashable]]:
    """Every source side of an s-t cut. Exponential; meant for small networks."""
    inner = [node for node in net.graph.nodes if node not in (net.source, net.target)]
    for count in range(len(inner) + 1):
        for chosen in itertools.combinations(inner, count):
            yield frozenset((net.source,) + chosen)


def transport_value(
    supply: Mapping[Hashable, Fraction],
    demand: Mapping[Hashable, Fraction],
    related: Callable[[Hashable, Hashable], bool],
    slack=0,
) -> Fraction:
    """Maximum mass movable from ``supply`` to ``demand`` along related pairs.

    Every supply point may also send mass to a slack node of capacity ``slack``.
    """
    if not any(supply.values()):
        return Fraction(0)
    net = FlowNetwork()
    for u, amount in supply.items():
        net.add_edge(net.source, ("supply", u), amount)
        for v in demand:
            if related(u, v):
                net.add_edge(("supply", u), ("demand", v), UNBOUNDED)
        if slack:
            net.add_edge(("supply", u), "slack", UNBOUNDED)
    for v, amount in demand.items():
        net.add_edge(("demand", v), net.target, amount)
    if slack:
        net.add_edge("slack", net.target, slack)
    return max_flow(net).value


@dataclass(frozen=True)
class ProbabilityAssignment:
    """Masses ``p_1..p_n`` and subset masses ``r_I`` for nonempty ``I ⊆ {1..n}``."""

    n: int
    p: Tuple[Fraction, ...]
    r: Mapping[FrozenSet[int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1 or len(self.p) != self.n:
            raise ValueError(f"Expected {self.n} masses p_i, got {len(self.p)}")
        for index, value in enumerate(self.p, start=1):
            if not 0 <= value <= 1:
                raise ValueError(f"p_{index} = {value} is not in [0, 1]")
        universe = set(range(1, self.n + 1))
        for subset, value in self.r.items():
            if not subset or not subset <= universe:
                raise ValueError(f"Invalid subset {sorted(subset)} for n = {self.n}")
            if not 0 <= value <= 1:
                raise ValueError(f"r_{_subset_text(subset)} = {value} is not in [0, 1]")

    def mass(self, index: int) -> Fraction:
        return self.p[index - 1]

    def subset_mass(self, subset: FrozenSet[int]) -> Fraction:
        return self.r.get(subset, Fraction(0))

    def subsets(self) -> List[FrozenSet[int]]:
        """Nonempty subsets ordered by size, then lexicographically."""
        indices = range(1, self.n + 1)
        return [
            frozenset(chosen)
            for count in range(1, self.n + 1)
            for chosen in itertools.combinations(indices, count)
        ]

    def violation(self):
        """The first subset breaking the covering inequalities, or ``None``."""
        for subset in self.subsets():
            covered = sum(
                (self.subset_mass(other) for other in self.subsets() if other & subset),
                Fraction(0),
            )
            if sum(self.mass(i) for i in subset) > covered or covered > 1:
                return subset
        return None


@dataclass(frozen=True)
class DisentangleResult:
    s: Mapping[Tuple[int, FrozenSet[int]], Fraction]

    def share(self, k: int, subset: FrozenSet[int]) -> Fraction:
        return self.s.get((k, subset), Fraction(0))


def _subset_text(subset) -> str:
    return "{" + ",".join(str(i) for i in sorted(subset)) + "}"


def _node(subset: FrozenSet[int]) -> Tuple[int, ...]:
    return tuple(sorted(subset))


def build_disentangling_network(pa: ProbabilityAssignment) -> FlowNetwork:
    """The flow network of a probability assignment.

    Nodes are the nonempty subsets plus source and target. The source feeds each
    singleton ``{i}`` with capacity ``p_i``, each subset ``I`` feeds ``I ∪ {i}``
    with capacity 1, and each ``I`` drains into the target with capacity ``r_I``.

    Raises
    ------
    ValueError
        If ``pa`` violates the covering inequalities; the message names the subset.
    """
    failing = pa.violation()
    if failing is not None:
        raise ValueError(
            f"Not a probability assignment: the inequality fails for I = {_subset_text(failing)}"
        )
    net = FlowNetwork()
    for subset in pa.subsets():
        net.add_node(_node(subset))
    for index in range(1, pa.n + 1):
        net.add_edge(net.source, (index,), pa.mass(index))
    for subset in pa.subsets():
        for index in range(1, pa.n + 1):
            if index not in subset:
                net.add_edge(_node(subset), _node(subset | {index}), 1)
        net.add_edge(_node(subset), net.target, pa.subset_mass(subset))
    return net


def disentangle(pa: ProbabilityAssignment) -> DisentangleResult:
    """Split every ``r_I`` into shares ``s_{k,I}`` covering the masses ``p_k``.

    A maximum flow saturating the source edges is decomposed by index: subsets are
    visited by size then lexicographically, and each one passes its incoming
    per-index flow on to its out-edges in proportion to their flow.

    Returns
    -------
    DisentangleResult
        Shares with ``Σ_{k∈I} s_{k,I} ≤ 1`` and ``p_k ≤ Σ_{I∋k} s_{k,I} r_I``.

    Raises
    ------
    ValueError
        If ``pa`` is not a probability assignment.
    """
    net = build_disentangling_network(pa)
    result = max_flow(net)
    expected = sum(pa.p, Fraction(0))
    if result.value != expected:
        raise ValueError(
            f"Assignment invariant violated: maximum flow {result.value} is below {expected}"
        )
    incoming: Dict[Tuple[int, ...], Dict[int, Fraction]] = {
        _node(subset): {} for subset in pa.subsets()
    }
    for index in range(1, pa.n + 1):
        incoming[(index,)][index] = result.flow[(net.source, (index,))]
    shares: Dict[Tuple[int, FrozenSet[int]], Fraction] = {}
    for subset in pa.subsets():
        node = _node(subset)
        components = incoming[node]
        total = sum(components.values(), Fraction(0))
        drained = result.flow[(node, net.target)]
        for k in sorted(subset):
            shares[(k, subset)] = Fraction(0)
        if not total:
            continue
        for successor in net.graph.successors(node):
            amount = result.flow[(node, successor)]
            if not amount:
                continue
            for k, part in components.items():
                portion = part * amount / total
                if successor == net.target:
                    shares[(k, subset)] = portion / drained
                else:
                    incoming[successor][k] = incoming[successor].get(k, Fraction(0)) + portion
    _logger.debug("Disentangled %d shares with flow value %s", len(shares), result.value)
    return DisentangleResult(shares)


def verify_disentanglement(pa: ProbabilityAssignment, result: DisentangleResult) -> bool:
    """Check both disentangling conditions literally."""
    if any(value < 0 for value in result.s.values()):
        return False
    for subset in pa.subsets():
        if sum((result.share(k, subset) for k in subset), Fraction(0)) > 1:
            return False
    for k in range(1, pa.n + 1):
        covered = sum(
            (result.share(k, subset) * pa.subset_mass(subset) for subset in pa.subsets() if k in subset),
            Fraction(0),
        )
        if pa.mass(k) > covered:
            return False
    return True
