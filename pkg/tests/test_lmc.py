import itertools
from fractions import Fraction

import pytest

from plambda.lmc import (
    MLMC,
    Partition,
    StateRelation,
    bisim_partition,
    check_bisimulation,
    check_simulation_bruteforce,
    check_simulation_flow,
    format_lmc,
    greatest_simulation,
    largest_simulation,
    parse_lmc,
    refine_partition,
    verify_refinement,
    verify_removals,
)

# State 0 moves to 1 or 2; state 3 reaches 4 with probability 1/2 and 1 with 1/4.
# States 1, 2 and 4 stop; 5 is the only state of the second sort.
CHAIN_TEXT = """\
# a small two-sorted chain
states 6 sorts 2 labels 2
sort 5 1
label 1 1
trans 0 0 1 1/2
trans 0 0 2 1/2
trans 3 0 4 1/2
trans 3 0 1 1/4
trans 5 1 5 1/2
"""


@pytest.fixture(scope="module")
def coin_chain():
    return parse_lmc(CHAIN_TEXT)


def test_parse_lmc(coin_chain):
    assert coin_chain.n_states == 6
    assert coin_chain.n_labels == 2
    assert coin_chain.sort_of(5) == 1
    assert coin_chain.mass(0, 0) == 1
    assert coin_chain.prob(3, 0, 1) == Fraction(1, 4)
    assert coin_chain.is_exact
    assert parse_lmc(format_lmc(coin_chain)).mass(3, 0) == Fraction(3, 4)


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("trans 0 0 0 1/2", "line 1: expected 'states N sorts K labels M'"),
        ("states 1 sorts 1 labels 1\ntrans 0 0 0 3/2", "total mass"),
        ("states 1 sorts 1 labels 1\nfoo 1", "line 2: unrecognised line"),
        ("states 2 sorts 2 labels 1\nsort 1 1\ntrans 1 0 0 1/2", "applies to sort 0"),
        ("states 1 sorts 1 labels 1\nsort 3 0", "line 2: index 3 out of range"),
    ],
)
def test_parse_lmc_errors(text, message):
    with pytest.raises(ValueError, match=message):
        parse_lmc(text)


def test_mixed_target_sorts():
    with pytest.raises(ValueError, match="reaches states of sorts"):
        MLMC([0, 0, 1], [0], {(0, 0): {1: Fraction(1, 2)}, (1, 0): {2: Fraction(1, 2)}})


def test_coin_bisimulation(coin_chain):
    partition = bisim_partition(coin_chain)
    assert partition.same_block(1, 2)
    assert partition.same_block(1, 4)
    assert not partition.same_block(0, 3)
    assert check_bisimulation(coin_chain, partition.to_relation())
    refinement = refine_partition(coin_chain)
    assert verify_refinement(coin_chain, refinement.trace)
    failing = check_bisimulation(coin_chain, Partition.by_sort(coin_chain).to_relation())
    assert not failing
    assert "mass mismatch" in failing.reason


def test_coin_simulation(coin_chain):
    similarity = largest_simulation(coin_chain)
    # 3 moves with probability 3/4, 0 with probability 1
    assert (3, 0) in similarity
    assert (0, 3) not in similarity
    assert check_simulation_flow(coin_chain, similarity)
    assert check_simulation_bruteforce(coin_chain, similarity)
    result = greatest_simulation(coin_chain)
    assert verify_removals(coin_chain, result.removals)


def test_relation_checks_reject_non_preorders(coin_chain):
    relation = StateRelation([(0, 1)], coin_chain.n_states)
    assert check_simulation_flow(coin_chain, relation).reason == "not a preorder"
    assert check_bisimulation(coin_chain, relation).reason == "not an equivalence relation"
    mixed = StateRelation.identity(coin_chain.n_states).union(StateRelation([(0, 5)], 6))
    assert check_simulation_flow(coin_chain, mixed).reason == "relation mixes sorts"


def test_flow_equals_bruteforce(random_chains):
    for chain in random_chains:
        for relation in (
            StateRelation.identity(chain.n_states),
            StateRelation.same_sort(chain),
            largest_simulation(chain),
        ):
            assert bool(check_simulation_flow(chain, relation)) == bool(
                check_simulation_bruteforce(chain, relation)
            )


def test_similarity_is_a_simulation(random_chains):
    for chain in random_chains:
        similarity = largest_simulation(chain)
        assert similarity.is_preorder
        assert check_simulation_bruteforce(chain, similarity)


def test_simulation_equivalence_is_bisimilarity(random_chains):
    for chain in random_chains:
        similarity = largest_simulation(chain)
        assert similarity.intersection(similarity.inverse()) == bisim_partition(chain).to_relation()


def test_bisimulation_is_coarsest(random_chains):
    for chain in random_chains[:100]:
        partition = bisim_partition(chain)
        assert check_bisimulation(chain, partition.to_relation())
        for first, second in itertools.combinations(partition.blocks, 2):
            if chain.sort_of(min(first)) != chain.sort_of(min(second)):
                continue
            merged = [b for b in partition.blocks if b not in (first, second)] + [first | second]
            assert not check_bisimulation(chain, Partition(merged, chain.n_states).to_relation())


def test_parallel_simulation(random_chains):
    for chain in random_chains[:50]:
        assert greatest_simulation(chain, jobs=3).relation == largest_simulation(chain)


def test_partition_validation():
    with pytest.raises(ValueError, match="overlap"):
        Partition([[0, 1], [1]], 2)
    with pytest.raises(ValueError, match="do not cover"):
        Partition([[0]], 2)
    with pytest.raises(ValueError, match="outside"):
        StateRelation([(0, 3)], 2)
