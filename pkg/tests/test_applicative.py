from fractions import Fraction

import pytest

from plambda.applicative import (
    TERM_SORT,
    VALUE_SORT,
    IndistinguishableUpToBound,
    NotBisimilar,
    NotSimilar,
    adequacy_check,
    build_applicative_lmc,
    check_bounded_bisim,
    check_bounded_sim,
    default_arguments,
    replay_certificate,
)
from plambda.syntax import Var, parse_definitions, parse_term

DEFINITIONS = """\
L = \\z. OMEGA
P = \\y. \\z. OMEGA
M = \\x. L (+) P
N = (\\x. L) (+) (\\x. P)
"""


@pytest.fixture(scope="module")
def counting_env():
    return parse_definitions(DEFINITIONS)


def test_default_arguments():
    args = default_arguments()
    assert len(args) == 6
    assert all(not arg.free_vars for arg in args)


def test_identity_chain():
    identity = parse_term("I")
    chain = build_applicative_lmc([identity])
    assert chain.sort_of(0) == TERM_SORT
    assert chain.row(0, 0) == {chain.value_state(identity): Fraction(1)}
    assert chain.sort_of(chain.value_state(identity)) == VALUE_SORT
    assert chain.residual(0) == 0
    assert chain.n_labels == 7


def test_call_by_value_labels():
    chain = build_applicative_lmc([parse_term("I")], strategy="cbv")
    # the two choices among the default arguments are not values
    assert chain.n_labels == 5
    assert chain.params.strategy == "cbv"


def test_alternation_bound_leaves_slack():
    chain = build_applicative_lmc([parse_term("I")], d=1)
    level_one = [s for s, state in enumerate(chain.states) if state.level == 1 and state.kind == "term"]
    assert level_one
    assert all(chain.residual(s) == 1 for s in level_one)


def test_truncation():
    chain = build_applicative_lmc([parse_term("K")], max_states=2)
    assert any(state.truncated for state in chain.states)


def test_counting_example(counting_env):
    m, n = counting_env["M"], counting_env["N"]
    verdict = check_bounded_bisim(m, n)
    assert isinstance(verdict, NotBisimilar)
    assert verdict.certificate.trace
    assert replay_certificate(verdict.certificate)
    assert isinstance(check_bounded_bisim(m, n, k=0), IndistinguishableUpToBound)


def test_alpha_equal_terms_share_a_state():
    verdict = check_bounded_bisim(parse_term("I"), parse_term("\\y. y"))
    assert isinstance(verdict, IndistinguishableUpToBound)


def test_convergence_separates():
    identity, omega = parse_term("I"), parse_term("OMEGA")
    assert adequacy_check(identity, omega)
    verdict = check_bounded_bisim(identity, omega)
    assert isinstance(verdict, NotBisimilar)
    assert replay_certificate(verdict.certificate)


def test_bounded_simulation():
    identity, omega = parse_term("I"), parse_term("OMEGA")
    assert isinstance(check_bounded_sim(omega, identity), IndistinguishableUpToBound)
    verdict = check_bounded_sim(identity, omega)
    assert isinstance(verdict, NotSimilar)
    assert any(removal.pair == (0, 1) for removal in verdict.removals)
    assert replay_certificate(verdict)


def test_open_terms_rejected():
    with pytest.raises(ValueError, match="is not closed"):
        build_applicative_lmc([Var("x")])
    with pytest.raises(ValueError, match="Bounds must be nonnegative"):
        build_applicative_lmc([parse_term("I")], k=-1)


PROPOSITION_PAIR = ("\\x y. x (+) y", "(\\x y. x) (+) (\\x y. y)")


def test_proposition_pair_not_similar():
    m, n = (parse_term(text) for text in PROPOSITION_PAIR)
    verdict = check_bounded_sim(m, n, k=8, d=3)
    assert isinstance(verdict, NotSimilar)
    assert verdict.removals[0].required == 1
    assert verdict.removals[0].achieved == Fraction(1, 2)
    assert replay_certificate(verdict)
    reverse = check_bounded_sim(n, m, k=8, d=3)
    assert isinstance(reverse, NotSimilar)
    assert replay_certificate(reverse)


def test_proposition_pair_evidence_is_monotone():
    m, n = (parse_term(text) for text in PROPOSITION_PAIR)
    grid = [(k, d) for k in (4, 6, 8) for d in (1, 2, 3)]
    refuted = {(k, d): isinstance(check_bounded_sim(m, n, k=k, d=d), NotSimilar) for k, d in grid}
    assert refuted[(8, 3)]
    for (k, d), done in refuted.items():
        if done:
            assert all(refuted[(k2, d2)] for k2, d2 in grid if k2 >= k and d2 >= d)


def test_beta_redex_indistinguishable():
    redex, value = parse_term("(\\x. x) K"), parse_term("K")
    assert isinstance(check_bounded_bisim(redex, value), IndistinguishableUpToBound)
    assert isinstance(check_bounded_sim(redex, value), IndistinguishableUpToBound)
    assert isinstance(check_bounded_sim(value, redex), IndistinguishableUpToBound)


@pytest.mark.parametrize(
    ("left", "right"), [("I", "OMEGA"), ("I (+) OMEGA", "I"), ("K", "I (+) (K (+) OMEGA)")]
)
def test_disjoint_convergence_is_not_bisimilar(left, right):
    m, n = parse_term(left), parse_term(right)
    assert adequacy_check(m, n)
    verdict = check_bounded_bisim(m, n)
    assert isinstance(verdict, NotBisimilar)
    assert replay_certificate(verdict.certificate)
