import os
from fractions import Fraction

import pytest

from plambda.fs import (
    BaseCLBChecker,
    BigStepChecker,
    ContextClosure,
    CoupledRelation,
    ExtApp,
    Fail,
    FormalSum,
    Pass,
    RelationView,
    SmallStepChecker,
    UpToFormalSumsChecker,
    add_checker_alias,
    check_clb,
    dist_extract,
    fs_apply,
    fs_eval,
    fs_step,
    get_checker,
    get_known_checkers,
    parse_ext_term,
    parse_relation,
    print_ext,
    reduction_sequence,
    register_checker,
    weighted_sum,
)
from plambda.fs.registry import _checker_registry
from plambda.syntax import App, ParseError, Var, parse_term
from plambda.utils import read_text

HALF = Fraction(1, 2)
I, K = parse_term("I"), parse_term("K")


def test_formal_sum_canonical_form():
    renamed = parse_term("\\y. y")
    assert FormalSum([(I, HALF), (renamed, Fraction(1, 4))]) == FormalSum([(I, Fraction(3, 4))])
    total = FormalSum([(I, HALF), (K, HALF)])
    assert total.mass == 1
    assert total.is_value
    assert len(FormalSum([(I, 0)])) == 0
    assert not FormalSum([(parse_term("I I"), 1)]).is_value
    assert print_ext(FormalSum([(I, HALF)])) == "{1/2: \\x. x}"


def test_formal_sum_errors():
    with pytest.raises(ValueError, match="Negative weight"):
        FormalSum([(I, -HALF)])
    with pytest.raises(ValueError, match="Formal sum has mass 3/2 > 1"):
        FormalSum([(I, 1), (K, HALF)])


def test_sum_operations():
    assert FormalSum([(I, 1)]).plus(FormalSum([(K, 1)])) == FormalSum([(I, HALF), (K, HALF)])
    applied = fs_apply(FormalSum([(parse_term("\\x. x x"), 1)]), I)
    assert applied == FormalSum([(parse_term("I I"), 1)])
    with pytest.raises(ValueError, match="is not a summed value"):
        fs_apply(applied, I)
    nested = ExtApp(FormalSum([(I, HALF)]), K)
    assert dist_extract(nested) == FormalSum([(parse_term("I K"), HALF)])
    assert dist_extract(K) == FormalSum([(K, 1)])
    parts = [(FormalSum([(I, 1)]), HALF), (FormalSum([(K, HALF)], residual=HALF), HALF)]
    combined = weighted_sum(parts)
    assert combined == FormalSum([(I, HALF), (K, Fraction(1, 4))])
    assert combined.residual == Fraction(1, 4)


def test_single_steps():
    assert fs_step(parse_term("I (+) K")) == FormalSum([(I, HALF), (K, HALF)])
    assert fs_step(I) == FormalSum([(I, 1)])
    lifted = fs_step(parse_term("I K"))
    assert lifted == ExtApp(FormalSum([(I, 1)]), K)
    assert fs_step(lifted) == FormalSum([(K, 1)])
    spread = fs_step(FormalSum([(parse_term("I (+) OMEGA"), 1)]))
    assert spread == FormalSum([(I, HALF)])
    assert spread.residual == 0


def test_step_errors():
    with pytest.raises(ValueError, match="is a summed value and cannot reduce"):
        fs_step(FormalSum([(I, 1)]))
    with pytest.raises(ValueError, match="Cannot reduce open term"):
        fs_step(Var("x"))


def test_evaluation():
    term = parse_term("(\\x. x x) (I (+) OMEGA)")
    result = fs_eval(term)
    assert result.reached
    assert result.value == FormalSum([(I, Fraction(1, 4))])
    assert result.residual == 0
    assert result.steps == 3
    assert len(reduction_sequence(term)) == 4
    cut = fs_eval(term, steps=1)
    assert not cut.reached
    assert cut.value == FormalSum()
    assert cut.residual == 1


def test_parse_ext_terms():
    parsed = parse_ext_term("{1/2: I, 1/4: K} I")
    assert parsed == ExtApp(FormalSum([(I, HALF), (K, Fraction(1, 4))]), I)
    assert parse_ext_term("{}") == FormalSum()
    with pytest.raises(ParseError, match="mass"):
        parse_ext_term("{1: I, 1: K}")


@pytest.fixture(scope="module")
def revisited_relation(corpus_directory):
    return parse_relation(read_text(os.path.join(corpus_directory, "clb-revisited", "input.lop")))


def test_corpus_relation(revisited_relation):
    assert len(revisited_relation.v) == 1
    assert len(revisited_relation.e) == 8
    verdict = check_clb(revisited_relation)
    assert isinstance(verdict, Pass)
    assert verdict.unresolved == ()
    assert verdict.pairs_checked == 16


def test_context_closure(revisited_relation):
    closure = ContextClosure(revisited_relation.v)
    assert len(closure) == 4
    (m, n), = revisited_relation.v
    assert (I, I) in closure
    assert (parse_term("I"), parse_term("\\y. y")) in closure
    assert (App(m, m), App(n, n)) in closure
    assert (App(m, I), App(n, K)) not in closure


def test_choice_against_value():
    duplicate = CoupledRelation([], [(parse_term("I (+) I"), I)])
    verdict = check_clb(duplicate, "smallstep")
    assert isinstance(verdict, Fail)
    assert verdict.clause == "step"
    assert verdict.direction == "forward"
    assert verdict.exact
    assert isinstance(check_clb(duplicate, "bigstep"), Pass)
    assert isinstance(check_clb(duplicate, "upto_ctx"), Pass)


def test_all_modes_accept_the_corpus_relation(revisited_relation, checker_modes):
    assert check_clb(revisited_relation, checker_modes)


@pytest.mark.parametrize(
    ("pairs", "expected"),
    [
        ([(I, K), (K, I)], "ok"),
        ([(I, I), (K, K)], "n/a"),
    ],
    ids=["ordered", "swapped"],
)
def test_split_clause_pairs_in_order(pairs, expected):
    left, right = parse_term("I (+) K"), parse_term("K (+) I")
    view = RelationView.of(CoupledRelation([], [(left, right)] + pairs))
    assert UpToFormalSumsChecker().split_clause(view, left, right) == expected


def test_value_mass_mismatch():
    unequal = CoupledRelation([], [(I, parse_term("I (+) OMEGA"))])
    verdict = check_clb(unequal, "bigstep")
    assert isinstance(verdict, Fail)
    assert verdict.clause == "value-mass"


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("M | M", "Expected a section header"),
        ("[X]\nI | I", "Unknown section"),
        ("[V]\nI | K\n[E]\nI | I", "of V is not in E"),
        ("[V]\n{1: I} | I", "must be ordinary terms"),
    ],
)
def test_relation_errors(text, message):
    with pytest.raises(ValueError, match=message):
        parse_relation(text)


def test_open_relation_members():
    with pytest.raises(ValueError, match="is not closed"):
        CoupledRelation([], [(Var("x"), I)])
    with pytest.raises(ValueError, match="has free variables"):
        CoupledRelation([], [], [parse_term("_ y", allow_free=True)])


def test_checker_registry():
    assert get_checker("big") is BigStepChecker
    assert set(get_known_checkers()) >= {"smallstep", "bigstep", "upto_fs", "upto_ctx"}
    with pytest.raises(ValueError, match="Unknown checking mode 'lazy'"):
        get_checker("lazy")
    with pytest.raises(ValueError, match="already registered"):
        register_checker("smallstep", SmallStepChecker)
    with pytest.raises(TypeError, match="is not derived from"):
        register_checker("other", object)
    with pytest.raises(ValueError, match="Unknown checking mode"):
        add_checker_alias("other", "lazy")
    with pytest.raises(ValueError, match="must be positive"):
        SmallStepChecker(0, 8)


def test_register_custom_checker():
    class TrustingChecker(BaseCLBChecker):
        name = "trusting"

        def check_pair(self, view, e, f):
            return "ok"

    try:
        register_checker("trusting", TrustingChecker)
        add_checker_alias("trust", "trusting")
        verdict = check_clb(CoupledRelation([], [(I, K)]), "trust")
        assert verdict == Pass(2)
    finally:
        _checker_registry._checker_registry.pop("trusting", None)
        _checker_registry._checker_registry.pop("trust", None)
        _checker_registry._checker_aliases.pop("trust", None)
