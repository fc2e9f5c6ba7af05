import pytest

from plambda.syntax import alpha_eq, parse_term
from plambda.trees import (
    AbstractionChain,
    Bottom,
    Different,
    Diverges,
    Exhausted,
    Head,
    Hnf,
    Inconclusive,
    SameUpTo,
    Top,
    Unknown,
    head_reduce,
    llt,
    llt_eq,
    render_tree,
)


def test_head_normal_form():
    form = head_reduce(parse_term("(\\y. \\x. x y) I"))
    assert isinstance(form, Hnf)
    assert form.binders == ("x",)
    assert form.head == "x"
    (arg,) = form.args
    assert alpha_eq(arg, parse_term("I"))


def test_head_reduction_renames_clashing_binders():
    form = head_reduce(parse_term("\\x. (\\y. \\x. y) x"))
    assert isinstance(form, Hnf)
    assert len(set(form.binders)) == 2
    assert form.head == form.binders[0]


def test_divergence_detection():
    omega = parse_term("OMEGA")
    assert head_reduce(omega, detect=True) == Diverges((), infinite=False)
    assert isinstance(head_reduce(omega, budget=5), Exhausted)
    assert head_reduce(parse_term("\\x. OMEGA"), detect=True) == Diverges(("x",), infinite=False)
    infinite = head_reduce(parse_term("XI"), detect=True)
    assert isinstance(infinite, Diverges) and infinite.infinite


def test_abstraction_chain():
    form = head_reduce(parse_term("XI"), budget=3)
    assert isinstance(form, AbstractionChain)
    assert len(form.binders) == 3


def test_head_reduction_rejects_choice():
    with pytest.raises(ValueError, match="Head reduction needs a pure term"):
        head_reduce(parse_term("I (+) K"))


def test_levy_longo_tree():
    tree = llt(parse_term("\\x. x (\\y. y) OMEGA"), 3)
    assert tree == Head(("x",), "x", (Head(("y",), "y", ()), Bottom()))
    assert render_tree(tree) == "\\x. x\n  \\y. y\n  ⊥"
    assert llt(parse_term("XI"), 3) == Top()
    assert render_tree(Top()) == "⊤"


def test_truncated_trees():
    assert llt(parse_term("I"), 0) == Unknown("depth")
    assert llt(parse_term("OMEGA"), 3, budget=5, detect=False) == Unknown("budget")
    assert render_tree(llt(parse_term("\\x. x I"), 1)) == "\\x. x\n  ?"


@pytest.mark.parametrize(
    ("left", "right", "expected"),
    [
        ("I", "\\y. y", SameUpTo(6)),
        ("OMEGA", "OMEGA", SameUpTo(6)),
        ("XI", "\\x. XI", SameUpTo(6)),
        ("\\x. x", "\\x. \\y. x", Different(2, ("\\x",), "abstraction")),
        ("\\x y. x", "\\x y. y", Different(3, ("\\x", "\\y"), "head variable")),
        ("\\x. x x", "\\x. x", Different(2, ("\\x", "x"), "arity")),
        ("\\x. x OMEGA", "\\x. x I", Different(3, ("\\x", "x#1"), "abstraction")),
        ("XI", "I", Different(2, ("\\x",), "abstraction")),
    ],
)
def test_approximant_game(left, right, expected):
    assert llt_eq(parse_term(left), parse_term(right), 6) == expected


def test_game_levels():
    m, n = parse_term("\\x y. x"), parse_term("\\x y. y")
    assert llt_eq(m, n, 2) == SameUpTo(2)
    assert isinstance(llt_eq(m, n, 3), Different)


def test_free_variables_compare_by_name():
    z, w = parse_term("z", allow_free=True), parse_term("w", allow_free=True)
    assert llt_eq(z, z, 4) == SameUpTo(4)
    assert llt_eq(z, w, 4) == Different(1, (), "head variable")


def test_inconclusive_game():
    verdict = llt_eq(parse_term("OMEGA"), parse_term("I"), 6, detect=False)
    assert verdict == Inconclusive((), "budget exhausted")


def test_game_rejects_choice():
    with pytest.raises(ValueError, match="defined on pure terms"):
        llt_eq(parse_term("I (+) K"), parse_term("I"), 3)


E_MN = ("\\x. x (\\y. x XI OMEGA y) XI", "\\x. x (x XI OMEGA) XI")
E_MN2 = ("\\x. x x", "\\x. x (\\y. x y)")


@pytest.mark.parametrize(("left", "right"), [E_MN, E_MN2], ids=["e-mn", "e-mn2"])
def test_lazy_equal_pairs_differ(left, right):
    expected = Different(3, ("\\x", "x#1"), "abstraction")
    assert llt_eq(parse_term(left), parse_term(right), 6) == expected


def test_lazy_equal_pair_trees():
    left, right = (llt(parse_term(text), 3) for text in E_MN)
    assert render_tree(left) == "\\x. x\n  \\y. x\n    ⊤\n    ⊥\n    y\n  ⊤"
    assert render_tree(right) == "\\x. x\n  x\n    ⊤\n    ⊥\n  ⊤"


@pytest.mark.parametrize(
    ("left", "right"),
    [
        ("\\x y. x y", "\\a b. a b"),
        (E_MN[0], "\\a. a (\\b. a XI OMEGA b) XI"),
        (E_MN[1], "\\a. a (a XI OMEGA) XI"),
    ],
)
def test_alpha_variants_agree(left, right):
    assert llt_eq(parse_term(left), parse_term(right), 5) == SameUpTo(5)
