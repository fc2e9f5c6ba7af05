import pytest

from plambda.syntax import (
    OMEGA,
    Abs,
    App,
    Choice,
    FrameStack,
    NamedEnv,
    ParseError,
    UnboundNameError,
    Var,
    alpha_eq,
    context_from_term,
    count_holes,
    parse_context,
    parse_definitions,
    parse_term,
    plug_context,
    plug_holes,
    plug_stack,
    print_term,
    substitute,
)


@pytest.mark.parametrize(
    "text",
    [
        "\\x. x",
        "\\x y. x",
        "\\x y. x (+) y",
        "x y z",
        "x (y z)",
        "(\\x. x) (\\y. y y)",
        "(x (+) y) z",
        "x (+) y (+) z",
        "(x (+) y) (+) z",
        "f \\x. x",
    ],
)
def test_print_parse(text):
    term = parse_term(text, allow_free=True)
    assert alpha_eq(parse_term(print_term(term), allow_free=True), term)


def test_parse_shapes():
    assert parse_term("x y z", allow_free=True) == App(App(Var("x"), Var("y")), Var("z"))
    assert parse_term("x (+) y (+) z", allow_free=True) == Choice(
        Var("x"), Choice(Var("y"), Var("z"))
    )
    assert parse_term("λx. x ⊕ x") == Abs("x", Choice(Var("x"), Var("x")))
    assert print_term(parse_term("\\x. \\y. x")) == "\\x y. x"


def test_alpha_equivalence():
    assert alpha_eq(parse_term("\\x. x"), parse_term("\\y. y"))
    assert not alpha_eq(parse_term("\\x y. x"), parse_term("\\x y. y"))
    assert parse_term("\\x. x").key == parse_term("\\z. z").key


def test_capture_avoiding_substitution():
    body = parse_term("\\y. x y", allow_free=True)
    result = substitute(body, "x", Var("y"))
    assert isinstance(result, Abs)
    assert result.binder != "y"
    assert result.free_vars == frozenset({"y"})
    assert alpha_eq(result, parse_term("\\z. y z", allow_free=True))


def test_unbound_name():
    with pytest.raises(UnboundNameError, match="Unbound name 'foo' at line 1, column 5") as err:
        parse_term("\\x. foo x")
    assert err.value.name == "foo"
    assert parse_term("foo", allow_free=True) == Var("foo")


@pytest.mark.parametrize("text", ["\\x. (x", "\\. x", "x )", "x $"])
def test_syntax_errors(text):
    with pytest.raises(ParseError, match="at line 1, column"):
        parse_term(text, allow_free=True)


def test_prelude_and_permutators():
    assert parse_term("OMEGA") == OMEGA
    assert alpha_eq(parse_term("Q2"), parse_term("\\a b. b a"))
    assert alpha_eq(parse_term("K"), parse_term("\\x y. x"))


def test_definitions():
    env = parse_definitions("# comment\nA = I\n\nB = A A  # trailing comment\n")
    assert alpha_eq(env["B"], App(env["I"], env["I"]))
    assert "A" in env and "OMEGA" in env
    assert print_term(parse_term("B", env), env) == "B"
    with pytest.raises(UnboundNameError) as err:
        parse_definitions("A = I\nB = C\n")
    assert err.value.line == 2
    with pytest.raises(ParseError, match="Expected a definition"):
        parse_definitions("A I\n")
    with pytest.raises(ValueError, match="is not closed"):
        NamedEnv({"A": Var("x")})


def test_contexts():
    context = parse_context("_ (I (+) OMEGA)")
    assert count_holes(context) == 1
    identity = parse_term("I")
    assert plug_holes(context, [identity]) == App(identity, Choice(identity, OMEGA))
    assert plug_context(context_from_term(context), identity) == plug_holes(context, [identity])
    two = parse_context("_ (+) \\x. _")
    assert count_holes(two) == 2
    with pytest.raises(ValueError, match="exactly one hole"):
        context_from_term(two)
    with pytest.raises(ValueError, match="Fewer fillers"):
        plug_holes(two, [identity])
    with pytest.raises(ValueError, match="More fillers"):
        plug_holes(context, [identity, identity])
    # context binders capture
    assert plug_holes(parse_context("\\x. _"), [Var("x")]) == Abs("x", Var("x"))


def test_frame_stacks():
    identity, first = parse_term("I"), parse_term("K")
    stack = FrameStack().push(first).push(identity)
    assert list(stack) == [identity, first]
    assert plug_stack(stack, Var("m")) == App(App(Var("m"), identity), first)
    top, rest = stack.pop()
    assert top == identity and len(rest) == 1
    assert FrameStack().is_nil
