import os
from fractions import Fraction

import pytest

from plambda.eval import approx_semantics
from plambda.flow import disentangle, verify_disentanglement
from plambda.formats import (
    BaseFormat,
    add_format_alias,
    get_format,
    get_format_from_extension,
    get_format_name_from_extension,
    get_known_formats,
    infer_format,
    load,
    loads,
    parse_assignment,
    register_format,
)
from plambda.formats.registry import _format_registry
from plambda.syntax import FrameStack, NamedEnv, UnboundNameError, parse_term, print_term


def test_format_registry():
    try:
        name = "mock_format"
        extensions = ["mock_extension", ".mock"]

        class proxy(BaseFormat):
            def loads(self, text, env=None):
                return text.upper()

        with pytest.raises(ValueError, match=f"Unknown format {name!r}. Available values are "):
            get_format(name)
        register_format(name, proxy, extensions)
        assert get_format(name) is proxy
        assert get_format_from_extension("mock_extension") is proxy
        assert get_format_from_extension(".mock") is proxy
        assert loads("abc", name) == "ABC"
        add_format_alias("mock_alias", name)
        assert get_format("mock_alias") is proxy
        with pytest.raises(ValueError, match="Tried to register the extension "):
            register_format("mock2", proxy, ["mock"])
        with pytest.raises(ValueError, match=f"A format with name {name!r} is already registered"):
            register_format(name, proxy, [])
        with pytest.raises(TypeError, match="is not derived from"):
            register_format("mock3", object, [])
        with pytest.raises(ValueError, match="already registered, please choose a different alias"):
            add_format_alias("mock_alias", name)
    finally:
        _format_registry._format_registry.pop(name, None)
        _format_registry._format_registry.pop("mock_alias", None)
        _format_registry._format_aliases.pop("mock_alias", None)
        for extension in extensions:
            _format_registry._format_extension_map.pop(extension.lstrip("."), None)


def test_get_known_formats():
    assert get_known_formats() == list(_format_registry._format_registry)


def test_extension_inference(format_extensions):
    extension, name = format_extensions
    assert get_format_name_from_extension(extension) == name
    assert get_format_name_from_extension("." + extension) == name
    assert infer_format(os.path.join("some", "dir", f"case.{extension}")) == name


def test_invalid_extensions(invalid_extensions):
    with pytest.raises(ValueError, match="Unregistered extension"):
        get_format_name_from_extension(invalid_extensions)
    with pytest.raises(ValueError, match="it has no extension"):
        infer_format("noextension")


def test_load_definitions(corpus_directory):
    env = load(os.path.join(corpus_directory, "numerals.lop"))
    assert isinstance(env, NamedEnv)
    assert "I" in env and "COUNT" in env
    assert print_term(env["TWO"], env) == "TWO"
    is_zero = parse_term("ISZERO ZERO", env)
    assert approx_semantics(is_zero, 10).weight(env["TRUE"]) == 1
    assert approx_semantics(env["GEO"], 30).weight(env["I"]) >= Fraction(1, 2)


def test_load_with_definitions(tmp_path):
    path = tmp_path / "frames.stk"
    path.write_text("nil\n# a comment\nONE; I\n")
    env = loads("ONE = \\s z. s\n", "definitions")
    stacks = load(str(path), env=env)
    assert stacks[0] == FrameStack()
    assert stacks[1] == FrameStack.of([env["ONE"], parse_term("I")])


def test_arguments_format():
    terms = loads("I\n\n# skipped\nK (+) I\n", "arguments")
    assert len(terms) == 2
    with pytest.raises(UnboundNameError, match="at line 2"):
        loads("I\nfoo\n", "arguments")


def test_assignment_format(corpus_directory, venn_assignment):
    loaded = load(os.path.join(corpus_directory, "disentangle-venn", "input.lop"), "assignment")
    assert loaded.p == venn_assignment.p
    assert verify_disentanglement(loaded, disentangle(loaded))


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("r 1 1/2", "needs at least one 'p' line"),
        ("p 2 1/2", r"missing masses for indices \[1\]"),
        ("p 1 1/2\nq 1 1/2", "line 2: unrecognised line"),
        ("p 1 1/2\nr 1,x 1/2", "line 2: "),
    ],
)
def test_assignment_errors(text, message):
    with pytest.raises(ValueError, match=message):
        parse_assignment(text)
