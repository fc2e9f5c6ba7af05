"""Tokenizer and recursive-descent parser for the concrete term syntax.

Grammar::

    term   := "\\" ident+ "." term | choice
    choice := app { "(+)" app }          right associative
    app    := atom { atom } [ lambda ]   left associative
    atom   := ident | "(" term ")"

``λ`` and ``⊕`` are accepted for ``\\`` and ``(+)``.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional

from .env import NamedEnv
from .terms import Abs, App, Choice, Term, Var

__all__ = [
    "ParseError",
    "UnboundNameError",
    "Token",
    "tokenize",
    "TermParser",
    "parse_term",
    "parse_fraction",
    "parse_definitions",
    "parse_context",
    "HOLE",
]

HOLE = "_"

_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r\n]+)
    |(?P<oplus>\(\+\)|⊕)
    |(?P<lam>\\|λ)
    |(?P<number>\d+(?:/\d+)?)
    |(?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    |(?P<punct>[().{}:,|;=])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax error at a given line and column (both 1-based)."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnboundNameError(ParseError):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"Unbound name {name!r}", line, column)
        self.name = name


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1) -> List[Token]:
    tokens = []
    position = 0
    line_start = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise ParseError(f"Unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup
        chunk = match.group()
        if kind == "space":
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = position + chunk.rindex("\n") + 1
        elif kind == "punct":
            tokens.append(Token(chunk, chunk, line, column))
        else:
            tokens.append(Token(kind, chunk, line, column))  # type: ignore
        position = match.end()
    tokens.append(Token("end", "", line, position - line_start + 1))
    return tokens


def parse_fraction(text: str) -> Fraction:
    """Parse ``a/b`` or an integer into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Invalid rational {text!r}; expected a/b")


class TermParser:
    """Recursive-descent parser over a token list.

    Subclasses extend the grammar (formal sums, relation files) by reusing
    :meth:`term` and the token helpers.
    """

    def __init__(
        self,
        tokens: List[Token],
        env: Optional[NamedEnv] = None,
        allow_free: bool = False,
        allow_holes: bool = False,
    ):
        self.tokens = tokens
        self.position = 0
        self.env = NamedEnv.prelude() if env is None else env
        self.allow_free = allow_free
        self.allow_holes = allow_holes

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        if token.kind != "end":
            self.position += 1
        return token

    def expect(self, kind: str) -> Token:
        token = self.current
        if token.kind != kind:
            found = token.text or "end of input"
            raise ParseError(f"Expected {kind!r} but found {found!r}", token.line, token.column)
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.current.line, self.current.column)

    def finish(self):
        if self.current.kind != "end":
            raise self.error(f"Unexpected {self.current.text!r}")

    def fraction(self) -> Fraction:
        token = self.expect("number")
        return parse_fraction(token.text)

    def term(self, bound: FrozenSet[str] = frozenset()) -> Term:
        if self.current.kind == "lam":
            return self.abstraction(bound)
        return self.choice(bound)

    def abstraction(self, bound: FrozenSet[str]) -> Term:
        self.expect("lam")
        binders = [self.expect("ident").text]
        while self.current.kind == "ident":
            binders.append(self.advance().text)
        self.expect(".")
        body = self.term(bound | set(binders))
        for binder in reversed(binders):
            body = Abs(binder, body)
        return body

    def choice(self, bound: FrozenSet[str]) -> Term:
        left = self.application(bound)
        if self.current.kind == "oplus":
            self.advance()
            return Choice(left, self.choice(bound))
        return left

    def application(self, bound: FrozenSet[str]) -> Term:
        if self.current.kind == "lam":
            return self.abstraction(bound)
        result = self.atom(bound)
        while self.current.kind in ("ident", "("):
            result = App(result, self.atom(bound))
        if self.current.kind == "lam":
            result = App(result, self.abstraction(bound))
        return result

    def atom(self, bound: FrozenSet[str]) -> Term:
        token = self.current
        if token.kind == "(":
            self.advance()
            inner = self.term(bound)
            self.expect(")")
            return inner
        if token.kind == "ident":
            self.advance()
            return self.resolve(token, bound)
        found = token.text or "end of input"
        raise ParseError(f"Expected a term but found {found!r}", token.line, token.column)

    def resolve(self, token: Token, bound: FrozenSet[str]) -> Term:
        name = token.text
        if name in bound:
            return Var(name)
        if name == HOLE and self.allow_holes:
            return Var(HOLE)
        definition = self.env.resolve(name)
        if definition is not None:
            return definition
        if self.allow_free:
            return Var(name)
        raise UnboundNameError(name, token.line, token.column)


def parse_term(
    text: str,
    env: Optional[NamedEnv] = None,
    allow_free: bool = False,
    line: int = 1,
) -> Term:
    """Parse a term.

    Parameters
    ----------
    text : str
        Concrete syntax, see the module documentation.
    env : Optional[NamedEnv]
        Macro table used to resolve names that are not bound by a λ. Defaults to
        :meth:`NamedEnv.prelude`.
    allow_free : bool
        If ``True``, names that are neither bound nor defined become free
        variables. Otherwise they raise :class:`UnboundNameError`.
    line : int
        Line number reported for the first line of ``text``.

    Returns
    -------
    Term
        The parsed term.

    Raises
    ------
    ParseError
        On syntax errors, with the offending line and column.
    UnboundNameError
        On names that cannot be resolved.
    """
    parser = TermParser(tokenize(text, line), env, allow_free=allow_free)
    term = parser.term()
    parser.finish()
    return term


def parse_context(text: str, env: Optional[NamedEnv] = None, line: int = 1) -> Term:
    """Parse a term in which the hole marker ``_`` may occur any number of times."""
    parser = TermParser(tokenize(text, line), env, allow_holes=True)
    term = parser.term()
    parser.finish()
    return term


def parse_definitions(text: str, env: Optional[NamedEnv] = None) -> NamedEnv:
    """Parse a definitions file: lines ``name = term``, ``#`` starts a comment.

    Each definition may only refer to names defined above it. The returned
    environment extends a copy of ``env`` (the prelude by default).
    """
    result = (NamedEnv.prelude() if env is None else env).copy()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = tokenize(line, number)
        if len(tokens) < 3 or tokens[0].kind != "ident" or tokens[1].kind != "=":
            column = tokens[0].column if tokens else 1
            raise ParseError("Expected a definition 'name = term'", number, column)
        parser = TermParser(tokens, result)
        parser.position = 2
        term = parser.term()
        parser.finish()
        result.define(tokens[0].text, term)
    return result
