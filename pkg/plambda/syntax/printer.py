from typing import Dict, Hashable, Optional

from .env import NamedEnv
from .terms import Abs, App, Choice, Term, Var

__all__ = ["print_term"]


def print_term(term: Term, abbreviations: Optional[NamedEnv] = None) -> str:
    """Render ``term`` in the concrete syntax accepted by :func:`parse_term`.

    Parameters
    ----------
    term : Term
        The term to print.
    abbreviations : Optional[NamedEnv]
        If given, every closed subterm that is α-equivalent to a definition is
        printed as the definition's name (the first defined name wins).

    Returns
    -------
    str
        The rendering, with nested abstractions collapsed to ``\\x y. M`` and
        choice printed as ``(+)``.
    """
    names: Dict[Hashable, str] = {}
    if abbreviations is not None:
        for name, definition in abbreviations.items():
            names.setdefault(definition.key, name)
    return _Printer(names).term(term)


class _Printer:
    def __init__(self, names: Dict[Hashable, str]):
        self.names = names

    def short(self, term: Term) -> Optional[str]:
        if self.names and not term.free_vars:
            return self.names.get(term.key)
        return None

    def term(self, term: Term) -> str:
        name = self.short(term)
        if name is not None:
            return name
        if isinstance(term, Abs):
            binders = [term.binder]
            body = term.body
            while isinstance(body, Abs) and self.short(body) is None:
                binders.append(body.binder)
                body = body.body
            return "\\" + " ".join(binders) + ". " + self.term(body)
        if isinstance(term, Choice):
            return self.left_operand(term.left) + " (+) " + self.term(term.right)
        return self.application(term)

    def left_operand(self, term: Term) -> str:
        if isinstance(term, (Abs, Choice)) and self.short(term) is None:
            return "(" + self.term(term) + ")"
        return self.application(term)

    def application(self, term: Term) -> str:
        if isinstance(term, App) and self.short(term) is None:
            return self.application(term.fun) + " " + self.atom(term.arg)
        return self.atom(term)

    def atom(self, term: Term) -> str:
        name = self.short(term)
        if name is not None:
            return name
        if isinstance(term, Var):
            return term.name
        return "(" + self.term(term) + ")"
