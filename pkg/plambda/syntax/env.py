import re
from typing import Dict, Iterator, Optional, Tuple

from .terms import FIRST, IDENTITY, OMEGA, XI, Term, permutator_term

__all__ = ["NamedEnv"]

_PERMUTATOR_NAME = re.compile(r"Q([1-9][0-9]*)$")


class NamedEnv:
    """Ordered, non-recursive table of closed term definitions.

    Names of the form ``Qn`` (``n >= 1``) always resolve to the Böhm permutator of
    degree ``n`` unless explicitly defined.
    """

    def __init__(self, definitions: Optional[Dict[str, Term]] = None):
        self._definitions: Dict[str, Term] = {}
        for name, term in (definitions or {}).items():
            self.define(name, term)

    @classmethod
    def prelude(cls) -> "NamedEnv":
        return cls({"I": IDENTITY, "K": FIRST, "OMEGA": OMEGA, "XI": XI})

    def define(self, name: str, term: Term):
        if term.free_vars:
            raise ValueError(
                f"Definition {name!r} is not closed; free variables {sorted(term.free_vars)}"
            )
        self._definitions[name] = term

    def resolve(self, name: str) -> Optional[Term]:
        if name in self._definitions:
            return self._definitions[name]
        match = _PERMUTATOR_NAME.match(name)
        if match:
            return permutator_term(int(match.group(1)))
        return None

    def copy(self) -> "NamedEnv":
        return NamedEnv(dict(self._definitions))

    def items(self) -> Iterator[Tuple[str, Term]]:
        return iter(self._definitions.items())

    def __contains__(self, name: str) -> bool:
        return name in self._definitions

    def __getitem__(self, name: str) -> Term:
        return self._definitions[name]

    def __len__(self) -> int:
        return len(self._definitions)
