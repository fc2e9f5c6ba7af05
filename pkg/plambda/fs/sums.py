"""Formal sums and the extended terms in which they occupy redex position.

An extended term is a closed :class:`~plambda.syntax.terms.Term`, a
:class:`FormalSum`, or an :class:`ExtApp` applying an extended term that holds a
formal sum on its leftmost spine to an ordinary term.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple, Union

from ..syntax.printer import print_term
from ..syntax.terms import Abs, App, Term, substitute
from ..utils import format_fraction

__all__ = [
    "FormalSum",
    "ExtApp",
    "ExtTerm",
    "ext_key",
    "print_ext",
    "is_summed_value",
    "fs_apply",
    "dist_extract",
    "weighted_sum",
]


class FormalSum:
    """A finite sum ``⟨M1, p1⟩ + … + ⟨Mn, pn⟩`` with ``Σ pi <= 1``.

    Components are kept in the order given; equality compares the canonical
    form, in which α-equal components are merged. ``residual`` records mass
    that bounded evaluation could not place and is ignored by equality.

    Parameters
    ----------
    components: Iterable[Tuple[Term, Fraction]]
        Terms with positive weights. Zero weights are dropped.
    residual: Fraction
        Unplaced mass carried along by reduction.

    Raises
    ------
    ValueError
        If a weight is negative or the total mass exceeds 1.
    """

    def __init__(self, components: Iterable[Tuple[Term, Fraction]] = (), residual=0):
        kept = []
        for term, weight in components:
            weight = Fraction(weight)
            if weight < 0:
                raise ValueError(f"Negative weight {weight} for {print_term(term)}")
            if weight:
                kept.append((term, weight))
        self.components: Tuple[Tuple[Term, Fraction], ...] = tuple(kept)
        self.residual = Fraction(residual)
        if self.mass > 1:
            raise ValueError(f"Formal sum has mass {self.mass} > 1")

    @property
    def mass(self) -> Fraction:
        return sum((weight for _, weight in self.components), Fraction(0))

    @property
    def is_value(self) -> bool:
        return all(isinstance(term, Abs) for term, _ in self.components)

    def canonical(self) -> List[Tuple[Term, Fraction]]:
        merged: Dict[Hashable, Tuple[Term, Fraction]] = {}
        for term, weight in self.components:
            previous = merged.get(term.key)
            merged[term.key] = (term, weight + (previous[1] if previous else 0))
        return [merged[key] for key in sorted(merged, key=repr)]

    @property
    def key(self) -> Hashable:
        return ("sum",) + tuple((term.key, weight) for term, weight in self.canonical())

    def plus(self, other: "FormalSum") -> "FormalSum":
        """``H ⊕ K``: every component of both sums at half its weight."""
        half = Fraction(1, 2)
        return FormalSum(
            [(t, w * half) for t, w in self.components + other.components],
            (self.residual + other.residual) * half,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __str__(self):
        return print_ext(self)

    def __repr__(self):
        return f"FormalSum({print_ext(self)!r})"


@dataclass(frozen=True)
class ExtApp:
    fun: "ExtTerm"
    arg: Term


ExtTerm = Union[Term, FormalSum, ExtApp]


def ext_key(e: ExtTerm) -> Hashable:
    """Canonical identity: α-equivalence on terms, canonical form on sums."""
    if isinstance(e, FormalSum):
        return e.key
    if isinstance(e, ExtApp):
        return ("ext", ext_key(e.fun), e.arg.key)
    return ("term", e.key)


def print_ext(e: ExtTerm) -> str:
    if isinstance(e, FormalSum):
        inner = ", ".join(f"{format_fraction(w)}: {print_term(t)}" for t, w in e.components)
        return "{" + inner + "}"
    if isinstance(e, ExtApp):
        arg = print_term(e.arg)
        if isinstance(e.arg, (App, Abs)) or " " in arg:
            arg = f"({arg})"
        return f"{print_ext(e.fun)} {arg}"
    return print_term(e)


def is_summed_value(e: ExtTerm) -> bool:
    return isinstance(e, FormalSum) and e.is_value


def fs_apply(z: FormalSum, m: Term) -> FormalSum:
    """``Z • M``: substitute ``m`` into every component of the summed value ``z``."""
    if not z.is_value:
        raise ValueError(f"{print_ext(z)} is not a summed value")
    return FormalSum(
        [(substitute(v.body, v.binder, m), w) for v, w in z.components],  # type: ignore
        z.residual,
    )


def dist_extract(e: ExtTerm) -> FormalSum:
    """``D(M) = ⟨M, 1⟩``, ``D(H) = H`` and ``D(E M)`` distributes ``M`` over ``D(E)``."""
    if isinstance(e, FormalSum):
        return e
    if isinstance(e, ExtApp):
        inner = dist_extract(e.fun)
        return FormalSum([(App(t, e.arg), w) for t, w in inner.components], inner.residual)
    return FormalSum([(e, Fraction(1))])


def weighted_sum(parts: Sequence[Tuple[FormalSum, Fraction]]) -> FormalSum:
    """``⊕_j ⟨H_j, p_j⟩``: the components of each ``H_j`` scaled by ``p_j``."""
    components = []
    residual = Fraction(0)
    for part, weight in parts:
        components.extend((t, w * weight) for t, w in part.components)
        residual += part.residual * weight
    return FormalSum(components, residual)
