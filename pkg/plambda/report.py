"""Plain-text rendering of every result type, and the exit code each one maps to.

Reports are deterministic: states, blocks, pairs and subsets are listed in a
fixed order and every probability is printed as a reduced fraction ``a/b``.
"""
from functools import singledispatch
from typing import List, Optional, Sequence

from .applicative import BisimCertificate, IndistinguishableUpToBound, NotBisimilar, NotSimilar
from .ciu import ConsistentUpToBound, NotCIULess
from .eval import Approximation, LubResult, ProbInterval, ValueDistribution
from .flow import DisentangleResult, _subset_text
from .fs.base import Fail, Pass
from .fs.reduction import FSResult
from .fs.sums import ExtApp, FormalSum, print_ext
from .lmc import Partition, SimulationResult, SplitRecord
from .separator import ContextWitness, NotSeparatedAtLevel, SeparationWitness, VerificationTimeout
from .syntax.env import NamedEnv
from .syntax.printer import print_term
from .syntax.terms import Term
from .trees import Bottom, Different, Head, Inconclusive, SameUpTo, Top, Unknown, render_tree
from .utils import format_fraction as frac

__all__ = ["render", "exit_code", "EXIT_POSITIVE", "EXIT_REFUTED", "EXIT_INCONCLUSIVE", "EXIT_USAGE"]

EXIT_POSITIVE = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


@singledispatch
def render(result, names: Optional[NamedEnv] = None) -> List[str]:
    """Report lines for ``result``; ``names`` abbreviates terms equal to definitions."""
    raise TypeError(f"Cannot render objects of type {type(result)}")


@singledispatch
def exit_code(result) -> int:
    return EXIT_POSITIVE


def _interval(probs: ProbInterval) -> str:
    return f"[{frac(probs.lower)}, {frac(probs.upper)}]"


@render.register(ValueDistribution)
def _render_distribution(result, names=None):
    return [f"value {print_term(term, names)} {frac(weight)}" for term, weight in result.items()]


@render.register(ProbInterval)
def _render_interval(result, names=None):
    return [f"lower {frac(result.lower)}", f"upper {frac(result.upper)}"]


@render.register(Approximation)
def _render_approximation(result, names=None):
    return render(result.distribution, names) + render(result.interval, names)


@render.register(LubResult)
def _render_lub(result, names=None):
    lines = render(result.distribution, names)
    lines.append(f"gap {frac(result.gap)}")
    lines.append(f"depth {result.depth}")
    lines.append("stable" if result.reached else "not stable")
    return lines


@exit_code.register(LubResult)
def _lub_code(result):
    return EXIT_POSITIVE if result.reached else EXIT_INCONCLUSIVE


def _split_line(record: SplitRecord, names: Sequence[str], label_names: Sequence[str]) -> str:
    block = ", ".join(names[s] for s in sorted(record.block))
    splitter = ", ".join(names[s] for s in sorted(record.splitter))
    masses = "; ".join(
        f"{names[s]}: [{frac(low)}, {frac(high)}]" for s, low, high in record.intervals
    )
    return f"split {{{block}}} by {label_names[record.label]} into {{{splitter}}}: {masses}"


@render.register(BisimCertificate)
def _render_certificate(result, names=None):
    params = result.params
    lines = [f"terms {' | '.join(print_term(t, names) for t in params.terms)}"]
    lines.extend(_split_line(record, result.names, result.label_names) for record in result.trace)
    return lines


@render.register(NotBisimilar)
def _render_not_bisimilar(result, names=None):
    return ["verdict not-bisimilar"] + render(result.certificate, names)


@exit_code.register(NotBisimilar)
@exit_code.register(NotSimilar)
@exit_code.register(NotCIULess)
@exit_code.register(Fail)
@exit_code.register(Different)
def _refuted(result):
    return EXIT_REFUTED


@render.register(NotSimilar)
def _render_not_similar(result, names=None):
    lines = ["verdict not-similar"]
    for removal in result.removals:
        s, t = removal.pair
        lines.append(
            f"remove ({result.names[s]}, {result.names[t]}) round {removal.round} "
            f"label {result.label_names[removal.label]} "
            f"required {frac(removal.required)} achieved {frac(removal.achieved)}"
        )
    return lines


@render.register(IndistinguishableUpToBound)
def _render_indistinguishable(result, names=None):
    return [
        "verdict indistinguishable-up-to-bound",
        f"states {result.n_states}",
        f"depth {result.params.k} alternation {result.params.d}",
    ]


@exit_code.register(IndistinguishableUpToBound)
@exit_code.register(ConsistentUpToBound)
@exit_code.register(Inconclusive)
@exit_code.register(NotSeparatedAtLevel)
@exit_code.register(VerificationTimeout)
def _inconclusive(result):
    return EXIT_INCONCLUSIVE


@render.register(NotCIULess)
def _render_not_ciu(result, names=None):
    stack = "; ".join(print_term(frame, names) for frame in result.stack) or "nil"
    return [
        "verdict not-ciu-less",
        f"stack {stack}",
        f"left {_interval(result.left)}",
        f"right {_interval(result.right)}",
    ]


@render.register(ConsistentUpToBound)
def _render_consistent(result, names=None):
    return ["verdict consistent-up-to-bound", f"stacks {result.stacks}", f"depth {result.depth}"]


@render.register(Bottom)
@render.register(Top)
@render.register(Head)
@render.register(Unknown)
def _render_tree(result, names=None):
    return render_tree(result).splitlines()


def _has_unknown(tree) -> bool:
    if isinstance(tree, Unknown):
        return True
    return isinstance(tree, Head) and any(_has_unknown(child) for child in tree.children)


@exit_code.register(Head)
@exit_code.register(Unknown)
def _tree_code(result):
    return EXIT_INCONCLUSIVE if _has_unknown(result) else EXIT_POSITIVE


@render.register(SameUpTo)
def _render_same(result, names=None):
    return [f"verdict same-up-to {result.level}"]


@render.register(Different)
def _render_different(result, names=None):
    return [
        f"verdict different at level {result.level}",
        f"path {'/'.join(result.path) or '.'}",
        f"clause {result.clause}",
    ]


@render.register(Inconclusive)
def _render_inconclusive(result, names=None):
    return ["verdict inconclusive", f"path {'/'.join(result.path) or '.'}", f"reason {result.reason}"]


@render.register(SeparationWitness)
def _render_witness(result, names=None):
    lines = ["verdict separated"]
    lines.extend(f"substitute {name} := {perm}" for name, perm in result.substitution)
    lines.append(f"k {result.k} m {result.m}")
    lines.extend(f"argument {print_term(arg, names)}" for arg in result.arguments)
    lines.append(f"left {_interval(result.probs[0])}")
    lines.append(f"right {_interval(result.probs[1])}")
    lines.append(f"depth {result.depth}")
    return lines


@render.register(NotSeparatedAtLevel)
def _render_not_separated(result, names=None):
    return [f"verdict not-separated at level {result.level}", f"reason {result.reason}"]


@render.register(VerificationTimeout)
def _render_timeout(result, names=None):
    return ["verdict verification-timeout"] + render(result.witness, names)[1:]


@render.register(ContextWitness)
def _render_context(result, names=None):
    verdict = "separated" if result.separates else "not-separated"
    return [
        f"verdict {verdict}",
        f"context {print_term(result.context, names)}",
        f"left {_interval(result.probs[0])}",
        f"right {_interval(result.probs[1])}",
        f"depth {result.depth}",
    ]


@exit_code.register(ContextWitness)
def _context_code(result):
    return EXIT_POSITIVE if result.separates else EXIT_INCONCLUSIVE


@render.register(FormalSum)
@render.register(ExtApp)
@render.register(Term)
def _render_ext(result, names=None):
    return [print_ext(result)]


@render.register(FSResult)
def _render_fs(result, names=None):
    lines = [f"value {print_term(term, names)} {frac(weight)}" for term, weight in result.value.canonical()]
    lines.append(f"mass {frac(result.value.mass)}")
    lines.append(f"residual {frac(result.residual)}")
    lines.append(f"steps {result.steps}")
    return lines


@exit_code.register(FSResult)
def _fs_code(result):
    return EXIT_POSITIVE if result.reached else EXIT_INCONCLUSIVE


@render.register(Pass)
def _render_pass(result, names=None):
    lines = ["verdict pass", f"pairs {result.pairs_checked}"]
    lines.extend(f"unresolved {print_ext(e)} | {print_ext(f)}" for e, f in result.unresolved)
    return lines


@exit_code.register(Pass)
def _pass_code(result):
    return EXIT_INCONCLUSIVE if result.unresolved else EXIT_POSITIVE


@render.register(Fail)
def _render_fail(result, names=None):
    e, f = result.pair
    return [
        "verdict fail",
        f"pair {print_ext(e)} | {print_ext(f)}",
        f"direction {result.direction}",
        f"clause {result.clause}",
        f"witness {result.witness}",
        f"exact {'yes' if result.exact else 'no'}",
    ]


@render.register(DisentangleResult)
def _render_disentangle(result, names=None):
    shares = sorted(result.s.items(), key=lambda item: (item[0][0], len(item[0][1]), sorted(item[0][1])))
    return [f"s {k} {_subset_text(subset)} {frac(value)}" for (k, subset), value in shares if value]


@render.register(Partition)
def _render_partition(result, names=None):
    return ["block " + " ".join(str(s) for s in sorted(block)) for block in result.blocks]


@render.register(SimulationResult)
def _render_simulation(result, names=None):
    lines = [f"pair {s} {t}" for s, t in sorted(result.relation.pairs)]
    for removal in result.removals:
        s, t = removal.pair
        lines.append(
            f"removed {s} {t} round {removal.round} label {removal.label} "
            f"required {frac(removal.required)} achieved {frac(removal.achieved)}"
        )
    return lines
