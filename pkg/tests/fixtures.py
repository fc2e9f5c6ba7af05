import os
import random
from fractions import Fraction

import pytest

from plambda.flow import ProbabilityAssignment
from plambda.lmc import MLMC
from plambda.syntax import Abs, App, Choice, Term, Var, parse_term

STRATEGY_NAMES = ["cbn", "cbv"]
UNHANDLED_STRATEGIES = ["cbneed", "lazy", 3, None]
CHECKER_MODES = ["smallstep", "bigstep", "upto_fs", "upto_ctx"]
FORMAT_EXTENSIONS = [
    ("lop", "definitions"),
    ("defs", "definitions"),
    ("args", "arguments"),
    ("stk", "stacks"),
    ("lmc", "lmc"),
    ("pa", "assignment"),
    ("rel", "relation"),
]
INVALID_EXTENSIONS = ["", "unknown"]
CONVERGENT_TERMS = [
    ("I", Fraction(1)),
    ("I (+) OMEGA", Fraction(1, 2)),
    ("I (+) (K (+) OMEGA)", Fraction(3, 4)),
    ("(\\x. x x) (I (+) OMEGA)", Fraction(1, 4)),
    ("OMEGA", Fraction(0)),
]
CORPUS_DIRECTORY = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")
RANDOM_CHAINS = 500
RANDOM_TERMS = 50


@pytest.fixture(scope="module", params=STRATEGY_NAMES, ids=str)
def strategies(request):
    return request.param


@pytest.fixture(scope="module", params=UNHANDLED_STRATEGIES, ids=str)
def wrong_strategies(request):
    return request.param


@pytest.fixture(scope="module", params=CHECKER_MODES, ids=str)
def checker_modes(request):
    return request.param


@pytest.fixture(scope="module", params=FORMAT_EXTENSIONS, ids=str)
def format_extensions(request):
    return request.param


@pytest.fixture(scope="module", params=INVALID_EXTENSIONS, ids=str)
def invalid_extensions(request):
    return request.param


@pytest.fixture(scope="module", params=CONVERGENT_TERMS, ids=lambda case: case[0])
def convergent_terms(request):
    text, prob = request.param
    return parse_term(text), prob


@pytest.fixture(scope="module")
def venn_assignment():
    r = {
        frozenset({1}): Fraction(1, 16),
        frozenset({2}): Fraction(1, 8),
        frozenset({3}): Fraction(1, 16),
        frozenset({1, 2}): Fraction(1, 32),
        frozenset({2, 3}): Fraction(1, 32),
        frozenset({1, 3}): Fraction(0),
        frozenset({1, 2, 3}): Fraction(1, 16),
    }
    return ProbabilityAssignment(3, (Fraction(5, 64), Fraction(3, 16), Fraction(5, 64)), r)


@pytest.fixture(scope="module")
def corpus_directory():
    return CORPUS_DIRECTORY


def random_chain(rng: random.Random, max_states: int = 6, max_labels: int = 2) -> MLMC:
    """A small exact chain with two sorts and dyadic probabilities."""
    n_states = rng.randint(1, max_states)
    n_labels = rng.randint(1, max_labels)
    state_sorts = [rng.randint(0, 1) for _ in range(n_states)]
    label_sorts = [rng.randint(0, 1) for _ in range(n_labels)]
    trans = {}
    for s in range(n_states):
        for l in range(n_labels):
            if state_sorts[s] != label_sorts[l] or rng.random() < 0.3:
                continue
            budget = 8
            row = {}
            for t in rng.sample(range(n_states), rng.randint(1, n_states)):
                share = rng.randint(0, budget)
                budget -= share
                if share:
                    row[t] = row.get(t, Fraction(0)) + Fraction(share, 8)
            trans[(s, l)] = row
    sorted_trans = {}
    for (s, l), row in trans.items():
        if not row:
            continue
        sorts = {state_sorts[t] for t in row}
        # every target of a label must share a sort
        target = min(sorts)
        sorted_trans[(s, l)] = {t: w for t, w in row.items() if state_sorts[t] == target}
    targets = {}
    kept = {}
    for (s, l), row in sorted_trans.items():
        sort = state_sorts[next(iter(row))]
        if targets.setdefault(l, sort) == sort:
            kept[(s, l)] = row
    return MLMC(state_sorts, label_sorts, kept)


@pytest.fixture(scope="module")
def random_chains():
    rng = random.Random(20201018)
    return [random_chain(rng) for _ in range(RANDOM_CHAINS)]


def random_assignment(rng: random.Random) -> ProbabilityAssignment:
    """A probability assignment built from a known disentanglement, so it is always valid."""
    n = rng.randint(1, 5)
    indices = range(1, n + 1)
    subsets = [
        frozenset(i for i in indices if mask >> (i - 1) & 1) for mask in range(1, 2 ** n)
    ]
    budget = 32
    r = {}
    for subset in subsets:
        share = rng.randint(0, budget)
        budget -= share
        r[subset] = Fraction(share, 32)
    p = []
    for k in indices:
        containing = [subset for subset in subsets if k in subset]
        p.append(
            sum((r[subset] / len(subset) for subset in containing), Fraction(0))
            * Fraction(rng.randint(0, 4), 4)
        )
    return ProbabilityAssignment(n, tuple(p), r)


@pytest.fixture(scope="module")
def random_assignments():
    rng = random.Random(1018)
    return [random_assignment(rng) for _ in range(RANDOM_CHAINS)]


def random_term(rng: random.Random, size: int, scope: tuple = ()) -> Term:
    """A closed term of about ``size`` constructors; binders are named by their depth."""
    if size <= 1:
        if scope:
            return Var(rng.choice(scope))
        return Abs("x0", Var("x0"))
    kind = rng.choice(["abs", "app", "choice"])
    if kind == "abs":
        binder = f"x{len(scope)}"
        return Abs(binder, random_term(rng, size - 1, scope + (binder,)))
    left = rng.randint(1, max(1, size - 2))
    right = max(1, size - 1 - left)
    constructor = App if kind == "app" else Choice
    return constructor(random_term(rng, left, scope), random_term(rng, right, scope))


def random_redex(rng: random.Random):
    """A β-redex ``(λx0.body) arg`` split into its abstraction and its closed argument."""
    body = random_term(rng, rng.randint(1, 6), ("x0",))
    return Abs("x0", body), random_term(rng, rng.randint(1, 5))


@pytest.fixture(scope="module")
def random_terms():
    rng = random.Random(18102020)
    return [random_term(rng, rng.randint(1, 7)) for _ in range(RANDOM_TERMS)]


@pytest.fixture(scope="module")
def random_redexes():
    rng = random.Random(1810)
    return [random_redex(rng) for _ in range(RANDOM_TERMS)]
