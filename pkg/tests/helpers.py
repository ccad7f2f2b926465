"""Shared test utilities: random generators and independent oracles.

Everything here is deliberately written from first principles (plain
recursion, no reuse of the library's evaluator internals) so that tests
compare the package against genuinely independent reference behaviour.
"""

from __future__ import annotations

import random
from fractions import Fraction

from godelmodal import (
    BOT,
    ONE,
    ZERO,
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Implies,
    OrderEmbedding,
    PiGFModel,
    PiGModel,
    TruthSet,
    Var,
    complexity_ell,
    variables,
)

# --------------------------------------------------------------------------
# Random formulas
# --------------------------------------------------------------------------


def random_formula(rng: random.Random, names=("p", "q"), depth: int = 3) -> Formula:
    """One random formula over the primitive connectives, depth-bounded."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.85:
            return Var(rng.choice(names))
        return BOT
    roll = rng.random()
    if roll < 0.3:
        return And(
            random_formula(rng, names, depth - 1),
            random_formula(rng, names, depth - 1),
        )
    if roll < 0.6:
        return Implies(
            random_formula(rng, names, depth - 1),
            random_formula(rng, names, depth - 1),
        )
    if roll < 0.8:
        return Box(random_formula(rng, names, depth - 1))
    return Dia(random_formula(rng, names, depth - 1))


def random_formula_bounded(
    rng: random.Random,
    names=("p", "q"),
    max_ell: int = 8,
    require_var: bool = False,
) -> Formula:
    """Random formula with complexity at most ``max_ell``.

    With ``require_var`` the formula is guaranteed to contain at least one
    propositional variable (pure-falsum formulas are redrawn).
    """
    while True:
        f = random_formula(rng, names)
        if complexity_ell(f) > max_ell:
            continue
        if require_var and not variables(f):
            continue
        return f


# --------------------------------------------------------------------------
# Random truth values, truth sets, models
# --------------------------------------------------------------------------

_DENOMS = (2, 3, 4, 5, 6, 8, 12)


def random_value(rng: random.Random) -> Fraction:
    roll = rng.random()
    if roll < 0.2:
        return ZERO
    if roll < 0.4:
        return ONE
    d = rng.choice(_DENOMS)
    return Fraction(rng.randint(0, d), d)


def random_truth_set(rng: random.Random, max_interior: int = 3) -> TruthSet:
    interior = set()
    for _ in range(rng.randint(0, max_interior)):
        d = rng.choice(_DENOMS)
        n = rng.randint(1, d - 1)
        interior.add(Fraction(n, d))
    return TruthSet([ZERO, ONE, *interior])


def random_pig(
    rng: random.Random,
    n_worlds: int,
    names=("p", "q"),
    normalized: bool = False,
    crisp: bool = False,
) -> PiGModel:
    worlds = tuple(f"w{i + 1}" for i in range(n_worlds))
    draw = (lambda: Fraction(rng.randint(0, 1))) if crisp else (lambda: random_value(rng))
    pi = {w: draw() for w in worlds}
    if normalized:
        pi[rng.choice(worlds)] = ONE
    valuation = {w: {v: draw() for v in names} for w in worlds}
    return PiGModel(worlds, pi, valuation)


def random_pigf(
    rng: random.Random,
    n_worlds: int,
    names=("p", "q"),
    max_interior: int = 3,
) -> PiGFModel:
    base = random_pig(rng, n_worlds, names)
    return PiGFModel(base, random_truth_set(rng, max_interior))


# --------------------------------------------------------------------------
# Random order-embedding fixing a truth set pointwise
# --------------------------------------------------------------------------


def random_fixing_embedding(rng: random.Random, truth_set: TruthSet) -> OrderEmbedding:
    """Piecewise-linear order embedding that fixes every member of the set.

    Each gap between consecutive members optionally gets one interior bend,
    which keeps the breakpoint sequence strictly increasing in both
    coordinates by construction.
    """
    members = list(truth_set)
    points = []
    for lo, hi in zip(members, members[1:]):
        points.append((lo, lo))
        if rng.random() < 0.7:
            span = hi - lo
            x = lo + span * Fraction(rng.randint(1, 5), 6)
            y = lo + span * Fraction(rng.randint(1, 5), 6)
            points.append((x, y))
    points.append((ONE, ONE))
    return OrderEmbedding(points)


# --------------------------------------------------------------------------
# Independent classical oracle (two-valued Kripke semantics)
# --------------------------------------------------------------------------


def classical_eval(worlds, accessible, valuation, world, formula) -> bool:
    """Brute-force two-valued Kripke evaluation over a constant frame.

    ``accessible`` is the single set of worlds every world can see; the
    valuation maps world -> variable -> bool.
    """
    if isinstance(formula, Bot):
        return False
    if isinstance(formula, Var):
        return bool(valuation.get(world, {}).get(formula.name, False))
    if isinstance(formula, And):
        return classical_eval(worlds, accessible, valuation, world, formula.left) and classical_eval(
            worlds, accessible, valuation, world, formula.right
        )
    if isinstance(formula, Implies):
        return (not classical_eval(worlds, accessible, valuation, world, formula.left)) or classical_eval(
            worlds, accessible, valuation, world, formula.right
        )
    if isinstance(formula, Box):
        return all(classical_eval(worlds, accessible, valuation, w, formula.body) for w in accessible)
    if isinstance(formula, Dia):
        return any(classical_eval(worlds, accessible, valuation, w, formula.body) for w in accessible)
    raise TypeError(f"unexpected node {formula!r}")
