"""Possibilistic and relational Kripke models over the Godel algebra.

Three model classes share one evaluation style:

  PiGModel         worlds with a possibility degree pi; modal values are exact
                   infima/suprema (minima/maxima, worlds are finite).
  PiGFModel        a PiGModel plus a finite truth set T; box values are rounded
                   down into T and diamond values up, propositional connectives
                   are never rounded.
  RelationalModel  a many-valued accessibility relation R; evaluation at w uses
                   R(w, .) where the possibilistic classes use pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import (
    ONE,
    ZERO,
    TruthSet,
    format_rational,
    godel_implies,
    parse_rational,
    round_down,
    round_up,
    OrderEmbedding,
    apply_embedding,
)
from .syntax import And, Bot, Box, Dia, Formula, Implies, Var


class UnknownWorldError(KeyError):
    pass


def _coerce_values(mapping: Mapping[str, object], what: str) -> dict[str, Fraction]:
    out = {}
    for key, raw in mapping.items():
        value = Fraction(raw)
        if not ZERO <= value <= ONE:
            raise ValueError(f"{what} value {value} outside [0, 1]")
        out[str(key)] = value
    return out


@dataclass(frozen=True)
class PiGModel:
    """Finite set of worlds, a possibility distribution, and a valuation.

    Variables missing from a world's valuation row evaluate to 0.  The world
    tuple fixes the iteration order used everywhere downstream.
    """

    worlds: tuple[str, ...]
    pi: Mapping[str, Fraction]
    valuation: Mapping[str, Mapping[str, Fraction]]

    def __init__(
        self,
        worlds,
        pi: Mapping[str, object],
        valuation: Mapping[str, Mapping[str, object]] | None = None,
    ) -> None:
        ws = tuple(str(w) for w in worlds)
        if not ws:
            raise ValueError("a model needs at least one world")
        if len(set(ws)) != len(ws):
            raise ValueError("world names must be unique")
        pi_map = _coerce_values(pi, "pi")
        missing = [w for w in ws if w not in pi_map]
        if missing:
            raise ValueError(f"pi not defined at {missing[0]!r}")
        val = {}
        for w, row in (valuation or {}).items():
            if str(w) not in ws:
                raise ValueError(f"valuation mentions unknown world {w!r}")
            val[str(w)] = _coerce_values(row, "valuation")
        object.__setattr__(self, "worlds", ws)
        object.__setattr__(self, "pi", {w: pi_map[w] for w in ws})
        object.__setattr__(self, "valuation", val)

    def value(self, world: str, variable: str) -> Fraction:
        return self.valuation.get(world, {}).get(variable, ZERO)


@dataclass(frozen=True)
class PiGFModel:
    """A possibilistic model whose modal values are rounded into a truth set."""

    base: PiGModel
    truth_set: TruthSet

    @property
    def worlds(self) -> tuple[str, ...]:
        return self.base.worlds

    @property
    def pi(self) -> Mapping[str, Fraction]:
        return self.base.pi

    def value(self, world: str, variable: str) -> Fraction:
        return self.base.value(world, variable)


@dataclass(frozen=True)
class RelationalModel:
    """Worlds with a many-valued accessibility relation; missing pairs are 0."""

    worlds: tuple[str, ...]
    R: Mapping[str, Mapping[str, Fraction]]
    valuation: Mapping[str, Mapping[str, Fraction]]

    def __init__(self, worlds, R, valuation=None) -> None:
        ws = tuple(str(w) for w in worlds)
        if not ws:
            raise ValueError("a model needs at least one world")
        if len(set(ws)) != len(ws):
            raise ValueError("world names must be unique")
        rel = {}
        for w, row in (R or {}).items():
            if str(w) not in ws:
                raise ValueError(f"R mentions unknown world {w!r}")
            row = _coerce_values(row, "R")
            for w2 in row:
                if w2 not in ws:
                    raise ValueError(f"R mentions unknown world {w2!r}")
            rel[str(w)] = row
        val = {}
        for w, row in (valuation or {}).items():
            if str(w) not in ws:
                raise ValueError(f"valuation mentions unknown world {w!r}")
            val[str(w)] = _coerce_values(row, "valuation")
        object.__setattr__(self, "worlds", ws)
        object.__setattr__(self, "R", rel)
        object.__setattr__(self, "valuation", val)

    def rel(self, w: str, w2: str) -> Fraction:
        return self.R.get(w, {}).get(w2, ZERO)

    def value(self, world: str, variable: str) -> Fraction:
        return self.valuation.get(world, {}).get(variable, ZERO)


def _check_world(worlds: tuple[str, ...], world: str) -> None:
    if world not in worlds:
        raise UnknownWorldError(f"unknown world {world!r}")


def _values_on_worlds(
    model: PiGModel,
    formula: Formula,
    truth_set: TruthSet | None,
    memo: dict[Formula, tuple[Fraction, ...]],
) -> tuple[Fraction, ...]:
    # One value per world, in world order.  Box and diamond values never
    # depend on the evaluation world, so they are computed once and broadcast.
    cached = memo.get(formula)
    if cached is not None:
        return cached
    worlds = model.worlds
    if isinstance(formula, Bot):
        out = (ZERO,) * len(worlds)
    elif isinstance(formula, Var):
        out = tuple(model.value(w, formula.name) for w in worlds)
    elif isinstance(formula, And):
        ls = _values_on_worlds(model, formula.left, truth_set, memo)
        rs = _values_on_worlds(model, formula.right, truth_set, memo)
        out = tuple(min(a, b) for a, b in zip(ls, rs))
    elif isinstance(formula, Implies):
        ls = _values_on_worlds(model, formula.left, truth_set, memo)
        rs = _values_on_worlds(model, formula.right, truth_set, memo)
        out = tuple(godel_implies(a, b) for a, b in zip(ls, rs))
    elif isinstance(formula, Box):
        body = _values_on_worlds(model, formula.body, truth_set, memo)
        v = min(godel_implies(model.pi[w], b) for w, b in zip(worlds, body))
        if truth_set is not None:
            v = round_down(truth_set, v)
        out = (v,) * len(worlds)
    elif isinstance(formula, Dia):
        body = _values_on_worlds(model, formula.body, truth_set, memo)
        v = max(min(model.pi[w], b) for w, b in zip(worlds, body))
        if truth_set is not None:
            v = round_up(truth_set, v)
        out = (v,) * len(worlds)
    else:
        raise TypeError(f"not a formula: {formula!r}")
    memo[formula] = out
    return out


def eval_pig(model: PiGModel, world: str, formula: Formula) -> Fraction:
    """Exact evaluation in a possibilistic model."""
    _check_world(model.worlds, world)
    values = _values_on_worlds(model, formula, None, {})
    return values[model.worlds.index(world)]


def eval_pigf(model: PiGFModel, world: str, formula: Formula) -> Fraction:
    """Evaluation with box rounded down and diamond rounded up into the truth set."""
    _check_world(model.worlds, world)
    values = _values_on_worlds(model.base, formula, model.truth_set, {})
    return values[model.worlds.index(world)]


def eval_rel(model: RelationalModel, world: str, formula: Formula) -> Fraction:
    """Evaluation over an accessibility relation; modal values vary per world."""
    _check_world(model.worlds, world)
    return _rel_values(model, formula, {})[model.worlds.index(world)]


def _rel_values(
    model: RelationalModel,
    formula: Formula,
    memo: dict[Formula, tuple[Fraction, ...]],
) -> tuple[Fraction, ...]:
    cached = memo.get(formula)
    if cached is not None:
        return cached
    worlds = model.worlds
    if isinstance(formula, Bot):
        out = (ZERO,) * len(worlds)
    elif isinstance(formula, Var):
        out = tuple(model.value(w, formula.name) for w in worlds)
    elif isinstance(formula, And):
        ls = _rel_values(model, formula.left, memo)
        rs = _rel_values(model, formula.right, memo)
        out = tuple(min(a, b) for a, b in zip(ls, rs))
    elif isinstance(formula, Implies):
        ls = _rel_values(model, formula.left, memo)
        rs = _rel_values(model, formula.right, memo)
        out = tuple(godel_implies(a, b) for a, b in zip(ls, rs))
    elif isinstance(formula, Box):
        body = _rel_values(model, formula.body, memo)
        out = tuple(
            min(godel_implies(model.rel(w, w2), b) for w2, b in zip(worlds, body))
            for w in worlds
        )
    elif isinstance(formula, Dia):
        body = _rel_values(model, formula.body, memo)
        out = tuple(
            max(min(model.rel(w, w2), b) for w2, b in zip(worlds, body))
            for w in worlds
        )
    else:
        raise TypeError(f"not a formula: {formula!r}")
    memo[formula] = out
    return out


def embed_pig(model: PiGModel) -> RelationalModel:
    """The relational rendering of a possibilistic model: R(w, w') = pi(w')."""
    rel = {w: dict(model.pi) for w in model.worlds}
    return RelationalModel(model.worlds, rel, model.valuation)


@dataclass(frozen=True)
class FrameReport:
    """Many-valued frame properties with violating witnesses when they fail."""

    transitive: bool
    euclidean: bool
    serial: bool
    transitivity_witnesses: tuple[tuple[str, str, str], ...]
    euclidean_witnesses: tuple[tuple[str, str, str], ...]
    seriality_witnesses: tuple[str, ...]


def frame_report(model: RelationalModel) -> FrameReport:
    """Check min-transitivity, min-euclideanness and seriality of R."""
    ws = model.worlds
    trans = []
    eucl = []
    for w in ws:
        for w1 in ws:
            r01 = model.rel(w, w1)
            for w2 in ws:
                if min(r01, model.rel(w1, w2)) > model.rel(w, w2):
                    trans.append((w, w1, w2))
                if min(r01, model.rel(w, w2)) > model.rel(w1, w2):
                    eucl.append((w, w1, w2))
    serial = [w for w in ws if max(model.rel(w, w2) for w2 in ws) != ONE]
    return FrameReport(
        transitive=not trans,
        euclidean=not eucl,
        serial=not serial,
        transitivity_witnesses=tuple(trans),
        euclidean_witnesses=tuple(eucl),
        seriality_witnesses=tuple(serial),
    )


def inconsistency_degree(model: PiGModel) -> Fraction:
    """1 minus the largest possibility degree."""
    return ONE - max(model.pi[w] for w in model.worlds)


def is_normalized(model: PiGModel) -> bool:
    """True when some world has possibility degree exactly 1."""
    return any(model.pi[w] == ONE for w in model.worlds)


def _closure_check(sigma: frozenset[Formula]) -> None:
    if Bot() not in sigma:
        raise ValueError("fragment must contain bottom")
    for f in sigma:
        if isinstance(f, (And, Implies)):
            children = (f.left, f.right)
        elif isinstance(f, (Box, Dia)):
            children = (f.body,)
        else:
            children = ()
        for child in children:
            if child not in sigma:
                raise ValueError("fragment is not closed under subformulas")


def filtrate(model: PiGModel, sigma: frozenset[Formula], x: str) -> PiGFModel:
    """Collapse a possibilistic model to a small rounded model that agrees
    with it on every formula of the fragment sigma at the world x.

    The truth set collects the modal values the fragment takes, plus 0 and 1.
    The kept worlds are x together with one witness per box formula whose
    value is below 1 (a world keeping the infimum below the next truth value)
    and per diamond formula whose value is above 0 (a world keeping the
    supremum above the previous one).  Witnesses are the first qualifying
    worlds in the model's stored order.
    """
    _check_world(model.worlds, x)
    _closure_check(sigma)
    memo: dict[Formula, tuple[Fraction, ...]] = {}
    modal = [f for f in sigma if isinstance(f, (Box, Dia))]
    modal.sort(key=lambda f: (len(repr(f)), repr(f)))
    x_index = model.worlds.index(x)
    values = {
        f: _values_on_worlds(model, f, None, memo)[x_index] for f in modal
    }
    truth_set = TruthSet(set(values.values()) | {ZERO, ONE})
    alphas = truth_set.values
    kept = {x}
    for f in modal:
        v = values[f]
        i = alphas.index(v)
        body = _values_on_worlds(model, f.body, None, memo)
        if isinstance(f, Box) and v < ONE:
            ceiling = alphas[i + 1]
            witness = next(
                w
                for w, b in zip(model.worlds, body)
                if godel_implies(model.pi[w], b) < ceiling
            )
        elif isinstance(f, Dia) and v > ZERO:
            floor = alphas[i - 1]
            witness = next(
                w
                for w, b in zip(model.worlds, body)
                if min(model.pi[w], b) > floor
            )
        else:
            continue
        kept.add(witness)
    small_worlds = tuple(w for w in model.worlds if w in kept)
    pi = {w: model.pi[w] for w in small_worlds}
    valuation = {w: dict(model.valuation.get(w, {})) for w in small_worlds}
    return PiGFModel(PiGModel(small_worlds, pi, valuation), truth_set)


def transport(model: PiGFModel, h: OrderEmbedding) -> PiGFModel:
    """Push pi and the valuation through an order embedding that fixes the
    truth set pointwise; raises ValueError if h moves a truth set member."""
    moved = [t for t in model.truth_set if apply_embedding(h, t) != t]
    if moved:
        raise ValueError(
            f"embedding moves truth set member {format_rational(moved[0])}"
        )
    base = model.base
    pi = {w: apply_embedding(h, base.pi[w]) for w in base.worlds}
    valuation = {
        w: {p: apply_embedding(h, v) for p, v in row.items()}
        for w, row in base.valuation.items()
    }
    return PiGFModel(PiGModel(base.worlds, pi, valuation), model.truth_set)


def model_to_json(model: PiGModel | PiGFModel | RelationalModel) -> dict:
    """Render a model as the JSON file structure with rational strings."""
    if isinstance(model, PiGFModel):
        doc = model_to_json(model.base)
        doc["truth_set"] = [format_rational(t) for t in model.truth_set]
        return doc
    if isinstance(model, RelationalModel):
        return {
            "worlds": list(model.worlds),
            "R": {
                w: {w2: format_rational(v) for w2, v in model.R.get(w, {}).items()}
                for w in model.worlds
            },
            "valuation": {
                w: {p: format_rational(v) for p, v in model.valuation.get(w, {}).items()}
                for w in model.worlds
            },
        }
    return {
        "worlds": list(model.worlds),
        "pi": {w: format_rational(model.pi[w]) for w in model.worlds},
        "valuation": {
            w: {p: format_rational(v) for p, v in model.valuation.get(w, {}).items()}
            for w in model.worlds
        },
    }


def model_from_json(doc: object) -> PiGModel | PiGFModel | RelationalModel:
    """Parse the JSON file structure; the keys present select the model class."""
    if not isinstance(doc, dict):
        raise ValueError("model document must be a JSON object")
    try:
        worlds = list(doc["worlds"])
    except KeyError:
        raise ValueError("model document lacks 'worlds'") from None
    valuation = {
        w: {str(p): parse_rational(str(v)) for p, v in row.items()}
        for w, row in doc.get("valuation", {}).items()
    }
    if "R" in doc:
        if "pi" in doc or "truth_set" in doc:
            raise ValueError("relational model must not carry 'pi' or 'truth_set'")
        rel = {
            w: {w2: parse_rational(str(v)) for w2, v in row.items()}
            for w, row in doc["R"].items()
        }
        return RelationalModel(worlds, rel, valuation)
    if "pi" not in doc:
        raise ValueError("model document lacks 'pi' or 'R'")
    pi = {w: parse_rational(str(v)) for w, v in doc["pi"].items()}
    base = PiGModel(worlds, pi, valuation)
    if "truth_set" in doc:
        return PiGFModel(base, TruthSet(parse_rational(str(t)) for t in doc["truth_set"]))
    return base
