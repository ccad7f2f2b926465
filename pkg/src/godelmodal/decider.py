"""Validity checking by bounded countermodel search.

A formula is valid over the rounded possibilistic semantics exactly when no
model with |W| + |T| below a bound derived from the formula's subformula
count refutes it.  Only the relative order of the finitely many values in a
model matters to evaluation, so the search enumerates one representative per
order type, realized on the evenly spaced rational grid.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from .algebra import ONE, ZERO, TruthSet, round_down, round_up
from .semantics import (
    PiGFModel,
    PiGModel,
    _values_on_worlds,
    eval_pigf,
    is_normalized,
)
from .syntax import (
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Implies,
    LogicId,
    Var,
    complexity_ell,
    variables,
)

MODES = ("exhaustive", "random", "hybrid")


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "hybrid"
    budget: int = 10_000
    seed: int = 0
    max_worlds: int | None = None
    max_truth: int | None = None


@dataclass(frozen=True)
class Valid:
    bound_used: int
    models_checked: int


@dataclass(frozen=True)
class Refuted:
    countermodel: PiGFModel
    world: str
    value: Fraction


@dataclass(frozen=True)
class Unknown:
    description: str
    budget: int


Verdict = Valid | Refuted | Unknown


def bound_for(f: Formula) -> int:
    """Ceiling on |W| + |T| that a complete countermodel sweep must reach."""
    return 2 * (complexity_ell(f) + 2)


def _check_config(cfg: SearchConfig) -> None:
    if cfg.mode not in MODES:
        raise ValueError(f"unknown search mode {cfg.mode!r}")
    if cfg.budget < 0:
        raise ValueError("budget must be nonnegative")
    if cfg.max_worlds is not None and cfg.max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    if cfg.max_truth is not None and cfg.max_truth < 2:
        raise ValueError("max_truth must be at least 2")


def _satisfies_logic(model: PiGModel, logic: LogicId) -> bool:
    if logic is LogicId.KD45:
        return is_normalized(model)
    if logic is LogicId.S5:
        return all(model.pi[w] == ONE for w in model.worlds)
    return True


# ---------------------------------------------------------------------------
# canonical enumeration
#
# A model assigns values to slots: one pi value per world, one valuation
# value per world and variable, plus the interior members of T.  Values are
# encoded as integer codes 0, 1..j, j+1 where j is the number of distinct
# interior values: code 0 is 0, code j+1 is 1, interior code c realizes the
# grid point c/K.  Every interior code must be used by a model slot or claimed
# by T, which makes each order type appear exactly once.


def _decode(code: int, top_code: int, k_grid: int) -> Fraction:
    if code == 0:
        return ZERO
    if code == top_code:
        return ONE
    return Fraction(code, k_grid)


def _world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


def _materialize(
    names: Sequence[str],
    rows: Sequence[Sequence[int]],
    t_ranks: Sequence[int],
    top_code: int,
    k_grid: int,
) -> PiGFModel:
    worlds = _world_names(len(rows))
    pi = {w: _decode(row[0], top_code, k_grid) for w, row in zip(worlds, rows)}
    valuation = {
        w: {p: _decode(row[1 + i], top_code, k_grid) for i, p in enumerate(names)}
        for w, row in zip(worlds, rows)
    }
    truth = TruthSet(
        [ZERO, ONE] + [Fraction(r, k_grid) for r in t_ranks]
    )
    return PiGFModel(PiGModel(worlds, pi, valuation), truth)


def enumerate_canonical(
    n_worlds: int,
    n_truth: int,
    vars: frozenset[str] | set[str] | Sequence[str],
    logic: LogicId,
) -> Iterator[PiGFModel]:
    """Yield one model per order type of the given dimensions.

    All values are drawn from the grid {0, 1/K, ..., 1} with
    K = n_worlds * (len(vars) + 1) + n_truth; two assignments that induce the
    same relative order of slot values, with 0 and 1 pinned and the same
    pattern of membership in the truth set, are produced once.
    """
    if n_worlds < 1:
        raise ValueError("need at least one world")
    if n_truth < 2:
        raise ValueError("truth set needs at least 0 and 1")
    names = tuple(sorted(vars))
    width = 1 + len(names)
    n_slots = n_worlds * width
    k_grid = n_slots + n_truth
    for j in range(n_slots + n_truth - 2 + 1):
        top_code = j + 1
        for t_ranks in combinations(range(1, j + 1), n_truth - 2):
            required = frozenset(range(1, j + 1)) - frozenset(t_ranks)
            for codes in product(range(top_code + 1), repeat=n_slots):
                if required and not required.issubset(codes):
                    continue
                pi_codes = codes[:n_worlds]
                if logic is LogicId.KD45 and top_code not in pi_codes:
                    continue
                if logic is LogicId.S5 and any(c != top_code for c in pi_codes):
                    continue
                rows = [
                    (codes[i],) + codes[n_worlds + i * len(names): n_worlds + (i + 1) * len(names)]
                    for i in range(n_worlds)
                ]
                yield _materialize(names, rows, t_ranks, top_code, k_grid)


# The exhaustive sweep additionally identifies models that only differ by a
# renaming of worlds: rows are generated in nondecreasing order.  Renaming is
# a model isomorphism, so coverage of order types up to the bound is kept; it
# cuts the sweep by a factor of up to n! per size.


def _sorted_row_models(
    alphabet: Sequence[tuple[int, ...]],
    masks: Sequence[int],
    n_rows: int,
    need: int,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    size = len(alphabet)
    suffix = [0] * (size + 1)
    for i in range(size - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    chosen: list[tuple[int, ...]] = [()] * n_rows

    def rec(start: int, depth: int, acc: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if depth == n_rows:
            if not (need & ~acc):
                yield tuple(chosen)
            return
        for i in range(start, size):
            if need & ~(acc | suffix[i]):
                break
            chosen[depth] = alphabet[i]
            yield from rec(i, depth + 1, acc | masks[i])

    yield from rec(0, 0, 0)


def _sweep_size(
    n_worlds: int,
    n_truth: int,
    names: tuple[str, ...],
    logic: LogicId,
) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...], list[int], int, int]]:
    """Canonical world-sorted models of exactly these dimensions, as integer
    code structures (rows, t_ranks, t_codes, top_code, k_grid)."""
    width = 1 + len(names)
    k_grid = n_worlds * width + n_truth
    for j in range(n_worlds * width + n_truth - 2 + 1):
        top_code = j + 1
        space = product(range(top_code + 1), repeat=width)
        if logic is LogicId.S5:
            alphabet = [row for row in space if row[0] == top_code]
        else:
            alphabet = list(space)
        masks = []
        for row in alphabet:
            mask = 0
            for c in row:
                if 0 < c <= j:
                    mask |= 1 << c
            if row[0] == top_code:
                mask |= 1  # normalization marker: some world fully possible
            masks.append(mask)
        for t_ranks in combinations(range(1, j + 1), n_truth - 2):
            need = 1 if logic is not LogicId.K45 else 0
            in_t = set(t_ranks)
            for r in range(1, j + 1):
                if r not in in_t:
                    need |= 1 << r
            t_codes = sorted({0, top_code} | in_t)
            for rows in _sorted_row_models(alphabet, masks, n_worlds, need):
                yield rows, t_ranks, t_codes, top_code, k_grid


def _compile(f: Formula, names: tuple[str, ...]) -> list[tuple]:
    """Postorder op list; identical subformulas share one entry."""
    index: dict[Formula, int] = {}
    ops: list[tuple] = []

    def visit(g: Formula) -> int:
        got = index.get(g)
        if got is not None:
            return got
        if isinstance(g, Bot):
            op = ("bot",)
        elif isinstance(g, Var):
            op = ("var", names.index(g.name))
        elif isinstance(g, And):
            op = ("and", visit(g.left), visit(g.right))
        elif isinstance(g, Implies):
            op = ("imp", visit(g.left), visit(g.right))
        elif isinstance(g, Box):
            op = ("box", visit(g.body))
        elif isinstance(g, Dia):
            op = ("dia", visit(g.body))
        else:
            raise TypeError(f"not a formula: {g!r}")
        ops.append(op)
        index[g] = len(ops) - 1
        return index[g]

    visit(f)
    return ops


def _eval_codes(
    ops: list[tuple],
    rows: Sequence[tuple[int, ...]],
    t_codes: list[int],
    top: int,
) -> list[int]:
    """Evaluate the compiled formula over integer codes; returns the root
    value at each world."""
    n = len(rows)
    pis = [row[0] for row in rows]
    vals: list[list[int]] = []
    for op in ops:
        tag = op[0]
        if tag == "bot":
            out = [0] * n
        elif tag == "var":
            col = 1 + op[1]
            out = [row[col] for row in rows]
        elif tag == "and":
            a, b = vals[op[1]], vals[op[2]]
            out = [x if x < y else y for x, y in zip(a, b)]
        elif tag == "imp":
            a, b = vals[op[1]], vals[op[2]]
            out = [top if x <= y else y for x, y in zip(a, b)]
        elif tag == "box":
            body = vals[op[1]]
            c = top
            for p, x in zip(pis, body):
                v = top if p <= x else x
                if v < c:
                    c = v
            c = t_codes[bisect_right(t_codes, c) - 1]
            out = [c] * n
        else:
            body = vals[op[1]]
            c = 0
            for p, x in zip(pis, body):
                v = p if p < x else x
                if v > c:
                    c = v
            c = t_codes[bisect_left(t_codes, c)]
            out = [c] * n
        vals.append(out)
    return vals[-1]


def _size_order(bound: int, cfg: SearchConfig) -> list[tuple[int, int]]:
    sizes = []
    for n in range(1, bound - 1):
        if cfg.max_worlds is not None and n > cfg.max_worlds:
            continue
        for m in range(2, bound - n + 1):
            if cfg.max_truth is not None and m > cfg.max_truth:
                continue
            sizes.append((n, m))
    sizes.sort(key=lambda nm: (nm[0] + nm[1], nm[0]))
    return sizes


def _exhaustive(f: Formula, logic: LogicId, cfg: SearchConfig) -> Verdict:
    bound = bound_for(f)
    names = tuple(sorted(variables(f)))
    ops = _compile(f, names)
    checked = 0
    for n_worlds, n_truth in _size_order(bound, cfg):
        for rows, t_ranks, t_codes, top_code, k_grid in _sweep_size(
            n_worlds, n_truth, names, logic
        ):
            checked += 1
            root = _eval_codes(ops, rows, t_codes, top_code)
            for idx, code in enumerate(root):
                if code != top_code:
                    model = _materialize(names, rows, t_ranks, top_code, k_grid)
                    world = model.worlds[idx]
                    value = eval_pigf(model, world, f)
                    # the integer evaluation mirrors the exact one
                    assert value == _decode(code, top_code, k_grid) and value < ONE
                    return Refuted(model, world, value)
    return Valid(bound, checked)


# ---------------------------------------------------------------------------
# randomized search

_DENOMS = (2, 3, 4, 5, 6, 8, 12)


def _random_value(rng: random.Random, anchors: Sequence[Fraction]) -> Fraction:
    roll = rng.random()
    if roll < 0.22:
        return ZERO
    if roll < 0.44:
        return ONE
    if anchors and roll < 0.60:
        return rng.choice(anchors)
    d = rng.choice(_DENOMS)
    return Fraction(rng.randint(0, d), d)


def random_pig_model(
    rng: random.Random,
    n_worlds: int,
    var_names: Sequence[str],
    logic: LogicId,
) -> PiGModel:
    """A random possibilistic model obeying the logic's frame constraint."""
    worlds = _world_names(n_worlds)
    if logic is LogicId.S5:
        pi = {w: ONE for w in worlds}
    else:
        pi = {w: _random_value(rng, ()) for w in worlds}
        if logic is LogicId.KD45:
            pi[rng.choice(worlds)] = ONE
    valuation = {
        w: {p: _random_value(rng, ()) for p in var_names} for w in worlds
    }
    return PiGModel(worlds, pi, valuation)


def random_pigf_model(
    rng: random.Random,
    n_worlds: int,
    n_truth: int,
    var_names: Sequence[str],
    logic: LogicId,
) -> PiGFModel:
    """A random rounded model; values sometimes coincide with truth set members."""
    interior: set[Fraction] = set()
    while len(interior) < n_truth - 2:
        d = rng.choice(_DENOMS)
        interior.add(Fraction(rng.randint(1, d - 1), d))
    anchors = sorted(interior)
    worlds = _world_names(n_worlds)
    if logic is LogicId.S5:
        pi = {w: ONE for w in worlds}
    else:
        pi = {w: _random_value(rng, anchors) for w in worlds}
        if logic is LogicId.KD45:
            pi[rng.choice(worlds)] = ONE
    valuation = {
        w: {p: _random_value(rng, anchors) for p in var_names} for w in worlds
    }
    return PiGFModel(PiGModel(worlds, pi, valuation), TruthSet([ZERO, ONE, *anchors]))


def random_search(
    f: Formula, logic: LogicId, cfg: SearchConfig
) -> tuple[PiGFModel, str, Fraction] | None:
    """Sample cfg.budget models within the size bound; return the first
    countermodel found, or None.  Deterministic in cfg.seed."""
    _check_config(cfg)
    rng = random.Random(cfg.seed)
    bound = bound_for(f)
    names = tuple(sorted(variables(f)))
    worlds_cap = max(1, min(cfg.max_worlds or 5, bound - 2))
    for _ in range(cfg.budget):
        n = rng.randint(1, worlds_cap)
        truth_cap = max(2, min(cfg.max_truth or 6, bound - n))
        m = rng.randint(2, truth_cap)
        model = random_pigf_model(rng, n, m, names, logic)
        values = _values_on_worlds(model.base, f, model.truth_set, {})
        for idx, value in enumerate(values):
            if value < ONE:
                return model, model.worlds[idx], value
    return None


def decide(f: Formula, logic: LogicId, cfg: SearchConfig = SearchConfig()) -> Verdict:
    """Search for a countermodel of f over models of the given logic.

    exhaustive: sweep every canonical model with |W| + |T| within the bound,
    smallest sizes first; the first refutation in the fixed enumeration order
    wins, and a Valid verdict certifies the whole bounded space (subject to
    any max_worlds/max_truth caps).  random: sample cfg.budget models and
    report Unknown when none refutes.  hybrid: random first, then exhaustive.
    """
    _check_config(cfg)
    if cfg.mode in ("random", "hybrid"):
        found = random_search(f, logic, cfg)
        if found is not None:
            return Refuted(*found)
        if cfg.mode == "random":
            return Unknown(
                f"no countermodel among {cfg.budget} sampled models", cfg.budget
            )
    return _exhaustive(f, logic, cfg)


# ---------------------------------------------------------------------------
# countermodel minimization


def _refuting_world(model: PiGFModel, f: Formula) -> str | None:
    values = _values_on_worlds(model.base, f, model.truth_set, {})
    for idx, value in enumerate(values):
        if value < ONE:
            return model.worlds[idx]
    return None


def _drop_world(model: PiGFModel, gone: str) -> PiGFModel:
    worlds = tuple(w for w in model.worlds if w != gone)
    pi = {w: model.pi[w] for w in worlds}
    valuation = {w: dict(model.base.valuation.get(w, {})) for w in worlds}
    return PiGFModel(PiGModel(worlds, pi, valuation), model.truth_set)


def _with_pi(model: PiGFModel, world: str, value: Fraction) -> PiGFModel:
    pi = dict(model.base.pi)
    pi[world] = value
    valuation = {w: dict(r) for w, r in model.base.valuation.items()}
    return PiGFModel(PiGModel(model.worlds, pi, valuation), model.truth_set)


def _with_value(model: PiGFModel, world: str, var: str, value: Fraction) -> PiGFModel:
    valuation = {w: dict(r) for w, r in model.base.valuation.items()}
    valuation.setdefault(world, {})[var] = value
    return PiGFModel(PiGModel(model.worlds, dict(model.base.pi), valuation), model.truth_set)


def _snap_key(value: Fraction, ts: TruthSet) -> tuple[int, Fraction]:
    # prefer endpoints, then truth set members, then anything else; ties go
    # to the smaller value, which makes snapping terminate
    if value == ZERO or value == ONE:
        rank = 0
    elif value in ts:
        rank = 1
    else:
        rank = 2
    return (rank, value)


def shrink(
    model: PiGFModel, world: str, f: Formula, logic: LogicId
) -> tuple[PiGFModel, str]:
    """Greedily minimize a countermodel: drop worlds, coarsen the truth set,
    snap values toward endpoints and truth set members.  The result still
    refutes f, satisfies the logic's constraint, and is never larger."""
    value = eval_pigf(model, world, f)
    if value >= ONE:
        raise ValueError("shrink needs a countermodel")
    if not _satisfies_logic(model.base, logic):
        raise ValueError("model violates the logic's frame constraint")
    current, anchor = model, world
    changed = True
    while changed:
        changed = False
        for w in list(current.worlds):
            if len(current.worlds) == 1:
                break
            if w not in current.worlds:
                continue
            candidate = _drop_world(current, w)
            if not _satisfies_logic(candidate.base, logic):
                continue
            hit = _refuting_world(candidate, f)
            if hit is not None:
                current, anchor = candidate, hit
                changed = True
        for t in [t for t in current.truth_set if ZERO < t < ONE]:
            candidate = PiGFModel(
                current.base, TruthSet(v for v in current.truth_set if v != t)
            )
            hit = _refuting_world(candidate, f)
            if hit is not None:
                current, anchor = candidate, hit
                changed = True
        for w in current.worlds:
            slots: list[str | None] = [None]
            slots.extend(sorted(current.base.valuation.get(w, {})))
            for p in slots:
                old = current.pi[w] if p is None else current.value(w, p)
                ts = current.truth_set
                for new in (ZERO, ONE, round_down(ts, old), round_up(ts, old)):
                    if _snap_key(new, ts) >= _snap_key(old, ts):
                        continue
                    if p is None:
                        candidate = _with_pi(current, w, new)
                    else:
                        candidate = _with_value(current, w, p, new)
                    if not _satisfies_logic(candidate.base, logic):
                        continue
                    hit = _refuting_world(candidate, f)
                    if hit is not None:
                        current, anchor = candidate, hit
                        changed = True
                        break
    return current, anchor


def verdict_to_json(verdict: Verdict) -> dict:
    """The stable JSON rendering of a verdict."""
    from .semantics import model_to_json
    from .algebra import format_rational

    if isinstance(verdict, Valid):
        return {
            "verdict": "valid",
            "bound": verdict.bound_used,
            "models_checked": verdict.models_checked,
        }
    if isinstance(verdict, Refuted):
        return {
            "verdict": "refuted",
            "model": model_to_json(verdict.countermodel),
            "world": verdict.world,
            "value": format_rational(verdict.value),
        }
    if isinstance(verdict, Unknown):
        return {"verdict": "unknown", "budget": verdict.budget}
    raise TypeError(f"not a verdict: {verdict!r}")
