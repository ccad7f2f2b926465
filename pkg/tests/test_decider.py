import random
from fractions import Fraction

import pytest

from godelmodal import (
    ONE,
    ZERO,
    LogicId,
    PiGFModel,
    Refuted,
    SearchConfig,
    TruthSet,
    Unknown,
    Valid,
    bound_for,
    canonical_grid,
    decide,
    enumerate_canonical,
    eval_pigf,
    is_normalized,
    model_to_json,
    parse,
    random_search,
    shrink,
    variables,
    verdict_to_json,
)
from helpers import random_formula_bounded, random_pigf

DNEG = parse("[]~~p -> ~~[]p")


def first_refutation(model: PiGFModel, f) -> tuple[str, Fraction] | None:
    for w in model.worlds:
        v = eval_pigf(model, w, f)
        if v < ONE:
            return w, v
    return None


# -- the size bound -----------------------------------------------------------


def test_bound_examples():
    assert bound_for(parse("p")) == 8
    assert bound_for(parse("p -> q")) == 12
    assert bound_for(DNEG) == 22


# -- canonical enumeration ------------------------------------------------------


def test_enumerate_smallest_space():
    k45 = list(enumerate_canonical(1, 2, frozenset(), LogicId.K45))
    assert len(k45) == 3
    pis = sorted(m.pi["w1"] for m in k45)
    assert pis[0] == ZERO and pis[-1] == ONE and ZERO < pis[1] < ONE
    assert all(list(m.truth_set) == [ZERO, ONE] for m in k45)

    kd45 = list(enumerate_canonical(1, 2, frozenset(), LogicId.KD45))
    assert len(kd45) == 1 and kd45[0].pi["w1"] == ONE

    s5 = list(enumerate_canonical(1, 2, frozenset(), LogicId.S5))
    assert len(s5) == 1 and s5[0].pi["w1"] == ONE


def test_enumerate_two_world_regression():
    models = list(enumerate_canonical(2, 2, frozenset(), LogicId.K45))
    assert len(models) == 11
    assert len({repr(model_to_json(m)) for m in models}) == 11  # pairwise distinct


def test_enumerate_respects_dimensions_grid_and_logic():
    grid = canonical_grid(2 * 2 + 3)  # n_worlds*(vars+1) + n_truth
    for logic in LogicId:
        count = 0
        for m in enumerate_canonical(2, 3, {"p"}, logic):
            count += 1
            assert len(m.worlds) == 2
            assert len(m.truth_set) == 3
            values = [m.pi[w] for w in m.worlds]
            values += [m.value(w, "p") for w in m.worlds]
            values += list(m.truth_set)
            assert all(v in grid for v in values)
            if logic is LogicId.KD45:
                assert is_normalized(m.base)
            if logic is LogicId.S5:
                assert all(m.pi[w] == ONE for w in m.worlds)
        assert count > 0


def test_enumerate_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        next(enumerate_canonical(0, 2, frozenset(), LogicId.K45))
    with pytest.raises(ValueError):
        next(enumerate_canonical(1, 1, frozenset(), LogicId.K45))


# -- exhaustive decisions -----------------------------------------------------------


def test_decide_refutes_box_double_negation_shift():
    verdict = decide(DNEG, LogicId.K45, SearchConfig(mode="exhaustive"))
    assert isinstance(verdict, Refuted)
    m = verdict.countermodel
    assert m.worlds == ("w1",)
    assert m.pi["w1"] == ONE
    assert m.value("w1", "p") == Fraction(1, 4)
    assert list(m.truth_set) == [ZERO, ONE]
    assert verdict.world == "w1"
    assert verdict.value == ZERO
    assert eval_pigf(m, "w1", DNEG) == ZERO


def test_decide_axiom_d_separation():
    dtop = parse("<>top")
    k45 = decide(dtop, LogicId.K45, SearchConfig(mode="exhaustive"))
    assert isinstance(k45, Refuted)
    assert k45.countermodel.worlds == ("w1",)
    assert k45.countermodel.pi["w1"] == ZERO
    assert list(k45.countermodel.truth_set) == [ZERO, ONE]
    assert k45.value == ZERO

    kd45 = decide(dtop, LogicId.KD45, SearchConfig(mode="exhaustive"))
    assert isinstance(kd45, Valid)
    assert kd45.bound_used == 10
    assert kd45.models_checked == 4916  # deterministic sweep size


def test_decide_valid_small_formula_with_caps():
    verdict = decide(
        parse("p -> p"),
        LogicId.K45,
        SearchConfig(mode="exhaustive", max_worlds=2, max_truth=3),
    )
    assert isinstance(verdict, Valid)
    assert verdict.bound_used == 10
    assert verdict.models_checked > 0


def test_decide_exhaustive_is_deterministic():
    cfg = SearchConfig(mode="exhaustive")
    assert decide(DNEG, LogicId.K45, cfg) == decide(DNEG, LogicId.K45, cfg)


def test_decide_rejects_bad_config():
    with pytest.raises(ValueError):
        decide(DNEG, LogicId.K45, SearchConfig(mode="telepathy"))
    with pytest.raises(ValueError):
        decide(DNEG, LogicId.K45, SearchConfig(budget=-1))
    with pytest.raises(ValueError):
        decide(DNEG, LogicId.K45, SearchConfig(max_worlds=0))
    with pytest.raises(ValueError):
        decide(DNEG, LogicId.K45, SearchConfig(max_truth=1))


# -- randomized search -----------------------------------------------------------------


def test_random_search_finds_known_countermodel():
    cfg = SearchConfig(mode="random", budget=5000, seed=0)
    found = random_search(DNEG, LogicId.K45, cfg)
    assert found is not None
    model, world, value = found
    assert value < ONE
    assert eval_pigf(model, world, DNEG) == value


def test_random_search_respects_seed():
    cfg = SearchConfig(mode="random", budget=3000, seed=42)
    a = random_search(DNEG, LogicId.K45, cfg)
    b = random_search(DNEG, LogicId.K45, cfg)
    assert a == b


def test_random_search_sound_on_an_axiom():
    axiom4 = parse("[]p -> [][]p")
    assert random_search(axiom4, LogicId.K45, SearchConfig(mode="random", budget=2000, seed=9)) is None


def test_random_mode_returns_unknown_on_exhausted_budget():
    verdict = decide(parse("p -> p"), LogicId.K45, SearchConfig(mode="random", budget=50, seed=1))
    assert isinstance(verdict, Unknown)
    assert verdict.budget == 50


def test_hybrid_falls_back_to_exhaustive():
    verdict = decide(
        parse("p -> p"),
        LogicId.K45,
        SearchConfig(mode="hybrid", budget=20, seed=1, max_worlds=2, max_truth=3),
    )
    assert isinstance(verdict, Valid)


def test_random_search_obeys_logic_constraint():
    cfg = SearchConfig(mode="random", budget=400, seed=3)
    found = random_search(parse("[]p -> p"), LogicId.KD45, cfg)
    assert found is not None  # the T axiom fails on serial non-universal models
    assert is_normalized(found[0].base)
    assert random_search(parse("[]p -> p"), LogicId.S5, SearchConfig(mode="random", budget=2000, seed=3)) is None


# -- grid coverage: arbitrary rational refutations are caught under the same caps -------


def test_decide_catches_random_refutations():
    rng = random.Random(1234)
    caught = 0
    while caught < 60:
        f = random_formula_bounded(rng, max_ell=8)
        model = random_pigf(rng, rng.randint(1, 2), max_interior=1)
        hit = first_refutation(model, f)
        if hit is None:
            continue
        caught += 1
        verdict = decide(
            f,
            LogicId.K45,
            SearchConfig(
                mode="exhaustive",
                max_worlds=len(model.worlds),
                max_truth=len(model.truth_set),
            ),
        )
        assert isinstance(verdict, Refuted), f"missed refutation of {f}"
        assert eval_pigf(verdict.countermodel, verdict.world, f) == verdict.value < ONE


# -- shrinking ------------------------------------------------------------------------


def test_shrink_reaches_single_world_for_known_formula():
    verdict = decide(DNEG, LogicId.K45, SearchConfig(mode="hybrid", budget=5000, seed=0))
    assert isinstance(verdict, Refuted)
    small, world = shrink(verdict.countermodel, verdict.world, DNEG, LogicId.K45)
    assert len(small.worlds) == 1
    assert len(small.truth_set) == 2
    assert eval_pigf(small, world, DNEG) < ONE


def test_shrink_requires_a_countermodel():
    from godelmodal import PiGModel

    model = PiGFModel(PiGModel(["a"], {"a": ONE}, {"a": {"p": ONE}}), TruthSet([ZERO, ONE]))
    with pytest.raises(ValueError):
        shrink(model, "a", parse("p"), LogicId.K45)


def test_shrink_never_grows_and_preserves_everything():
    rng = random.Random(777)
    done = 0
    while done < 80:
        f = random_formula_bounded(rng, max_ell=8)
        model = random_pigf(rng, rng.randint(1, 4))
        hit = first_refutation(model, f)
        if hit is None:
            continue
        done += 1
        world, _ = hit
        small, anchor = shrink(model, world, f, LogicId.K45)
        assert eval_pigf(small, anchor, f) < ONE
        assert len(small.worlds) <= len(model.worlds)
        assert len(small.truth_set) <= len(model.truth_set)
        assert set(small.worlds) <= set(model.worlds)


def test_shrink_keeps_logic_constraint():
    rng = random.Random(888)
    done = 0
    while done < 30:
        f = random_formula_bounded(rng, max_ell=8)
        model = random_pigf(rng, rng.randint(1, 3))
        if not is_normalized(model.base):
            continue
        hit = first_refutation(model, f)
        if hit is None:
            continue
        done += 1
        small, anchor = shrink(model, hit[0], f, LogicId.KD45)
        assert is_normalized(small.base)
        assert eval_pigf(small, anchor, f) < ONE


# -- verdict serialization ---------------------------------------------------------------


def test_verdict_json_shapes():
    valid = verdict_to_json(Valid(10, 4916))
    assert valid == {"verdict": "valid", "bound": 10, "models_checked": 4916}

    refuted = decide(DNEG, LogicId.K45, SearchConfig(mode="exhaustive"))
    doc = verdict_to_json(refuted)
    assert doc["verdict"] == "refuted"
    assert doc["world"] == "w1"
    assert doc["value"] == "0"
    assert doc["model"]["pi"] == {"w1": "1"}
    assert doc["model"]["valuation"] == {"w1": {"p": "1/4"}}
    assert doc["model"]["truth_set"] == ["0", "1"]

    unknown = verdict_to_json(Unknown("budget exhausted", 50))
    assert unknown == {"verdict": "unknown", "budget": 50}
