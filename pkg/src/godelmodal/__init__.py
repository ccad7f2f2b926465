"""Possibilistic Kripke semantics for Godel modal logics K45, KD45 and S5."""

from .algebra import (
    ONE,
    ZERO,
    OrderEmbedding,
    TruthSet,
    TruthValue,
    apply_embedding,
    canonical_grid,
    format_rational,
    godel_implies,
    godel_neg,
    parse_rational,
    round_down,
    round_up,
)
from .syntax import (
    And,
    Bot,
    BOT,
    Box,
    Dia,
    Formula,
    Implies,
    LogicId,
    MissingMetavariableError,
    NamedScheme,
    ParseError,
    SCHEMES,
    Var,
    complexity_ell,
    corpus,
    disj,
    iff,
    instantiate,
    neg,
    parse,
    render,
    subformulas,
    top,
    variables,
)
from .semantics import (
    FrameReport,
    PiGFModel,
    PiGModel,
    RelationalModel,
    UnknownWorldError,
    embed_pig,
    eval_pig,
    eval_pigf,
    eval_rel,
    filtrate,
    frame_report,
    inconsistency_degree,
    is_normalized,
    model_from_json,
    model_to_json,
    transport,
)
from .decider import (
    Refuted,
    SearchConfig,
    Unknown,
    Valid,
    Verdict,
    bound_for,
    decide,
    enumerate_canonical,
    random_pig_model,
    random_pigf_model,
    random_search,
    shrink,
    verdict_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
