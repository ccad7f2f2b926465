"""Command line interface.

Exit codes: 0 valid / no countermodel / evaluation done, 1 countermodel
found, 2 search exhausted without an answer, 3 bad usage or input.
Machine-readable results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_rational
from .decider import (
    Refuted,
    SearchConfig,
    Unknown,
    Valid,
    decide,
    random_search,
    shrink,
    verdict_to_json,
)
from .semantics import (
    PiGFModel,
    PiGModel,
    RelationalModel,
    embed_pig,
    eval_pig,
    eval_pigf,
    eval_rel,
    frame_report,
    model_from_json,
)
from .syntax import LogicId, ParseError, corpus, parse

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="godelmodal",
        description="Possibilistic semantics and validity checking for Godel modal logics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_search_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--logic", default="k45", choices=[l.value for l in LogicId])
        p.add_argument("--mode", default="hybrid", choices=["exhaustive", "random", "hybrid"])
        p.add_argument("--budget", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-worlds", type=int, default=None)
        p.add_argument("--max-truth", type=int, default=None)
        p.add_argument("formula")

    check = sub.add_parser("check", help="decide validity of a formula")
    add_search_args(check)
    check.set_defaults(handler=lambda args: _run_check(args, minimize=False))

    cm = sub.add_parser("countermodel", help="like check, but shrink any countermodel")
    add_search_args(cm)
    cm.set_defaults(handler=lambda args: _run_check(args, minimize=True))

    ev = sub.add_parser("eval", help="evaluate a formula in a model file")
    ev.add_argument("--model", required=True)
    ev.add_argument("--world", default=None)
    ev.add_argument("formula")
    ev.set_defaults(handler=_run_eval)

    co = sub.add_parser("corpus", help="random-search the named schemes of a logic")
    co.add_argument("--logic", default="k45", choices=[l.value for l in LogicId])
    co.add_argument("--budget", type=int, default=10_000)
    co.add_argument("--seed", type=int, default=0)
    co.set_defaults(handler=_run_corpus)

    fr = sub.add_parser("frame", help="report frame properties of a model file")
    fr.add_argument("--model", required=True)
    fr.set_defaults(handler=_run_frame)

    return parser


def _print_json(doc: dict) -> None:
    print(json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False))


def _load_model(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def _run_check(args: argparse.Namespace, minimize: bool) -> int:
    formula = parse(args.formula)
    logic = LogicId(args.logic)
    cfg = SearchConfig(
        mode=args.mode,
        budget=args.budget,
        seed=args.seed,
        max_worlds=args.max_worlds,
        max_truth=args.max_truth,
    )
    verdict = decide(formula, logic, cfg)
    if minimize and isinstance(verdict, Refuted):
        model, world = shrink(verdict.countermodel, verdict.world, formula, logic)
        verdict = Refuted(model, world, eval_pigf(model, world, formula))
    _print_json(verdict_to_json(verdict))
    if isinstance(verdict, Valid):
        return EXIT_OK
    if isinstance(verdict, Refuted):
        return EXIT_FOUND
    return EXIT_UNKNOWN


def _evaluate(model, world: str, formula) -> str:
    if isinstance(model, PiGFModel):
        return format_rational(eval_pigf(model, world, formula))
    if isinstance(model, RelationalModel):
        return format_rational(eval_rel(model, world, formula))
    return format_rational(eval_pig(model, world, formula))


def _run_eval(args: argparse.Namespace) -> int:
    formula = parse(args.formula)
    model = _load_model(args.model)
    if args.world is not None:
        print(_evaluate(model, args.world, formula))
    else:
        for world in model.worlds:
            print(f"{world}\t{_evaluate(model, world, formula)}")
    return EXIT_OK


def _run_corpus(args: argparse.Namespace) -> int:
    logic = LogicId(args.logic)
    cfg = SearchConfig(mode="random", budget=args.budget, seed=args.seed)
    refuted = 0
    for name, formula in corpus(logic):
        found = random_search(formula, logic, cfg)
        if found is None:
            print(f"{name}\tok")
        else:
            refuted += 1
            model, world, value = found
            print(f"{name}\trefuted\t{world}\t{format_rational(value)}")
    print(
        f"checked {len(corpus(logic))} schemes, {refuted} refuted",
        file=sys.stderr,
    )
    return EXIT_FOUND if refuted else EXIT_OK


def _run_frame(args: argparse.Namespace) -> int:
    model = _load_model(args.model)
    if isinstance(model, PiGFModel):
        model = embed_pig(model.base)
    elif isinstance(model, PiGModel):
        model = embed_pig(model)
    report = frame_report(model)
    _print_json(
        {
            "transitive": report.transitive,
            "euclidean": report.euclidean,
            "serial": report.serial,
            "witnesses": {
                "transitivity": [list(t) for t in report.transitivity_witnesses],
                "euclidean": [list(t) for t in report.euclidean_witnesses],
                "seriality": list(report.seriality_witnesses),
            },
        }
    )
    return EXIT_OK


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        detail = exc.args[0] if exc.args else exc
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
