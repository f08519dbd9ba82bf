"""Command line entry point: ``rcalc prove|premises|revise|contract|verify-reachability|repl``.

Exit status: 0 success, 1 logical negative (not proved, unreached maximal
contraction, ...), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import (
    InvalidConditionError, configuration_record, explore_terminations,
    make_configuration, normalization_steps,
)
from .oracle import SizeGuardError, law_indices, maximal_contractions, reachability_report
from .parser import ArityError, ParseError
from .premise import necessary_premises, premise_closure
from .prover import Budget, Status, prove, sequent
from .specfile import SpecError, SpecFile, env_budget_overrides, load
from .syntax import to_text

SCHEMA = "rcalc/1"
OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str, record: dict) -> None:
    if args.format == "structured":
        print(json.dumps(dict({"schema": SCHEMA}, **record), indent=2))
    else:
        print(text)


def _setup(args) -> tuple[SpecFile, Budget, int]:
    try:
        spec = load(args.file)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    overrides = dict(spec.budget_overrides)
    overrides.update(env_budget_overrides())
    if args.budget_depth is not None:
        overrides["depth"] = args.budget_depth
    if args.term_depth is not None:
        overrides["terms"] = args.term_depth
    if args.limit is not None:
        overrides["limit"] = args.limit
    spec.budget_overrides = overrides
    try:
        budget = spec.budget()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if spec.limit <= 0:
        raise UsageError("limit must be positive")
    return spec, budget, spec.limit


def _goal(spec: SpecFile, text: str):
    try:
        return spec.parse(text)
    except (ParseError, ArityError) as exc:
        raise UsageError(f"goal: {exc}") from None


def cmd_prove(args) -> int:
    spec, budget, _ = _setup(args)
    goal = _goal(spec, args.goal)
    seq = sequent(spec.law_formulas(), goal)
    res = prove(seq, budget)
    lines = [f"{res.status.value}: {seq}"]
    record: dict = {"command": "prove", "sequent": str(seq), "status": res.status.value}
    if res.model is not None:
        lines.append(f"countermodel: {res.model.describe()}")
        record["countermodel"] = res.model.describe()
    if res.status is Status.UNKNOWN:
        lines.append(f"note: {res.note}")
        record["note"] = res.note
    if res.tree is not None and args.dump_tree:
        lines.append(res.tree.render())
        record["tree"] = res.tree.to_records()
    _emit(args, "\n".join(lines), record)
    return OK if res.status is Status.PROVED else NEGATIVE


def cmd_premises(args) -> int:
    spec, budget, _ = _setup(args)
    goal = _goal(spec, args.goal)
    laws = spec.law_formulas()
    res = prove(sequent(laws, goal), budget)
    if res.status is not Status.PROVED:
        msg = ("cannot determine within budget" if res.status is Status.UNKNOWN
               else "goal is not a consequence of the laws")
        _emit(args, f"{msg}: {to_text(goal)}",
              {"command": "premises", "goal": to_text(goal), "status": res.status.value})
        return NEGATIVE
    marking = premise_closure(res.tree)
    used = necessary_premises(res.tree, laws, goal, marking)
    lines = [f"necessary premises of {to_text(goal)}:"]
    lines += [f"  {spec.name_of(a)}: {to_text(a)}" for a in used]
    record = {"command": "premises", "goal": to_text(goal), "status": "proved",
              "premises": [{"name": spec.name_of(a), "law": to_text(a)} for a in used]}
    if args.trace:
        lines += ["", "proof:", res.tree.render(), "", "premise edges:", marking.dump()]
        record["tree"] = res.tree.to_records()
        record["edges"] = [{"source": list(e.source), "target": list(e.target),
                            "clause": e.clause} for e in marking.edges]
    _emit(args, "\n".join(lines), record)
    return OK


def _configuration(args, spec: SpecFile, budget: Budget):
    try:
        return make_configuration(spec.rejection_formulas(), spec.law_formulas(),
                                  budget, strict=not args.permissive)
    except InvalidConditionError as exc:
        raise UsageError(f"rejections are not an R-condition: {exc}") from None


def cmd_revise(args) -> int:
    spec, budget, limit = _setup(args)
    if not spec.rejections and not args.permissive:
        raise UsageError("the file has no reject: section")
    start = _configuration(args, spec, budget)
    ex = explore_terminations(start, budget, limit)
    maximal = maximal_contractions(start.gamma, start.delta, budget) if args.check else None
    lines = [f"configuration: {start}"]
    for tag, pos, what in normalization_steps(spec.law_formulas()):
        lines.append(f"  {tag.value} at {pos}: {what}")
    lines.append(f"terminations: {len(ex.terminations)} "
                 f"({'exhausted' if ex.exhausted else 'limit reached'}, "
                 f"{ex.visited} configurations)")
    items = []
    for n, (c, trace) in enumerate(ex.terminations, start=1):
        tag = ""
        item: dict = {"index": n, "configuration": configuration_record(c)}
        if maximal is not None:
            is_max = law_indices(start.gamma, c.gamma) in maximal
            tag = "  MAXIMAL" if is_max else "  NON-MAXIMAL"
            item["maximal"] = is_max
        lines.append(f"[{n}] {{{', '.join(to_text(g) for g in c.gamma)}}}{tag}")
        if args.trace:
            lines.extend("    " + t for t in trace.render().splitlines())
            item["trace"] = trace.to_record()
        items.append(item)
    for note in ex.unknown_notes:
        lines.append(f"note: {note}")
    record = {"command": "revise", "start": configuration_record(start),
              "exhausted": ex.exhausted, "visited": ex.visited,
              "terminations": items, "notes": ex.unknown_notes}
    _emit(args, "\n".join(lines), record)
    return OK


def cmd_contract(args) -> int:
    spec, budget, _ = _setup(args)
    start = _configuration(args, spec, budget)
    notes: list = []
    try:
        found = maximal_contractions(start.gamma, start.delta, budget, notes)
    except SizeGuardError as exc:
        raise UsageError(str(exc)) from None
    sets = [[start.gamma[i] for i in sorted(s)] for s in found]
    lines = [f"maximal contractions of {{{', '.join(to_text(g) for g in start.gamma)}}} "
             f"by {{{', '.join(to_text(d) for d in start.delta)}}}:"]
    lines += [f"[{n}] {{{', '.join(to_text(a) for a in s)}}}" for n, s in enumerate(sets, 1)]
    lines += [f"note: {n}" for n in notes]
    _emit(args, "\n".join(lines), {
        "command": "contract", "maximal": [[to_text(a) for a in s] for s in sets],
        "notes": notes})
    return OK


def cmd_verify(args) -> int:
    spec, budget, limit = _setup(args)
    start = _configuration(args, spec, budget)
    try:
        report = reachability_report(start.gamma, start.delta, budget, limit)
    except SizeGuardError as exc:
        raise UsageError(str(exc)) from None
    record = dict({"command": "verify-reachability"}, **report.to_record())
    if args.report:
        Path(args.report).write_text(json.dumps(dict({"schema": SCHEMA}, **record), indent=2) + "\n")
    _emit(args, report.render(), record)
    return OK if report.reachable else NEGATIVE


def cmd_repl(args) -> int:
    from .repl import Session
    spec = None
    if args.file:
        try:
            spec = load(args.file)
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    session = Session(spec)
    session.cmdloop()
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-depth", type=int, help="maximum proof depth")
    common.add_argument("--term-depth", type=int, help="nesting depth of instantiation terms")
    common.add_argument("--limit", type=int, help="maximum configurations to explore")
    common.add_argument("--check", action="store_true", help="classify terminations with the oracle")
    common.add_argument("--permissive", action="store_true",
                        help="accept rejections the laws do not refute")
    common.add_argument("--trace", action="store_true", help="print derivations")
    common.add_argument("--dump-tree", action="store_true", help="print the proof tree")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    parser = argparse.ArgumentParser(prog="rcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("prove", parents=[common], help="prove a goal from the laws")
    p.add_argument("file")
    p.add_argument("goal")
    p.set_defaults(func=cmd_prove)
    p = sub.add_parser("premises", parents=[common], help="necessary premises of a goal")
    p.add_argument("file")
    p.add_argument("goal")
    p.set_defaults(func=cmd_premises)
    p = sub.add_parser("revise", parents=[common], help="explore revisions by the rejections")
    p.add_argument("file")
    p.set_defaults(func=cmd_revise)
    p = sub.add_parser("contract", parents=[common], help="list maximal contractions")
    p.add_argument("file")
    p.set_defaults(func=cmd_contract)
    p = sub.add_parser("verify-reachability", parents=[common],
                       help="compare reached revisions with maximal contractions")
    p.add_argument("file")
    p.add_argument("--report", help="write the structured report to this path")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("repl", parents=[common], help="interactive session")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_repl)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError, ParseError, ArityError) as exc:
        print(f"rcalc: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
