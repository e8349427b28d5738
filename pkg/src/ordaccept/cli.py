"""Command-line front end: ``prove`` and ``oracle`` subcommands.

Exit codes: ``prove`` returns 0 when proved, 1 when unknown; ``oracle`` returns 0
when no soundness alarm was raised, 1 otherwise; both return 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abstract import TypeGrammar
from .oracle import ld_explore, soundness_check
from .parser import ParseError, parse_query, parse_source
from .report import FORMAT_VERSION, build_report, program_identity, render_report
from .search import SearchConfig, prove, prove_well_moded, solve_meta

EXIT_OK, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        return text, parse_source(text)
    except (ParseError, ValueError) as e:
        raise InputError(f"{path}: {e}") from e


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordaccept",
                                 description="Termination prover for definite logic programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("prove", help="search for a termination proof")
    pr.add_argument("path")
    pr.add_argument("--well-moded", action="store_true",
                    help="prove termination of all well-moded goals using declared modes")
    pr.add_argument("--meta", metavar="INTERPRETED.pl",
                    help="PATH is the vanilla meta-interpreter; prove it over this program")
    pr.add_argument("--emit", choices=("text", "structured"), default="text")
    pr.add_argument("--max-precedences", type=_positive, default=64)
    pr.add_argument("--timeout-ms", type=_positive, default=5000)

    orc = sub.add_parser("oracle", help="bounded LD-resolution and soundness checking")
    orc.add_argument("path")
    orc.add_argument("--budget", type=_positive, default=100000)
    orc.add_argument("--max-size", type=int, default=4)
    orc.add_argument("--query", metavar="GOAL")
    orc.add_argument("--emit", choices=("text", "structured"), default="text")
    return ap


def cmd_prove(args, out) -> int:
    text, prog = _read(args.path)
    cfg = SearchConfig(max_precedences=args.max_precedences, timeout_ms=args.timeout_ms)
    if args.meta:
        _, interpreted = _read(args.meta)
        outcome = solve_meta(prog, interpreted, cfg)
        mode = "meta"
    elif args.well_moded:
        outcome = prove_well_moded(prog, None, cfg)
        mode = "well-moded"
    else:
        if not prog.entries:
            raise InputError(f"{args.path}: no entry directive (use --well-moded or --meta)")
        try:
            g = TypeGrammar.from_program(prog)
            entries = [g.pattern(e) for e in prog.entries]
        except ValueError as e:
            raise InputError(f"{args.path}: {e}") from e
        outcome = prove(prog, entries, g, cfg)
        mode = "rigid"
    report = build_report(outcome, args.path, text, cfg, mode)
    out.write(render_report(report, args.emit))
    return EXIT_OK if outcome.proved else EXIT_UNKNOWN


def cmd_oracle(args, out) -> int:
    text, prog = _read(args.path)
    ident = program_identity(args.path, text)
    if args.query:
        try:
            goal = parse_query(args.query)
        except ParseError as e:
            raise InputError(f"query: {e}") from e
        v = ld_explore(prog, goal, args.budget)
        if args.emit == "structured":
            doc = {"format_version": FORMAT_VERSION, "program": ident,
                   "query": args.query, "verdict": _verdict(v)}
            out.write(json.dumps(doc, indent=2) + "\n")
        else:
            out.write(f"{args.query.strip()}: {v}\n")
        return EXIT_OK
    if not prog.entries:
        raise InputError(f"{args.path}: no entry directive and no --query given")
    try:
        rep = soundness_check(prog, max_size=args.max_size, budget=args.budget)
    except ValueError as e:
        raise InputError(f"{args.path}: {e}") from e
    if args.emit == "structured":
        doc = {"format_version": FORMAT_VERSION, "program": ident,
               "status": rep.outcome.status, "queries": rep.queries,
               "alarms": [{"query": q, "verdict": _verdict(v)} for q, v in rep.alarms]}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"prove: {rep.outcome.status}\n")
        out.write(f"queries explored: {rep.queries}\n")
        out.write(f"alarms: {len(rep.alarms)}\n")
        for q, v in rep.alarms:
            out.write(f"  {q}: {v}\n")
    return EXIT_OK if rep.ok else EXIT_UNKNOWN


def _verdict(v) -> dict:
    if v.terminated:
        return {"kind": "terminated", "answers": v.answers, "nodes": v.nodes}
    return {"kind": "budget-exhausted", "nodes": v.nodes, "depth": v.depth}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "prove":
            return cmd_prove(args, out)
        return cmd_oracle(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
