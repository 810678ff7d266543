"""Command-line front end.

Subcommands:
  check     verify a grid scenario; prints the verdict as JSON and, on a
            violation, writes the counterexample trace as JSONL
  simulate  run one seeded runtime episode, optionally writing its trace
  sweep     run the collision-count grid and write a CSV
  replay    re-execute a counterexample trace against its scenario

Exit codes: 0 safe/holds, 2 violated/active collision, 3 inconclusive
(state budget or tick budget exhausted), 64 usage error, 65 malformed
input data, 66 missing or unreadable file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checker
from .model import ScenarioError, load_scenario
from .sim import SimOutcome, load_sim_config, simulate, write_trace_jsonl
from .sweep import load_sweep_spec, run_sweep, sweep_result_to_csv

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


class _FileError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _FileError(f"cannot read {path}: {e.strerror}")


def _cmd_check(args) -> int:
    scenario = load_scenario(_read(args.scenario))
    verdict = checker.check_safety(
        scenario, depth_bound=args.depth, state_budget=args.budget
    )
    summary = checker.verdict_to_dict(verdict)
    if verdict.counterexample is not None:
        trace_path = args.trace or (Path(args.scenario).stem + ".counterexample.jsonl")
        checker.write_trace_jsonl(verdict.counterexample, scenario, trace_path)
        summary["counterexamplePath"] = str(trace_path)
    print(json.dumps(summary))
    return {
        checker.Outcome.HOLDS: 0,
        checker.Outcome.VIOLATED: 2,
        checker.Outcome.INCONCLUSIVE: 3,
    }[verdict.outcome]


def _cmd_simulate(args) -> int:
    config = load_sim_config(_read(args.config))
    if args.seed is not None:
        from dataclasses import replace
        config = replace(config, seed=args.seed)
    trace = simulate(config)
    if args.trace:
        write_trace_jsonl(trace, args.trace)
    print(json.dumps({
        "outcome": trace.outcome.value,
        "ticks": trace.ticks,
        "seed": config.seed,
    }))
    if trace.outcome is SimOutcome.ACTIVE_COLLISION:
        return 2
    if trace.outcome is SimOutcome.TICK_BUDGET_EXHAUSTED:
        return 3
    return 0


def _cmd_sweep(args) -> int:
    spec = load_sweep_spec(_read(args.spec))
    result = run_sweep(spec, workers=args.workers)
    Path(args.out).write_text(sweep_result_to_csv(result))
    print(json.dumps({
        "cells": len(result.cells),
        "runsPerCell": spec.runs_per_cell,
        "out": args.out,
    }))
    return 0


def _cmd_replay(args) -> int:
    scenario = load_scenario(_read(args.scenario))
    trace = checker.trace_from_jsonl(_read(args.trace))
    final = checker.replay_trace(scenario, trace)
    violating = not checker.is_passive_safe(final)
    print(json.dumps({
        "steps": len(trace.steps),
        "finalTick": final.tick,
        "violatesPassiveSafety": violating,
    }))
    return 0 if violating else 2


def build_parser() -> _Parser:
    parser = _Parser(prog="passivesafe", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a grid scenario")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--depth", type=int, default=None, help="tick bound (default: to fixpoint)")
    p.add_argument("--budget", type=int, default=checker.DEFAULT_STATE_BUDGET,
                   help="state budget before giving up as inconclusive")
    p.add_argument("--trace", default=None, help="counterexample output path")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("simulate", help="run one runtime episode")
    p.add_argument("config", help="simulation config JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--trace", default=None, help="trace JSONL output path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="run the collision-count grid")
    p.add_argument("spec", help="sweep spec JSON file")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("replay", help="validate a counterexample trace")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("trace", help="counterexample JSONL file")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _FileError as e:
        print(str(e), file=sys.stderr)
        return EX_NOINPUT
    except (ScenarioError, checker.TraceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_DATAERR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
