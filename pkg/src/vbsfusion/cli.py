"""Command-line front end.

Exit codes: 0 ok, 1 validation or solve failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import oracle
from .errors import ModelError, ParseError, SolveError, VBSError
from .fusion import SolveReport, candidate_next, one_step_look_ahead, solve
from .io import load_model
from .model import DEFAULT_TOLERANCE, diagnose, validate

OK, FAILED, USAGE = 0, 1, 2


def _strategy_lines(report: SolveReport) -> list[str]:
    lines = []
    for d, table in report.strategy.tables.items():
        head = " ".join(table.ids) or "<>"
        lines.append(f"strategy {d} | {head}")
        for config, choice in table.rows():
            lines.append(f"  {config} -> {table.decision.frame[choice]}")
    return lines


def _report_json(report: SolveReport, elapsed: float) -> dict:
    return {
        "meu": report.meu,
        "sequence": list(report.sequence.order),
        "counters": report.counter.as_dict(),
        "strategy": {
            d: {
                "domain": list(t.ids),
                "rows": [
                    {"config": dict(zip(t.ids, c.labels())), "choice": t.decision.frame[s]}
                    for c, s in t.rows()
                ],
            }
            for d, t in report.strategy.tables.items()
        },
        "seconds": elapsed,
    }


def cmd_check(args) -> int:
    problem = load_model(args.file, check=False)
    failed = False
    for name, err in diagnose(problem, args.tolerance):
        if err is None:
            print(f"ok    {name}")
        else:
            failed = True
            print(f"FAIL  {name}: {err}")
    return FAILED if failed else OK


def cmd_solve(args) -> int:
    problem = validate(load_model(args.file, check=False))
    order = args.order.split(",") if args.order else None
    start = time.perf_counter()
    report = solve(problem, order)
    elapsed = time.perf_counter() - start
    if args.json:
        print(json.dumps(_report_json(report, elapsed), indent=2))
        return OK
    print(f"MEU {report.meu:.6f}")
    print(report.counter)
    print(f"sequence {report.sequence}")
    for line in _strategy_lines(report):
        print(line)
    return OK


def cmd_count(args) -> int:
    problem = validate(load_model(args.file, check=False))
    order = args.order.split(",") if args.order else None
    print(solve(problem, order).counter)
    return OK


def cmd_oracle(args) -> int:
    problem = validate(load_model(args.file, check=False))
    report = solve(problem)
    brute, _ = oracle.brute_force_solve(problem)
    glob = oracle.global_solve(problem)
    executed = oracle.evaluate_strategy(problem, report.strategy)
    print(f"fusion        {report.meu:.6f}")
    worst = 0.0
    for name, value in (("brute-force", brute), ("global", glob), ("strategy", executed)):
        delta = value - report.meu
        worst = max(worst, abs(delta))
        print(f"{name:<13} {value:.6f}  delta {delta:+.3e}")
    return OK if worst <= args.tolerance else FAILED


def cmd_order(args) -> int:
    problem = validate(load_model(args.file, check=False), well_defined=False)
    print(one_step_look_ahead(problem))
    first = candidate_next(problem, [v.id for v in problem.variables])
    print("candidates " + " ".join(first))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vbsfusion", description="Solve Bayesian decision problems by fusion."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run every validation, including normalization")
    p.add_argument("file")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="maximum expected utility, strategy and counts")
    p.add_argument("file")
    p.add_argument("--order", help="comma-separated deletion sequence")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="compare fusion with brute-force and global solves")
    p.add_argument("file")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("count", help="operation counts on one line")
    p.add_argument("file")
    p.add_argument("--order", help="comma-separated deletion sequence")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("order", help="heuristic deletion sequence and first candidates")
    p.add_argument("file")
    p.set_defaults(func=cmd_order)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (ModelError, SolveError, VBSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
