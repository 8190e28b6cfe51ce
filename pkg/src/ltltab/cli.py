"""Command-line front-end: solve, oracle, bench, gen, explore.

Exit codes: 0 satisfiable, 1 unsatisfiable, 2 error or resource cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .bench import CSV_HEADER, generate_foo, run_bench
from .formula import ParseError, Formula, format_formula, formula_length, parse_formula
from .oracle import ClosureLimitExceeded, decide_graph
from .search import CapExceeded, SearchOptions, TableauBugError, run_parallel, solve
from .trace import trace_to_dot, trace_to_json

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_ERROR = 2


def _read_formula(arg: str) -> Formula:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            text = fh.read().strip()
    else:
        text = arg
    return parse_formula(text)


def _parse_caps(spec: str) -> tuple[int, int]:
    parts = spec.split(",")
    if len(parts) != 2:
        raise ValueError("--caps expects steps,depth")
    return int(parts[0]), int(parts[1])


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ltltab",
        description="One-pass tree tableau for LTL satisfiability")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="decide a formula with the tableau")
    ps.add_argument("formula", help="formula text, or @file with the text")
    ps.add_argument("--model", action="store_true",
                    help="print the extracted lasso model as JSON on SAT")
    ps.add_argument("--trace", choices=["json", "dot"],
                    help="print the construction trace")
    ps.add_argument("--stats", action="store_true")
    ps.add_argument("--workers", type=int, default=1, metavar="N")
    ps.add_argument("--seed", type=int, default=None, metavar="S",
                    help="randomize principal selection and child order")
    ps.add_argument("--no-prune0", action="store_true",
                    help="disable the PRUNE0 early-cross rule")
    ps.add_argument("--caps", metavar="STEPS,DEPTH",
                    help="resource caps (default 100000000,100000)")

    po = sub.add_parser("oracle", help="graph-tableau reference verdict")
    po.add_argument("formula")
    po.add_argument("--closure-limit", type=int, default=24)

    pb = sub.add_parser("bench", help="benchmark a formula series as CSV")
    pb.add_argument("series",
                    help="foo, patterns, or @file (one formula per line)")
    pb.add_argument("--n", type=int, default=4, metavar="K",
                    help="largest index for the foo series")
    pb.add_argument("--repeat", type=int, default=1, metavar="R")
    pb.add_argument("--seed", type=int, default=None)
    pb.add_argument("--no-prune0", action="store_true")

    pg = sub.add_parser("gen", help="print a generated formula")
    pg.add_argument("series", choices=["foo"])
    pg.add_argument("--n", type=int, required=True, metavar="K")

    pe = sub.add_parser("explore", help="run the interactive explorer API")
    pe.add_argument("--host", default="127.0.0.1")
    pe.add_argument("--port", type=int, default=8000)
    return p


def _cmd_solve(args) -> int:
    f = _read_formula(args.formula)
    opts = SearchOptions(prune0=not args.no_prune0, seed=args.seed,
                         trace=args.trace is not None)
    if args.caps:
        opts.max_steps, opts.max_poised_depth = _parse_caps(args.caps)
    if args.trace and args.workers != 1:
        print("trace output requires --workers 1", file=sys.stderr)
        return EXIT_ERROR
    verdict = run_parallel(f, args.workers, opts)
    print("SAT" if verdict.satisfiable else "UNSAT")
    if args.model and verdict.model is not None:
        print(json.dumps(verdict.model.to_json()))
    if args.trace == "json":
        print(json.dumps(trace_to_json(verdict.trace)))
    elif args.trace == "dot":
        sys.stdout.write(trace_to_dot(verdict.trace))
    if args.stats:
        s = verdict.stats
        print(f"steps={s.steps} depth={s.max_poised_depth} "
              f"branches={s.branches_explored} "
              f"millis={s.wall_time * 1000.0:.3f}")
    return EXIT_SAT if verdict.satisfiable else EXIT_UNSAT


def _cmd_oracle(args) -> int:
    f = _read_formula(args.formula)
    sat = decide_graph(f, closure_limit=args.closure_limit)
    print("SAT" if sat else "UNSAT")
    return EXIT_SAT if sat else EXIT_UNSAT


def _cmd_bench(args) -> int:
    opts = SearchOptions(prune0=not args.no_prune0, seed=args.seed)
    rows = run_bench(args.series, n=args.n, repeat=args.repeat, opts=opts)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
    return EXIT_SAT


def _cmd_gen(args) -> int:
    print(format_formula(generate_foo(args.n)))
    return EXIT_SAT


def _cmd_explore(args) -> int:
    import uvicorn

    from .explorer import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_SAT


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_SAT
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "explore":
            return _cmd_explore(args)
        raise AssertionError(args.command)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CapExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ClosureLimitExceeded, TableauBugError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
