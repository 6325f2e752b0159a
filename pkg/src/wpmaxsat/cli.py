"""Command-line front end: ``wpmaxsat solve | bench | generate``.

``solve`` follows the MaxSAT Evaluation output conventions: ``o`` lines
for each improved cost, an ``s`` status line and a ``v`` model line.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .generate import FAMILIES, GeneratorSpec, generate
from .harness import ComparisonTable, run_benchmark, write_outputs
from .solvers import ALGORITHMS, SolverConfig, Status, solve
from .wcnf import BRUTE_FORCE_LIMIT, INFEASIBLE, WcnfParseError, atomic_write, brute_force_optimum, read_wcnf

EXIT_OPTIMUM = 0
EXIT_UNSAT = 20
EXIT_TIMEOUT = 124
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 1


def _emit(line: str) -> None:
    print(line, flush=True)


def _solver_options(args) -> dict:
    return dict(timeout=args.timeout, max_conflicts=args.max_conflicts, bound_step=args.bound_step,
                seed=args.seed, stratification=args.stratification, exactly_one=args.exactly_one)


def cmd_solve(args) -> int:
    try:
        inst = read_wcnf(args.input)
    except (OSError, WcnfParseError) as exc:
        print(f"c error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for w in inst.warnings:
        _emit(f"c warning: {w}")
    cfg = SolverConfig(algorithm=args.algorithm, on_improve=lambda cost: _emit(f"o {cost}"),
                       **_solver_options(args))
    try:
        report = solve(inst, cfg)
    except ValueError as exc:
        print(f"c error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.trace:
        atomic_write(args.trace, "".join(json.dumps(rec, default=str) + "\n" for rec in report.trace))

    if report.status is Status.OPTIMUM:
        _emit("s OPTIMUM FOUND")
        _emit("v " + " ".join(str(v if report.model[v] else -v) for v in sorted(report.model)))
        code = EXIT_OPTIMUM
    elif report.status is Status.HARD_UNSAT:
        _emit("s UNSATISFIABLE")
        code = EXIT_UNSAT
    else:
        _emit("s UNKNOWN")
        code = EXIT_TIMEOUT

    if args.verify and code != EXIT_TIMEOUT:
        if inst.num_vars > BRUTE_FORCE_LIMIT:
            _emit(f"c verification skipped: more than {BRUTE_FORCE_LIMIT} variables")
        else:
            opt, _ = brute_force_optimum(inst)
            expected = opt if opt is not INFEASIBLE else None
            if report.cost == expected:
                _emit("c verified against brute force")
            else:
                _emit(f"c verification FAILED: brute force optimum is {opt}")
                code = EXIT_VERIFY_FAILED
    return code


def cmd_bench(args) -> int:
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        print(f"c error: unknown algorithm(s): {', '.join(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    runs = run_benchmark(args.dir, algorithms, jobs=args.jobs, **_solver_options(args))
    if not runs:
        print(f"c error: no .wcnf files under {args.dir}", file=sys.stderr)
        return EXIT_USAGE
    timing = args.timing == "wall"
    table = ComparisonTable(runs)
    write_outputs(table, args.csv, runs, args.runs_csv, timing)
    sys.stdout.write(table.to_text(timing) if args.csv else table.to_csv(timing))
    return 0


def cmd_generate(args) -> int:
    spec = GeneratorSpec(family=args.family, count=args.count, num_vars=args.vars,
                         num_clauses=args.clauses, min_weight=args.min_weight,
                         max_weight=args.max_weight, hard_fraction=args.hard_fraction, seed=args.seed)
    try:
        paths = generate(spec, args.out)
    except ValueError as exc:
        print(f"c error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for p in paths:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpmaxsat", description="Weighted partial MaxSAT toolkit")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timeout", type=float, default=None, help="seconds per solve")
    common.add_argument("--max-conflicts", type=int, default=None,
                        help="conflict budget per solve (a deterministic timeout)")
    common.add_argument("--bound-step", choices=["subset-sum", "plus-one"], default="subset-sum")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--stratification", choices=["diversity", "next"], default="diversity",
                        help="how wpm1-strat lowers its weight threshold")
    common.add_argument("--exactly-one", choices=["pairwise", "sequential"], default="pairwise",
                        help="CNF encoding of the exactly-one constraints over blocking variables")

    p = sub.add_parser("solve", parents=[common], help="solve one WCNF file")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="wpm1")
    p.add_argument("--input", required=True, help="WCNF file")
    p.add_argument("--trace", help="write the solver trace as JSON lines to this file")
    p.add_argument("--verify", action="store_true", help="check the cost against brute force")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", parents=[common], help="compare algorithms over a benchmark tree")
    p.add_argument("--dir", required=True, help="benchmark root; subdirectories are families")
    p.add_argument("--algorithms", default="wpm1,wpm2,linear-sat", help="comma-separated list")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="write the summary CSV here (text tables go to stdout)")
    p.add_argument("--runs-csv", help="write one CSV row per (algorithm, instance) here")
    p.add_argument("--timing", choices=["wall", "off"], default="wall",
                   help="'off' prints NA for times so reruns are byte-identical")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="write random WPMax2SAT/WPMax3SAT instances")
    p.add_argument("--family", choices=sorted(FAMILIES), default="wpmax2sat")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--vars", type=int, default=10)
    p.add_argument("--clauses", type=int, default=30)
    p.add_argument("--min-weight", type=int, default=1)
    p.add_argument("--max-weight", type=int, default=20)
    p.add_argument("--hard-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="c %(levelname)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
