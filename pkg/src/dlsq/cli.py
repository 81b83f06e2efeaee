"""Command-line entry point (``dlsq``)."""

import argparse
import json
import logging
import sys

from .costs import ALGORITHMS, verify_costs
from .exceptions import DlsqError
from .harness import ExperimentConfig, parse_problem_spec, run_experiment
from .mesh import build_topology, format_topology, write_topology
from .problem import format_problem, write_problem
from .report import emit_report, read_report


def _add_solver_flags(p):
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--problem", required=True, help="problem file or kind:m:n[:extra]")
    p.add_argument("--topology", required=True, help="topology file or ring:N | path:N | star:N | grid:RxC | rgg:N:R:SEED")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _experiment(args):
    solver = {
        "tol": args.tol, "max_iter": args.max_iter, "mu": args.mu, "c": args.c,
        "lambda": args.lam, "eps": args.eps,
    }
    return ExperimentConfig(
        algorithm=args.algorithm, problem=args.problem, topology=args.topology,
        solver=solver, seed=args.seed, out=args.out, fmt=args.format,
    )


def cmd_gen_problem(args):
    problem = parse_problem_spec(args.problem, args.seed, args.n_blocks)
    if args.out:
        write_problem(problem, args.out)
    else:
        sys.stdout.write(format_problem(problem))
    return 0


def cmd_gen_topology(args):
    net = build_topology(args.topology)
    if args.out:
        write_topology(net, args.out)
    else:
        sys.stdout.write(format_topology(net))
    return 0


def cmd_run(args):
    report = run_experiment(_experiment(args))
    if args.out is None:
        print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_verify(args):
    report = run_experiment(_experiment(args))
    verdict = verify_costs(report)
    print(f"{report.algorithm}: k={report.k} converged={report.converged}")
    print(verdict.table())
    for note in verdict.notes:
        print(f"note: {note}")
    return 0 if verdict.passed else 1


def cmd_report(args):
    report = read_report(args.report)
    if args.out:
        emit_report(report, args.out, "json")
    d = report.to_dict()
    print(f"algorithm  {d['algorithm']}")
    print(f"k          {d['k']}  converged={d['converged']}")
    print(f"cost       measured={d['cost_measured']}  analytic={d['cost_analytic']}")
    print(f"time       measured={d['time_measured']}  analytic={d['time_analytic']}")
    print(f"setup      {d['setup_cost']}")
    if d["residual_history"]:
        print(f"residual   {d['residual_history'][-1]:.3e}")
    for note in d["errata_notes"]:
        print(f"note: {note}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="dlsq", description="Distributed least-squares workbench")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-problem", help="write a generated problem file")
    p.add_argument("--problem", required=True, help="kind:m:n[:extra]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blocks", dest="n_blocks", type=int, help="column blocks for block_orthogonal")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_problem)

    p = sub.add_parser("gen-topology", help="write a topology file")
    p.add_argument("--topology", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_topology)

    p = sub.add_parser("run", help="run one experiment")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run one experiment and check ledger totals against the cost model")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize a JSON report")
    p.add_argument("report")
    p.add_argument("--out", help="re-emit the report as JSON")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (DlsqError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
