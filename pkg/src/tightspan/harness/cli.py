"""Command-line interface.

Exit codes: 0 ok, 2 bound violation or failed check, 3 parse error,
4 infeasible as requested.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .. import kernels
from ..core import validate
from ..errors import InvalidAssignment, LimitExceeded, ParseError
from ..oracle import optimal_makespan, schedule_witness
from ..restricted import DESCENT, PATH_PUSH
from .bench import MODES, bench, collect, general_report, restricted_report
from .check import FAIL, check_assignment
from .generate import GeneratorSpec, default_seed, generate
from .io import dump_assignment, dump_instance, load_instance, parse_assignment
from .report import summary_row, to_csv, to_json

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_INFEASIBLE = 0, 2, 3, 4


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(report, assignment, as_json: bool) -> None:
    if as_json:
        d = report.as_dict()
        d["assignment"] = None if assignment is None else json.loads(dump_assignment(assignment))
        print(json.dumps(d))
        return
    for key in ("instance", "mode", "m", "n", "epsilon", "L", "T", "makespan",
                "certified_bound", "bound_kind", "q", "beats_33_17", "moves", "pivots"):
        value = getattr(report, key)
        if value is not None and value != "":
            print(f"{key}: {value}")
    if report.error:
        print(f"error: {report.error}")
    if assignment is not None:
        print(f"assignment: {dump_assignment(assignment)}")


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    spec = GeneratorSpec(m=args.m, n=args.n, pmax=args.pmax, k=args.k, seed=seed,
                         restricted=args.restricted)
    text = dump_instance(generate(spec)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.kind == "general":
        if (args.T is None) != (args.L is None):
            raise SystemExit("--T and --L must be given together")
        if args.auto or args.T is None:
            rep, result = general_report(inst, Path(args.instance).name)
        else:
            rep, result = general_report(inst, Path(args.instance).name, args.T, args.L)
        _emit(rep, result.assignment, args.json)
        if not result.feasible:
            return EXIT_INFEASIBLE
    else:
        if not inst.is_restricted:
            print("error: instance is not restricted", file=sys.stderr)
            return EXIT_PARSE
        rep, result = restricted_report(inst, Path(args.instance).name, args.strategy)
        _emit(rep, result.assignment, args.json)
    return EXIT_VIOLATION if rep.violation else EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    if (args.T is None) != (args.L is None):
        raise SystemExit("--T and --L must be given together")
    if args.T is not None:
        witness = schedule_witness(inst, args.T, args.L)
        print(f"exists: {witness is not None}")
        if witness is not None:
            print(f"witness: {dump_assignment(witness)}")
            return EXIT_OK
        return EXIT_INFEASIBLE
    res = optimal_makespan(inst)
    print(f"opt_makespan: {res.opt_makespan}")
    print(f"witness: {dump_assignment(res.witness)}")
    print(f"nodes_explored: {res.nodes_explored}")
    return EXIT_OK


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    a = parse_assignment(Path(args.assignment).read_bytes(), inst)
    try:
        validate(inst, a)
    except InvalidAssignment as exc:
        print(f"{FAIL} valid: {exc}")
        return EXIT_PARSE
    print("PASS valid")
    checks = check_assignment(inst, a, args.T, args.L)
    for c in checks:
        print(c.line())
    return EXIT_VIOLATION if any(c.status == FAIL for c in checks) else EXIT_OK


def cmd_bench(args) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    instances = collect(args.dir) if args.dir else []
    reports = bench(instances, modes, jobs=args.jobs)
    text = to_csv(reports)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        for r in reports:
            print(to_json(r))
        if reports:
            print(json.dumps(summary_row(reports)))
    violations = sum(r.violation for r in reports)
    print(f"rows={len(reports)} violations={violations} backend={kernels.BACKEND}", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tightspan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True, help="feasible machines per job")
    g.add_argument("--pmax", type=int, required=True)
    g.add_argument("--seed", type=int, default=None, help="default: $TIGHTSPAN_SEED or 0")
    g.add_argument("--restricted", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance")
    ssub = s.add_subparsers(dest="kind", required=True)
    sg = ssub.add_parser("general")
    sg.add_argument("--instance", required=True)
    sg.add_argument("--T", type=int)
    sg.add_argument("--L", type=_fraction)
    sg.add_argument("--auto", action="store_true")
    sg.add_argument("--json", action="store_true")
    sg.set_defaults(func=cmd_solve)
    sr = ssub.add_parser("restricted")
    sr.add_argument("--instance", required=True)
    sr.add_argument("--strategy", choices=[DESCENT, PATH_PUSH], default=DESCENT)
    sr.add_argument("--json", action="store_true")
    sr.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exact optimum or schedule existence")
    o.add_argument("--instance", required=True)
    o.add_argument("--T", type=int)
    o.add_argument("--L", type=_fraction)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("check", help="re-verify an assignment")
    c.add_argument("--instance", required=True)
    c.add_argument("--assignment", required=True)
    c.add_argument("--T", type=int)
    c.add_argument("--L", type=_fraction)
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="run solvers over a directory of instances")
    b.add_argument("--dir")
    b.add_argument("--modes", default="general,restricted")
    b.add_argument("--out")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--json", action="store_true", help="also stream JSON rows to stdout")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "modes", None):
        bad = [m for m in args.modes.split(",") if m.strip() and m.strip() not in MODES]
        if bad:
            print(f"error: unknown modes {bad}", file=sys.stderr)
            return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
