"""Command-line front end.

Exit codes: 0 answer yes (or success), 1 answer no, 2 usage or input error,
10 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from .bounds import NotAWitness, audit_witness, thin_profile
from .core import Instance, VassError, instance_size, to_unary
from .formats import (
    emit_instance,
    emit_run,
    emit_stats,
    parse_graph,
    parse_hypergraph,
    parse_instance,
    parse_program,
    parse_run,
)
from .reduce import (
    add_opposite_counter,
    bounded_reach_to_cover,
    compile_program,
    cover_to_reach,
    eliminate_zero_tests,
    gen_clique_instance,
    gen_cycle_instance,
    gen_hyperclique_instance,
)
from .solve import (
    BudgetExhausted,
    Status,
    Witness,
    backward_cover,
    bounded_dfs,
    forward_cover,
    shortest_witness_oracle,
    ztest_bounded_search,
)
from .suites import SUITES, UnknownSuite, run_suite

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 10

FORMATS_HELP = """\
instance format ('#' starts a comment):
  vass d=<d>
  state <name>
  trans <src> <dst> <x1> ... <xd>
  ztest <src> <dst> <i>            zero-guard on counter i (1-based)
  init <state> <v1> ... <vd>
  target <state> <v1> ... <vd>
  mode cover|reach
  bound <B>                        optional

graph format:      graph k=<k> mode=partite|circle / part <i>: v ... / edge u v
hypergraph format: hypergraph parts=<l> / part <i>: v ... / hedge u v w
program format:    counters x y / inc x / dec x / ztest x / multiply x <p> /
                   divide x <p> / edge u v / select v / hyperedge u v w /
                   vertex <name> <prime> / guess { ... | ... }
run format:        len=<k>, then one '<state> <v1> ... <vd>' line per configuration
"""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _digest(instance) -> list[str]:
    v = instance.vass
    bound = "none" if instance.bound is None else instance.bound
    return [f"n={instance_size(instance)} d={v.dimension} states={len(v.states)} "
            f"transitions={len(v.transitions)} bound={bound} mode={instance.mode}"]


def _print(lines):
    for line in lines:
        print(line)


def _witness_lines(w: Witness) -> list[str]:
    return emit_run(w.run) + emit_stats({
        "max_counters": ",".join(map(str, w.max_counters)) or "-",
        "zero_tests": w.guarded_steps,
    })


def _cap(value: str) -> Optional[int]:
    if value == "auto":
        return None
    try:
        cap = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("cap is 'auto' or a positive integer") from None
    if cap < 1:
        raise argparse.ArgumentTypeError("cap must be at least 1")
    return cap


def _vector(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.file))
    if args.bound is not None:
        inst = inst.with_bound(args.bound)
    algo = args.algo
    t0 = time.perf_counter()
    print(f"algo={algo}")
    _print(_digest(inst))
    if algo == "backward":
        res = backward_cover(inst)
        print(f"answer={'yes' if res.covered else 'no'}")
        _print(emit_stats({"rounds": res.rounds, "basis": len(res.basis),
                           "seconds": f"{time.perf_counter() - t0:.3f}"}))
        return EXIT_YES if res.covered else EXIT_NO
    try:
        if algo == "forward":
            res = forward_cover(inst, cap=args.cap, max_nodes=args.budget)
        elif algo == "bounded-dfs":
            res = bounded_dfs(inst, max_nodes=args.budget)
        else:
            res = ztest_bounded_search(inst, max_nodes=args.budget)
    except BudgetExhausted as exc:
        print("answer=budget-exhausted")
        _print(emit_stats({"expanded": exc.expanded}))
        return EXIT_BUDGET
    print(f"answer={res.answer}")
    if res.witness is not None:
        _print(_witness_lines(res.witness))
    stats = {"expanded": res.expanded, "seconds": f"{time.perf_counter() - t0:.3f}"}
    if res.cap is not None:
        stats["cap"] = res.cap
        stats["budget_limited"] = str(res.budget_limited).lower()
    if "envelope" in res.extra:
        stats["envelope"] = res.extra["envelope"]
    _print(emit_stats(stats))
    if res.status is Status.NOT_FOUND_WITHIN_CAP:
        return EXIT_BUDGET
    return EXIT_YES if res.found else EXIT_NO


def cmd_oracle(args) -> int:
    inst = parse_instance(_read(args.file))
    _print(_digest(inst))
    try:
        run = shortest_witness_oracle(inst, budget=args.budget)
    except BudgetExhausted as exc:
        print("answer=budget-exhausted")
        _print(emit_stats({"expanded": exc.expanded}))
        return EXIT_BUDGET
    if run is None:
        print("answer=no")
        return EXIT_NO
    print("answer=yes")
    _print(_witness_lines(Witness.of(run)))
    return EXIT_YES


def cmd_bound(args) -> int:
    prof = thin_profile(args.n, args.d)
    for i, v in enumerate(prof.L):
        print(f"L[{i}]={v}")
    for i, v in enumerate(prof.M):
        print(f"M[{i}]={v}")
    return EXIT_YES


def cmd_audit(args) -> int:
    inst = parse_instance(_read(args.instance))
    run = parse_run(_read(args.run), inst)
    try:
        report = audit_witness(inst, run)
    except NotAWitness as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO
    _print(report.lines())
    return EXIT_YES if report.ok else EXIT_NO


def cmd_gen(args) -> int:
    text = _read(args.file)
    if args.kind == "clique":
        inst = gen_clique_instance(parse_graph(text)).instance
    elif args.kind == "cycle":
        inst = gen_cycle_instance(parse_graph(text)).instance
    else:
        inst = gen_hyperclique_instance(parse_hypergraph(text), d=args.d).instance
    if args.eliminate_ztests:
        inst = eliminate_zero_tests(inst, unary=args.unary).instance
    elif args.unary:
        inst = Instance(to_unary(inst.vass), inst.init, inst.target, inst.mode, inst.bound)
    sys.stdout.write(emit_instance(inst))
    return EXIT_YES


def cmd_compile(args) -> int:
    prog = parse_program(_read(args.file))
    inst = compile_program(prog, init=args.init)
    if args.bound is not None:
        inst = inst.with_bound(args.bound)
    sys.stdout.write(emit_instance(inst))
    return EXIT_YES


def cmd_transform(args) -> int:
    inst = parse_instance(_read(args.file))
    if args.kind == "cover2reach":
        out = cover_to_reach(inst)
    elif args.kind == "reach2cover":
        out = bounded_reach_to_cover(inst)
    else:
        out = add_opposite_counter(inst, n=args.n)
    sys.stdout.write(emit_instance(out))
    return EXIT_YES


def cmd_suite(args) -> int:
    report = run_suite(args.name, seed=args.seed, count=args.count)
    _print(report.lines())
    return EXIT_YES if report.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vasscov",
        description="VASS coverability/reachability solvers, bounds and reductions.",
        epilog=FORMATS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide an instance file")
    s.add_argument("--algo", choices=("forward", "backward", "bounded-dfs", "ztest"),
                   default="forward")
    s.add_argument("--cap", type=_cap, default=None,
                   help="forward run-length cap: 'auto' (L_d) or an integer")
    s.add_argument("--budget", type=int, default=None, help="maximum node expansions")
    s.add_argument("--bound", type=int, default=None, help="override the counter bound")
    s.add_argument("file")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="shortest witness by plain BFS")
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("file")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bound", help="print L[i] and M[i] for size n and dimension d")
    s.add_argument("n", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("audit", help="check a witness against the length bounds")
    s.add_argument("instance")
    s.add_argument("run")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("gen", help="generate a hardness instance from a graph file")
    s.add_argument("kind", choices=("clique", "cycle", "hyperclique"))
    s.add_argument("--d", type=int, default=None, help="hyperclique dimension (parts = 4d)")
    s.add_argument("--unary", action="store_true")
    s.add_argument("--eliminate-ztests", action="store_true")
    s.add_argument("file")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("compile", help="compile a counter program")
    s.add_argument("--init", type=_vector, default=None,
                   help="initial counters, comma-separated (default all zero)")
    s.add_argument("--bound", type=int, default=None)
    s.add_argument("file")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("transform", help="answer-preserving instance transforms")
    s.add_argument("kind", choices=("cover2reach", "reach2cover", "opposite"))
    s.add_argument("--n", type=int, default=None, help="counter bound for 'opposite'")
    s.add_argument("file")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("suite", help="run a seeded property suite")
    s.add_argument("name", help=f"one of: {', '.join(SUITES)}")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, default=None)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnknownSuite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VassError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
