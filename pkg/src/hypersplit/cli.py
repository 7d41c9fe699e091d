"""Command-line entry point.

Exit codes: 0 success/feasible, 2 valid but infeasible instance,
3 verification failure, 4 input error, 5 oracle budget refusal.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

from . import formats
from .generate import TARGET_RULES, GenerationError, generate_instance, generate_pcms, generate_rmc
from .geometry import (
    DegenerateInputError,
    OnHyperplaneError,
    PointConfig,
    build_rmc,
    enumerate_halfspaces,
    solve_geometric,
    verify_partition,
)
from .greedy import greedy_cover
from .instances import (
    PCMSInstance,
    PTDInstance,
    RMCInstance,
    pcms_objective,
    ptd_objective,
    rmc_objective,
    solve_pcms,
    solve_ptd,
    solve_rmc,
    verify_pcms,
    verify_ptd,
    verify_rmc,
)
from .oracle import BudgetExceeded, OracleBudget, check_submodular, exact_min_cover, realizable_subsets
from .svg import UnsupportedDimensionError, emit_svg

log = logging.getLogger("hypersplit")

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3
EXIT_INPUT = 4
EXIT_BUDGET = 5


class InputError(Exception):
    pass


def _read_instance(path: str, kind: str | None):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"instance file not found: {path}")
    return formats.parse_instance(p.read_text(encoding="utf-8"), None if kind == "auto" else kind)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def solve_instance(inst, mode: str = "lazy", threads: int = 1) -> formats.SolutionFile:
    """Solve any instance kind and package the result as a solution file."""
    if isinstance(inst, PointConfig):
        _, report = solve_geometric(inst, mode=mode, threads=threads)
        return formats.solution_from_report(report)
    if isinstance(inst, PCMSInstance):
        return formats.solution_from_cover("pcms", solve_pcms(inst, mode=mode, threads=threads))
    if isinstance(inst, PTDInstance):
        return formats.solution_from_cover("ptd", solve_ptd(inst, mode=mode, threads=threads))
    return formats.solution_from_cover("rmc", solve_rmc(inst, mode=mode, threads=threads))


def recheck(inst, sol: formats.SolutionFile):
    """Violations of a solution, recomputed without the greedy machinery."""
    if isinstance(inst, PointConfig):
        return verify_partition(inst, sol.hyperplanes)
    n_edges = len(inst.system.edges) if isinstance(inst, PTDInstance) else len(inst.edges)
    bad = [j for j in sol.chosen if not 0 <= j < n_edges]
    if bad:
        raise InputError(f"solution refers to edges {bad} outside [0, {n_edges})")
    if isinstance(inst, PCMSInstance):
        return verify_pcms(inst, sol.chosen)
    if isinstance(inst, PTDInstance):
        return verify_ptd(inst, sol.chosen)
    return verify_rmc(inst, sol.chosen)


def _objective(inst):
    if isinstance(inst, PointConfig):
        return rmc_objective(build_rmc(inst)[0])
    if isinstance(inst, PCMSInstance):
        return pcms_objective(inst)
    if isinstance(inst, PTDInstance):
        return ptd_objective(inst)
    return rmc_objective(inst)


def cmd_solve(args) -> int:
    inst = _read_instance(args.input, args.kind)
    sol = solve_instance(inst, mode=args.mode, threads=args.threads)
    text = formats.emit_solution(sol)
    if args.output:
        _write(args.output, text)
    if args.svg:
        if not isinstance(inst, PointConfig):
            raise InputError("--svg needs a geometric instance")
        _write(args.svg, emit_svg(inst, sol.hyperplanes))
    print(f"solution size: {len(sol.chosen)}")
    print(f"feasible: {'yes' if sol.feasible else 'no'}")
    print(f"f_max: {sol.f_max}")
    gains = ",".join(str(g) for _, g, _ in sol.trace)
    deficits = ",".join(str(d) for _, _, d in sol.trace)
    print(f"trace: {len(sol.trace)} steps; gains [{gains}]; deficiencies [{deficits}]")
    if not sol.feasible:
        print(f"shortfalls: {sol.shortfalls}")
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _read_instance(args.input, args.kind)
    obj = _objective(inst)
    budget = OracleBudget(max_edges=args.budget_edges, max_subset_points=args.budget_points)
    k, K = exact_min_cover(obj, budget)
    print(f"k = {k}")
    print(f"optimal edges: {list(K)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _read_instance(args.input, args.kind)
    sol_path = Path(args.solution)
    if not sol_path.is_file():
        raise InputError(f"solution file not found: {args.solution}")
    sol = formats.parse_solution(sol_path.read_text(encoding="utf-8"))
    try:
        found = recheck(inst, sol)
    except OnHyperplaneError as exc:
        print(f"verification failed: {exc}")
        return EXIT_VERIFY
    if not found:
        print("verified: no violations")
        return EXIT_OK
    for v in found:
        print(f"violation: group {v.group} face {list(v.members)} count {v.count} limit {v.limit}")
    if not sol.feasible and found == list(sol.violations):
        print("instance is infeasible; violations match the recorded shortfalls")
        return EXIT_INFEASIBLE
    print("verification failed")
    return EXIT_VERIFY


def cmd_enumerate(args) -> int:
    inst = _read_instance(args.input, "geometric")
    halfspaces = enumerate_halfspaces(inst)
    print(f"canonical halfspaces: {len(halfspaces)}")
    print(f"dichotomy classes (with empty/full): {len(halfspaces) + 1}")
    if args.list:
        for h in halfspaces:
            print(f"{h.key} {sorted(h.subset)}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "geometric":
        inst = generate_instance(args.seed, args.n, args.dim, args.groups, args.bound, args.targets)
    elif args.kind == "pcms":
        inst = generate_pcms(args.seed, args.n, args.edges, args.groups)
    else:
        inst = generate_rmc(args.seed, args.n, args.edges, args.groups)
    _write(args.output, formats.emit_instance(inst))
    return EXIT_OK


def cmd_plot(args) -> int:
    inst = _read_instance(args.input, "geometric")
    hyperplanes = []
    if args.solution:
        hyperplanes = formats.parse_solution(Path(args.solution).read_text(encoding="utf-8")).hyperplanes
    _write(args.svg or args.output, emit_svg(inst, hyperplanes))
    return EXIT_OK


def cmd_selftest(args) -> int:
    budget = OracleBudget(max_edges=args.budget_edges, max_subset_points=args.budget_points)
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        failures += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")

    for t in range(args.count):
        seed = args.seed + t
        objs = [
            ("pcms", pcms_objective(generate_pcms(seed, 8, 10, 3))),
            ("rmc", rmc_objective(generate_rmc(seed, 7, 8, 2))),
        ]
        for label, obj in objs:
            chk = check_submodular(obj, trials=args.trials, seed=seed)
            report(f"submodular {label} seed={seed}", chk.passed, chk.reason)
            sol, _ = greedy_cover(obj)
            if obj.edge_count <= budget.max_edges:
                k, _ = exact_min_cover(obj, budget)
                bound = k * (1 + math.log(max(obj.f_max, 2)))
                report(f"greedy bound {label} seed={seed}", len(sol) <= bound, f"|greedy|={len(sol)} k={k}")
        cfg = generate_instance(seed, 6, 1 + seed % 3, 1, 50)
        if cfg.n <= budget.max_subset_points:
            mine = {h.subset if 0 not in h.subset else frozenset(range(cfg.n)) - h.subset for h in enumerate_halfspaces(cfg)}
            report(f"enumeration seed={seed} d={cfg.dim}", mine == realizable_subsets(cfg, budget))
    print(f"{failures} failure(s)")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersplit", description="Few shared hyperplanes that shrink many point sets.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", "-i", required=True)
        p.add_argument("--kind", default="auto", choices=["auto", "geometric", "pcms", "ptd", "rmc"])

    def budgets(p):
        p.add_argument("--budget-edges", type=int, default=OracleBudget.max_edges)
        p.add_argument("--budget-points", type=int, default=OracleBudget.max_subset_points)

    p = sub.add_parser("solve", help="greedy solve; writes a solution file")
    common(p)
    p.add_argument("--output", "-o")
    p.add_argument("--mode", choices=["naive", "lazy"], default="lazy")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact minimum via exhaustive search")
    common(p)
    budgets(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a solution file against its instance")
    common(p)
    p.add_argument("--solution", "-s", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list combinatorially distinct halfspaces")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--output", "-o")
    p.add_argument("--kind", default="geometric", choices=["geometric", "pcms", "rmc"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--groups", type=int, default=1)
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("--edges", type=int, default=10)
    p.add_argument("--targets", choices=TARGET_RULES, default="half")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("plot", help="render a planar instance (and solution) as SVG")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--solution", "-s")
    p.add_argument("--svg")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("selftest", help="run the oracle/property checks on generated instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--trials", type=int, default=200)
    budgets(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = os.environ.get("HYPERSPLIT_LOG", "").upper() or ("DEBUG" if args.verbose > 1 else "INFO" if args.verbose else "WARNING")
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DegenerateInputError as exc:
        print(f"input error: {exc}; perturb the coordinates slightly (exact rationals) and retry", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, formats.ParseError, formats.ValidationError, UnsupportedDimensionError, GenerationError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
