"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary of any pytest run that includes
this module.
"""

import random
from contextlib import contextmanager
from dataclasses import replace
from functools import lru_cache
from math import ceil, comb, log
from time import perf_counter

from conftest import DATA, load_instance
from hypersplit.cli import solve_instance
from hypersplit.formats import emit_instance, emit_solution, parse_instance, parse_solution
from hypersplit.generate import generate_instance, generate_pcms, generate_rmc
from hypersplit.geometry import (
    PointConfig,
    build_rmc,
    enumerate_halfspaces,
    solve_geometric,
    verify_partition,
)
from hypersplit.instances import (
    arrangement,
    pcms_objective,
    rmc_objective,
    solve_pcms,
    solve_rmc,
    verify_pcms,
    verify_rmc,
)
from hypersplit.oracle import OracleBudget, check_submodular, exact_min_cover, realizable_subsets
from hypersplit.svg import emit_svg

RESULTS: list[str] = []

# The default exact-search budget (20 edges) is sized for interactive use;
# the suites below deliberately go past it.
WIDE = OracleBudget(max_edges=512, max_subset_points=14)


@contextmanager
def criterion(number, title, limit=None):
    info = {"detail": ""}
    t0 = perf_counter()
    ok = False
    try:
        yield info
        elapsed = perf_counter() - t0
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = perf_counter() - t0
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f}s] {info['detail']}".rstrip()
        RESULTS.append(line)
        print("\n" + line)


def bound(k, f_max):
    return k * (1 + log(max(f_max, 2)))


# -- instance suites --------------------------------------------------------


@lru_cache(maxsize=None)
def geometric_suite():
    rng = random.Random(2024)
    out = []
    for seed in range(100):
        n, d, m = rng.randint(1, 8), rng.randint(1, 2), rng.randint(1, 3)
        cfg = generate_instance(seed, n, d, m, bound=40, target_rule=rng.choice(["half", "singleton"]))
        if rng.random() < 0.4:
            groups = [replace(g, mu=rng.randint(1, len(g.members))) for g in cfg.groups]
            cfg = PointConfig(cfg.dim, cfg.points, groups)
        out.append(cfg)
    return tuple(out)


@lru_cache(maxsize=None)
def pcms_suite():
    rng = random.Random(7)
    return tuple(
        generate_pcms(1000 + seed, rng.randint(1, 10), rng.randint(1, 12), rng.randint(1, 3)) for seed in range(100)
    )


@lru_cache(maxsize=None)
def submodular_suite():
    rng = random.Random(11)
    out = []
    for seed in range(25):
        out.append(generate_pcms(5000 + seed, rng.randint(2, 12), rng.randint(1, 14), rng.randint(1, 4)))
    for seed in range(15):
        out.append(generate_rmc(6000 + seed, rng.randint(2, 12), rng.randint(1, 14), rng.randint(1, 3)))
    for seed in range(10):
        out.append(build_rmc(generate_instance(7000 + seed, rng.randint(2, 8), rng.randint(1, 2), rng.randint(1, 3)))[0])
    return tuple(out)


def line_suite():
    return tuple(generate_instance(300 + n, n, 1, 1, bound=50, target_rule="singleton") for n in range(2, 9))


@lru_cache(maxsize=None)
def median_suite():
    return tuple(generate_instance(400 + 10 * n + s, n, 2, 1, bound=60) for n in range(2, 11) for s in range(2))


def figure_instance():
    return load_instance("figure1")


def all_suite_instances():
    rmcs = [x for x in submodular_suite() if not hasattr(x, "demands")]
    pcms = [x for x in submodular_suite() if hasattr(x, "demands")]
    return (
        list(geometric_suite())
        + list(pcms_suite())
        + pcms
        + rmcs
        + list(line_suite())
        + list(median_suite())
        + [figure_instance()]
    )


# -- criteria ---------------------------------------------------------------


def test_criterion_01_arrangement_golden():
    with criterion(1, "arrangement of {1..5} under {1,2,3},{3,4,5}") as info:
        ground, edges = [1, 2, 3, 4, 5], [{1, 2, 3}, {3, 4, 5}]
        best = float("inf")
        for _ in range(50):
            t = perf_counter()
            faces = arrangement(ground, edges)
            best = min(best, perf_counter() - t)
        assert set(faces) == {frozenset({1, 2}), frozenset({3}), frozenset({4, 5})}
        assert len(faces) == 3
        assert best < 1e-3, f"best call {best * 1e6:.0f}us"
        info["detail"] = f"best call {best * 1e6:.1f}us"


def test_criterion_02_greedy_within_bound():
    with criterion(2, "greedy size within k(1 + ln f_max) on 200 instances", limit=60) as info:
        worst = 0.0
        for cfg in geometric_suite():
            hyperplanes, report = solve_geometric(cfg)
            inst, _ = build_rmc(cfg)
            k, _ = exact_min_cover(rmc_objective(inst), WIDE)
            f_max = report.trace.f_max
            assert report.feasible and report.shortfalls == [0] * len(cfg.groups)
            assert verify_partition(cfg, hyperplanes) == []
            assert len(report.chosen) <= bound(k, f_max)
            if k:
                worst = max(worst, len(report.chosen) / k)
        for inst in pcms_suite():
            res = solve_pcms(inst)
            k, _ = exact_min_cover(pcms_objective(inst), WIDE)
            assert len(res.chosen) <= bound(k, res.trace.f_max)
            found = verify_pcms(inst, res.chosen)
            assert found == res.violations
            if res.feasible:
                assert found == [] and not any(res.shortfalls)
            else:
                assert {v.group: v.limit - v.count for v in found} == {
                    i: s for i, s in enumerate(res.shortfalls) if s
                }
            if k:
                worst = max(worst, len(res.chosen) / k)
        info["detail"] = f"worst ratio greedy/k = {worst:.2f}"


def test_criterion_03_submodularity():
    with criterion(3, "1000 chains on each of 50 objectives, no counterexample", limit=30) as info:
        bad = []
        for i, inst in enumerate(submodular_suite()):
            obj = pcms_objective(inst) if hasattr(inst, "demands") else rmc_objective(inst)
            res = check_submodular(obj, trials=1000, seed=i)
            if not res.passed:
                bad.append((i, res.reason, res.counterexample))
        assert not bad, bad
        info["detail"] = f"{len(submodular_suite())} objectives"


def test_criterion_04_enumeration_complete():
    with criterion(4, "enumeration = LP scan = Cover's count on 50 configs", limit=120) as info:
        rng = random.Random(99)
        sizes = []
        for i in range(50):
            d = 1 + i % 3
            n = 12 if i < 3 else rng.randint(1, 12)
            cfg = generate_instance(800 + i, n, d, 1, bound=30)
            enumerated = {
                h.subset if 0 not in h.subset else frozenset(range(n)) - h.subset for h in enumerate_halfspaces(cfg)
            }
            assert enumerated == realizable_subsets(cfg, WIDE)
            assert len(enumerated) + 1 == sum(comb(n - 1, j) for j in range(d + 1))
            sizes.append(n)
        info["detail"] = f"n up to {max(sizes)}"


def test_criterion_05_line_singletons():
    with criterion(5, "1D with mu = 1 needs exactly n - 1 cuts", limit=1):
        for cfg in line_suite():
            hyperplanes, report = solve_geometric(cfg)
            assert len(hyperplanes) == cfg.n - 1
            assert verify_partition(cfg, hyperplanes) == []


def test_criterion_06_median_line():
    with criterion(6, "single planar group, mu = ceil(n/2): one line suffices", limit=10) as info:
        for cfg in median_suite():
            (group,) = cfg.groups
            assert group.mu == ceil(cfg.n / 2)
            inst, _ = build_rmc(cfg)
            k, _ = exact_min_cover(rmc_objective(inst), WIDE)
            assert k == 1
            hyperplanes, report = solve_geometric(cfg)
            assert verify_partition(cfg, hyperplanes) == []
            assert len(hyperplanes) <= bound(k, report.trace.f_max)
        info["detail"] = f"{len(median_suite())} configs, n = 2..10"


def test_criterion_07_figure_instance():
    with criterion(7, "three planar groups, targets (3, 4, 2), two lines", limit=5) as info:
        cfg = figure_instance()
        assert [g.mu for g in cfg.groups] == [3, 4, 2]
        inst, _ = build_rmc(cfg)
        k, combo = exact_min_cover(rmc_objective(inst), WIDE)
        assert k == 2
        hyperplanes, report = solve_geometric(cfg)
        assert report.feasible and verify_partition(cfg, hyperplanes) == []
        svg = emit_svg(cfg, hyperplanes)
        assert svg.count("<line") == len(hyperplanes) == 2
        info["detail"] = f"oracle {list(combo)}, greedy {report.chosen}"


def _consistent(inst, trace):
    obj = rmc_objective(inst)
    for step, value in enumerate(trace.values()):
        prefix = trace.edges[:step]
        assert obj.evaluate(prefix) == obj.pair_cut_value(prefix) == value, (step, prefix)


def test_criterion_08_objective_consistency():
    with criterion(8, "pair-cut value = arrangement value at every greedy step") as info:
        for inst in all_suite_instances():
            if isinstance(inst, PointConfig):
                rmc, _ = build_rmc(inst)
                trace = solve_geometric(inst)[1].trace
                _consistent(rmc, trace)
            elif hasattr(inst, "demands"):
                trace = solve_pcms(inst).trace
                obj = pcms_objective(inst)
                for step, value in enumerate(trace.values()):
                    covered = set().union(*(inst.edges[j] for j in trace.edges[:step]))
                    direct = sum(min(len(g & covered), d) for g, d in zip(inst.ground_sets, inst.demands))
                    assert obj.evaluate(trace.edges[:step]) == direct == value
            else:
                res = solve_rmc(inst)
                _consistent(inst, res.trace)
                assert verify_rmc(inst, res.chosen) == res.violations
        info["detail"] = f"{len(all_suite_instances())} solved instances"


def test_criterion_09_determinism():
    with criterion(9, "naive/lazy and 1/8 threads emit identical bytes") as info:
        instances = all_suite_instances() + [
            parse_instance(p.read_text()) for p in sorted(DATA.glob("*_instance.json"))
        ]
        for inst in instances:
            outputs = {
                emit_solution(solve_instance(inst, mode, threads))
                for mode in ("naive", "lazy")
                for threads in (1, 8)
            }
            assert len(outputs) == 1
        info["detail"] = f"{len(instances)} instances x 4 configurations"


def test_criterion_10_round_trip():
    with criterion(10, "golden files survive emit(parse(F)) byte for byte") as info:
        files = sorted(DATA.glob("*.json"))
        assert files
        for path in files:
            text = path.read_text()
            if path.name.endswith("_solution.json"):
                again = emit_solution(parse_solution(text))
            else:
                again = emit_instance(parse_instance(text))
            assert again == text, path.name
        info["detail"] = f"{len(files)} files"
