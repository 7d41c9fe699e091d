import pytest

from hypersplit.generate import generate_instance, generate_pcms, generate_rmc
from hypersplit.geometry import Group, PointConfig, build_rmc
from hypersplit.greedy import FunctionObjective
from hypersplit.instances import pcms_objective, rmc_objective
from hypersplit.oracle import (
    BudgetExceeded,
    OracleBudget,
    check_submodular,
    exact_min_cover,
    realizable_subsets,
    separable,
)


def toy_cover():
    edges = [{1, 2}, {3}, {2, 3}]
    return FunctionObjective(3, lambda C: len(set().union(*(edges[j] for j in C))) if C else 0)


def test_exact_min_cover_examples():
    assert exact_min_cover(toy_cover()) == (2, (0, 1))
    assert exact_min_cover(FunctionObjective(5, lambda C: 0)) == (0, ())
    line = PointConfig(1, [(0,), (1,), (2,), (3,)], [Group("a", frozenset(range(4)), 1)])
    assert exact_min_cover(rmc_objective(build_rmc(line)[0]))[0] == 3


def test_exact_min_cover_budget():
    obj = FunctionObjective(30, lambda C: len(C))
    with pytest.raises(BudgetExceeded):
        exact_min_cover(obj)
    assert exact_min_cover(FunctionObjective(3, len), OracleBudget(max_edges=3)) == (3, (0, 1, 2))


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        OracleBudget(max_edges=0)


def test_realizable_subsets_examples():
    square = PointConfig(2, [(0, 0), (1, 0), (0, 1), (1, 1)], [Group("a", frozenset(range(4)), 1)])
    assert len(realizable_subsets(square)) == 6
    assert not separable(square, {0, 3})
    assert separable(square, {0, 1})
    tri = PointConfig(2, [(0, 0), (1, 0), (0, 1)], [Group("a", frozenset(range(3)), 1)])
    assert len(realizable_subsets(tri)) == 3
    assert realizable_subsets(PointConfig(2, [(0, 0)], [Group("a", frozenset({0}), 1)])) == set()


def test_realizable_subsets_budget():
    cfg = generate_instance(0, 15, 1, 1, 100)
    with pytest.raises(BudgetExceeded):
        realizable_subsets(cfg)


@pytest.mark.parametrize("seed", range(5))
def test_check_submodular_passes_on_cover_objectives(seed):
    assert check_submodular(pcms_objective(generate_pcms(seed, 8, 10, 3)), 300, seed).passed
    assert check_submodular(rmc_objective(generate_rmc(seed, 7, 8, 2)), 300, seed).passed
    cfg = generate_instance(seed, 6, 2, 2, 30)
    assert check_submodular(rmc_objective(build_rmc(cfg)[0]), 300, seed).passed


def test_check_submodular_catches_supermodular():
    res = check_submodular(FunctionObjective(6, lambda C: len(C) ** 2), trials=200, seed=1)
    assert not res.passed
    B, A, e = res.counterexample
    f = lambda C: len(C) ** 2  # noqa: E731
    assert B <= A and e not in A
    assert f(B | {e}) - f(B) < f(A | {e}) - f(A)


def test_check_submodular_catches_non_monotone():
    res = check_submodular(FunctionObjective(4, lambda C: 3 - len(C)), trials=100, seed=0)
    assert not res.passed and res.reason == "monotonicity"


def test_check_submodular_deterministic():
    obj = FunctionObjective(6, lambda C: len(C) ** 2)
    assert check_submodular(obj, 100, 5) == check_submodular(obj, 100, 5)
