"""Brute-force ground truth for small instances.

Nothing here is approximate.  Searches that would exceed the configured
budget refuse with :class:`BudgetExceeded` rather than truncating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .exact_lp import feasible_point
from .geometry import PointConfig
from .greedy import SubmodularObjective

__all__ = [
    "OracleBudget",
    "BudgetExceeded",
    "SubmodularityCheck",
    "exact_min_cover",
    "separable",
    "realizable_subsets",
    "check_submodular",
]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_edges: int = 20
    max_subset_points: int = 14

    def __post_init__(self):
        if self.max_edges < 1 or self.max_subset_points < 1:
            raise ValueError("oracle budgets must be positive")


def exact_min_cover(obj: SubmodularObjective, budget: OracleBudget = OracleBudget()) -> tuple[int, tuple[int, ...]]:
    """Smallest K with f(K) = f(H); the first optimum in (size, lexicographic) order."""
    m = obj.edge_count
    if m > budget.max_edges:
        raise BudgetExceeded(f"{m} edges exceeds the exact-search budget of {budget.max_edges}")
    target = obj.evaluate(range(m))
    for size in range(m + 1):
        for combo in combinations(range(m), size):
            if obj.evaluate(combo) == target:
                return size, combo
    raise AssertionError("the full edge family always reaches f(H)")


def separable(config: PointConfig, subset) -> bool:
    """Strict linear separability of ``subset`` from the other points.

    Decided through the alternative: no (a, b) puts the subset strictly
    positive and the rest strictly negative iff 0 is a convex combination of
    the signed lifted points s_p (p, -1).
    """
    S = set(subset)
    n, d = config.n, config.dim
    if not S or len(S) == n:
        return True
    cols = []
    for j, p in enumerate(config.points):
        s = 1 if j in S else -1
        y = [s * Fraction(x) for x in p] + [Fraction(-s)]
        den = lcm(*(v.denominator for v in y))
        cols.append([int(v * den) for v in y])  # positive rescaling keeps the cone
    A = [[cols[j][i] for j in range(n)] for i in range(d + 1)]
    A.append([1] * n)
    b = [0] * (d + 1) + [1]
    return feasible_point(A, b) is None


def realizable_subsets(config: PointConfig, budget: OracleBudget = OracleBudget()) -> set[frozenset[int]]:
    """Canonical (point 0 excluded) separable subsets, without the empty class."""
    n = config.n
    if n > budget.max_subset_points:
        raise BudgetExceeded(f"{n} points exceeds the subset-scan budget of {budget.max_subset_points}")
    out = set()
    rest = range(1, n)
    for size in range(1, n):
        for combo in combinations(rest, size):
            if separable(config, combo):
                out.add(frozenset(combo))
    return out


@dataclass(frozen=True)
class SubmodularityCheck:
    passed: bool
    trials: int
    counterexample: tuple[frozenset[int], frozenset[int], int] | None = None
    reason: str = ""


def check_submodular(obj: SubmodularObjective, trials: int = 1000, seed: int = 0) -> SubmodularityCheck:
    """Sample chains B ⊆ A ⊆ H - e and test diminishing returns and monotonicity."""
    rng = random.Random(seed)
    m = obj.edge_count
    f_full = obj.evaluate(range(m))
    f_empty = obj.evaluate(())
    if f_empty < 0:
        return SubmodularityCheck(False, 0, (frozenset(), frozenset(), -1), "negative value on the empty set")
    if m == 0:
        return SubmodularityCheck(True, trials)
    for t in range(trials):
        e = rng.randrange(m)
        others = [x for x in range(m) if x != e]
        A = frozenset(x for x in others if rng.random() < rng.random())
        B = frozenset(x for x in A if rng.random() < 0.5)
        fA, fB = obj.evaluate(A), obj.evaluate(B)
        fAe, fBe = obj.evaluate(A | {e}), obj.evaluate(B | {e})
        if not (fB <= fA <= f_full and fA <= fAe):
            return SubmodularityCheck(False, t + 1, (B, A, e), "monotonicity")
        if fBe - fB < fAe - fA:
            return SubmodularityCheck(False, t + 1, (B, A, e), "diminishing returns")
    return SubmodularityCheck(True, trials)
