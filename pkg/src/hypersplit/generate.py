"""Seeded random instances."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .geometry import Group, PointConfig, _det, _rank
from .instances import PCMSInstance, RMCInstance

__all__ = ["TARGET_RULES", "GenerationError", "generate_instance", "generate_pcms", "generate_rmc"]

TARGET_RULES = ("half", "singleton")


class GenerationError(RuntimeError):
    pass


def _target(rule: str, size: int) -> int:
    if rule == "half":
        return -(-size // 2)
    if rule == "singleton":
        return 1
    raise ValueError(f"unknown target rule {rule!r} (choose from {', '.join(TARGET_RULES)})")


def _keeps_general_position(pts: list[tuple[int, ...]], q: tuple[int, ...], d: int) -> bool:
    if q in pts:
        return False
    if len(pts) < d:
        # fewer than d+1 points: require affine independence of the whole set
        rows = [[Fraction(a - b) for a, b in zip(p, q)] for p in pts]
        return not rows or _rank(rows) == len(rows)
    for others in combinations(pts, d):
        M = [[Fraction(a - b) for a, b in zip(p, q)] for p in others]
        if _det(M) == 0:
            return False
    return True


def _assign_groups(rng: random.Random, n: int, m: int) -> list[set[int]]:
    groups: list[set[int]] = [set() for _ in range(m)]
    for j in range(n):
        groups[rng.randrange(m)].add(j)
        if m > 1 and rng.random() < 0.25:
            groups[rng.randrange(m)].add(j)
    for g in groups:
        if not g:
            g.add(rng.randrange(n))
    return groups


def generate_instance(
    seed: int, n: int, d: int, m: int = 1, bound: int = 100, target_rule: str = "half", max_tries: int = 1000
) -> PointConfig:
    """n distinct integer points in [0, bound]^d in general position, split into m groups.

    Every point lands in at least one group; groups may overlap.  A point
    that would break general position is redrawn, up to ``max_tries`` times.
    """
    for name, v in (("n", n), ("d", d), ("m", m), ("bound", bound)):
        if v < 1:
            raise ValueError(f"{name} must be positive")
    _target(target_rule, 1)
    rng = random.Random(seed)
    pts: list[tuple[int, ...]] = []
    for _ in range(n):
        for _attempt in range(max_tries):
            q = tuple(rng.randint(0, bound) for _ in range(d))
            if _keeps_general_position(pts, q, d):
                pts.append(q)
                break
        else:
            raise GenerationError(
                f"no general-position point found after {max_tries} draws; try a larger coordinate bound than {bound}"
            )
    groups = _assign_groups(rng, n, m)
    return PointConfig(
        d,
        pts,
        [Group(f"P{i + 1}", frozenset(g), _target(target_rule, len(g))) for i, g in enumerate(groups)],
    )


def _random_edges(rng: random.Random, n: int, count: int, density: float) -> list[frozenset[int]]:
    return [frozenset(x for x in range(n) if rng.random() < density) for _ in range(count)]


def generate_pcms(seed: int, n: int, edges: int, m: int) -> PCMSInstance:
    """Random PCMS instance; demands are drawn up to each ground set's size."""
    rng = random.Random(seed)
    E = _random_edges(rng, n, edges, rng.uniform(0.15, 0.5))
    ground, demands = [], []
    for _ in range(m):
        g = frozenset(x for x in range(n) if rng.random() < 0.5) or frozenset({rng.randrange(n)})
        ground.append(g)
        demands.append(rng.randint(0, len(g)))
    return PCMSInstance(n, E, ground, demands)


def generate_rmc(seed: int, n: int, edges: int, m: int) -> RMCInstance:
    """Random abstract RMC instance with targets in [1, |G_i|]."""
    rng = random.Random(seed)
    E = _random_edges(rng, n, edges, rng.uniform(0.2, 0.6))
    ground, targets = [], []
    for _ in range(m):
        g = frozenset(x for x in range(n) if rng.random() < 0.6) or frozenset({rng.randrange(n)})
        ground.append(g)
        targets.append(rng.randint(1, len(g)))
    return RMCInstance(n, E, ground, targets)
