"""Exact geometric front end: point sets, halfspace enumeration, witnesses.

Everything in this module uses ``fractions.Fraction``; there is no floating
point.  The positive side of a hyperplane ``(a, b)`` is ``{x : a.x > b}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from .exact_lp import feasible_point
from .greedy import GreedyTrace
from .instances import RMCInstance, Violation, solve_rmc

__all__ = [
    "Group",
    "PointConfig",
    "Hyperplane",
    "CanonicalHalfspace",
    "DegenerateInputError",
    "NonRealizableError",
    "OnHyperplaneError",
    "SolutionReport",
    "side_sign",
    "check_general_position",
    "canonical_key",
    "enumerate_halfspaces",
    "witness_for_subset",
    "build_rmc",
    "solve_geometric",
    "verify_partition",
    "sign_vector_faces",
]

Point = tuple[Fraction, ...]

log = logging.getLogger(__name__)


class DegenerateInputError(ValueError):
    """Input points are not in general position."""

    def __init__(self, subset: Sequence[int]):
        self.subset = tuple(subset)
        super().__init__(f"points {list(self.subset)} lie on a common hyperplane")


class NonRealizableError(ValueError):
    pass


class OnHyperplaneError(ValueError):
    pass


@dataclass(frozen=True)
class Group:
    name: str
    members: frozenset[int]
    mu: int


@dataclass(frozen=True)
class PointConfig:
    dim: int
    points: tuple[Point, ...]
    groups: tuple[Group, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        pts = tuple(tuple(Fraction(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        groups = tuple(Group(g.name, frozenset(g.members), int(g.mu)) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        for j, p in enumerate(pts):
            if len(p) != self.dim:
                raise ValueError(f"points[{j}] has {len(p)} coordinates, expected {self.dim}")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        if not groups:
            raise ValueError("at least one group is required")
        covered: set[int] = set()
        for i, g in enumerate(groups):
            for x in g.members:
                if not 0 <= x < len(pts):
                    raise ValueError(f"groups[{i}] ({g.name}): index {x} out of range")
            if not 1 <= g.mu <= len(g.members):
                raise ValueError(f"groups[{i}] ({g.name}): mu {g.mu} not in [1, {len(g.members)}]")
            covered |= g.members
        missing = set(range(len(pts))) - covered
        if missing:
            raise ValueError(f"points {sorted(missing)} belong to no group")

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(Fraction(c) for c in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not any(self.normal):
            raise ValueError("hyperplane normal must be non-zero")

    def normalized(self) -> "Hyperplane":
        """Coprime integer coefficients, first non-zero normal entry positive.

        The sign flip swaps the two sides, so callers must re-read sides.
        """
        coeffs = list(self.normal) + [self.offset]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        lead = next(v for v in ints[:-1] if v)
        if lead < 0:
            g = -g
        ints = [v // g for v in ints]
        return Hyperplane(tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1]))


def side_sign(h: Hyperplane, p: Sequence) -> int:
    """Exact sign of a.p - b."""
    if len(p) != len(h.normal):
        raise ValueError(f"dimension mismatch: point has {len(p)} coordinates, hyperplane {len(h.normal)}")
    v = sum((a * Fraction(x) for a, x in zip(h.normal, p)), Fraction(0)) - h.offset
    return (v > 0) - (v < 0)


def _det(M: list[list[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    k = len(M)
    det = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, k):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, k):
                    M[r][j] -= f * M[c][j]
    return det


def _rank(M: list[list[Fraction]]) -> int:
    M = [row[:] for row in M]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def _solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a non-singular square system exactly."""
    k = len(M)
    A = [M[i][:] + [rhs[i]] for i in range(k)]
    for c in range(k):
        piv = next(r for r in range(c, k) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for r in range(k):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[i][k] for i in range(k)]


def check_general_position(config: PointConfig) -> tuple[bool, tuple[int, ...] | None]:
    """No d+1 points on a common hyperplane.

    With n <= d the points must instead be affinely independent.  On failure
    the first offending subset (lexicographic) is returned.
    """
    d, pts = config.dim, config.points
    n = len(pts)
    if n <= d:
        if n <= 1:
            return True, None
        diffs = [[x - y for x, y in zip(p, pts[0])] for p in pts[1:]]
        if _rank(diffs) < n - 1:
            return False, tuple(range(n))
        return True, None
    for idx in combinations(range(n), d + 1):
        base = pts[idx[0]]
        M = [[x - y for x, y in zip(pts[j], base)] for j in idx[1:]]
        if _det(M) == 0:
            return False, idx
    return True, None


def canonical_key(subset: Iterable[int], n: int) -> str:
    """Bit string of whichever of subset/complement is lexicographically smaller."""
    s = set(subset)
    bits = "".join("1" if i in s else "0" for i in range(n))
    comp = "".join("0" if c == "1" else "1" for c in bits)
    return min(bits, comp)


@dataclass(frozen=True)
class CanonicalHalfspace:
    subset: frozenset[int]
    key: str
    witness: Hyperplane
    defining: tuple[int, ...] = ()
    sides: tuple[int, ...] = ()


def _positive_side(h: Hyperplane, pts: Sequence[Point]) -> frozenset[int] | None:
    """Indices strictly positive; ``None`` if any point is on the hyperplane."""
    out = set()
    for j, p in enumerate(pts):
        s = side_sign(h, p)
        if s == 0:
            return None
        if s > 0:
            out.add(j)
    return frozenset(out)


def _through(points: Sequence[Point]) -> tuple[list[Fraction], Fraction]:
    """Normal and offset of the hyperplane through d affinely independent points."""
    d = len(points[0])
    # null vector of rows [p, -1]: drop one column at a time (generalized cross product)
    rows = [list(p) + [Fraction(-1)] for p in points]
    z = []
    for c in range(d + 1):
        minor = [[r[j] for j in range(d + 1) if j != c] for r in rows]
        z.append((-1) ** c * _det(minor))
    return z[:d], z[d]


def _nudged(points: Sequence[Point], T: Sequence[int], signs: Sequence[int]) -> Hyperplane:
    """Hyperplane through T, tilted so T's points land on the requested sides."""
    d = len(points[0])
    tpts = [points[j] for j in T]
    a0, b0 = _through(tpts)
    # tilt direction (da, db): da.t - db = sign for t in T, and orthogonal to (a0, b0)
    M = [list(t) + [Fraction(-1)] for t in tpts] + [list(a0) + [b0]]
    delta = _solve(M, [Fraction(s) for s in signs] + [Fraction(0)])
    da, db = delta[:d], delta[d]
    eps = Fraction(1)
    Tset = set(T)
    for j, p in enumerate(points):
        if j in Tset:
            continue
        v = sum((a * x for a, x in zip(a0, p)), Fraction(0)) - b0
        w = sum((a * x for a, x in zip(da, p)), Fraction(0)) - db
        if w:
            eps = min(eps, abs(v) / (2 * abs(w)))
    normal = [a + eps * x for a, x in zip(a0, da)]
    return Hyperplane(tuple(normal), b0 + eps * db)


def _canonical(config: PointConfig, h: Hyperplane, T: tuple[int, ...], sides: tuple[int, ...]) -> CanonicalHalfspace:
    h = h.normalized()
    S = _positive_side(h, config.points)
    if S is None:
        raise AssertionError("witness touches a point")  # construction bug, never input-driven
    return CanonicalHalfspace(S, canonical_key(S, config.n), h, T, sides)


def enumerate_halfspaces(config: PointConfig) -> list[CanonicalHalfspace]:
    """All combinatorially distinct non-trivial halfspaces, up to complement.

    For n > d every class is reached by a hyperplane through d points, tilted
    by one of the 2^d side assignments of those points.  Output is sorted by
    canonical key.
    """
    ok, bad = check_general_position(config)
    if not ok:
        raise DegenerateInputError(bad)
    n, d = config.n, config.dim
    found: dict[str, CanonicalHalfspace] = {}
    full = "1" * n
    if n <= d:
        for bits in product((0, 1), repeat=n):
            S = frozenset(j for j, b in enumerate(bits) if b)
            key = canonical_key(S, n)
            if key in found or key.count("1") == 0 or key == full:
                continue
            h = witness_for_subset(config, S)
            found[key] = _canonical(config, h, (), ())
        return [found[k] for k in sorted(found)]
    pts = config.points
    for T in combinations(range(n), d):
        a0, b0 = _through([pts[j] for j in T])
        positive = set()
        for j, p in enumerate(pts):
            if j not in T and sum((a * x for a, x in zip(a0, p)), Fraction(0)) > b0:
                positive.add(j)
        for signs in product((-1, 1), repeat=d):
            S = positive | {t for t, s in zip(T, signs) if s > 0}
            key = canonical_key(S, n)
            if key in found or "1" not in key:
                continue
            hs = _canonical(config, _nudged(pts, T, signs), T, signs)
            if hs.key != key:
                raise AssertionError("tilted witness disagrees with its subset")
            found[key] = hs
    return [found[k] for k in sorted(found)]


def witness_for_subset(config: PointConfig, subset: Iterable[int]) -> Hyperplane:
    """Exact hyperplane with ``subset`` strictly positive and the rest strictly negative.

    Solves a.p - b >= 1 on the subset and <= -1 elsewhere; raises
    :class:`NonRealizableError` if no such hyperplane exists.
    """
    S = frozenset(subset)
    n, d = config.n, config.dim
    for j in S:
        if not 0 <= j < n:
            raise IndexError(f"point index {j} out of range")
    if not S or len(S) == n:
        raise NonRealizableError("the empty and full subsets have no strict witness with a non-zero normal")
    # variables: u (d+1), w (d+1) with z = u - w = (a, b); slack t_p >= 0
    width = 2 * (d + 1) + n
    A, rhs = [], []
    for j, p in enumerate(config.points):
        s = 1 if j in S else -1
        y = [s * x for x in p] + [Fraction(-s)]
        row = y + [-v for v in y] + [Fraction(0)] * n
        row[2 * (d + 1) + j] = Fraction(-1)
        A.append(row)
        rhs.append(Fraction(1))
    x = feasible_point(A, rhs)
    if x is None:
        raise NonRealizableError(f"subset {sorted(S)} is not linearly separable")
    z = [x[i] - x[d + 1 + i] for i in range(d + 1)]
    assert len(x) == width
    h = Hyperplane(tuple(z[:d]), z[d])
    if _positive_side(h, config.points) != S:
        raise AssertionError("witness failed exact re-verification")
    return h


def build_rmc(config: PointConfig) -> tuple[RMCInstance, list[CanonicalHalfspace]]:
    halfspaces = enumerate_halfspaces(config)
    log.info("%d points in R^%d: %d canonical halfspaces", config.n, config.dim, len(halfspaces))
    inst = RMCInstance(
        config.n,
        [h.subset for h in halfspaces],
        [g.members for g in config.groups],
        [g.mu for g in config.groups],
    )
    return inst, halfspaces


def sign_vector_faces(config: PointConfig, hyperplanes: Sequence[Hyperplane]) -> list[tuple[int, ...]]:
    """Group points by sign vector; faces ordered by smallest member."""
    faces: dict[tuple[int, ...], list[int]] = {}
    for j, p in enumerate(config.points):
        vec = []
        for k, h in enumerate(hyperplanes):
            s = side_sign(h, p)
            if s == 0:
                raise OnHyperplaneError(f"point {j} lies on hyperplane {k}")
            vec.append(s)
        faces.setdefault(tuple(vec), []).append(j)
    return [tuple(f) for f in faces.values()]


def verify_partition(config: PointConfig, hyperplanes: Sequence[Hyperplane]) -> list[Violation]:
    """Every (face, group) pair whose count exceeds the group's target."""
    out = []
    for face in sign_vector_faces(config, hyperplanes):
        fs = set(face)
        for i, g in enumerate(config.groups):
            c = len(fs & g.members)
            if c > g.mu:
                out.append(Violation(i, face, c, g.mu))
    return out


@dataclass
class SolutionReport:
    chosen: list[int]
    hyperplanes: list[Hyperplane]
    trace: GreedyTrace
    feasible: bool
    shortfalls: list[int]
    violations: list[Violation] = field(default_factory=list)
    halfspaces: list[CanonicalHalfspace] = field(default_factory=list)


def solve_geometric(config: PointConfig, mode: str = "lazy", threads: int = 1) -> tuple[list[Hyperplane], SolutionReport]:
    inst, halfspaces = build_rmc(config)
    res = solve_rmc(inst, mode=mode, threads=threads)
    hyperplanes = [halfspaces[j].witness for j in res.chosen]
    report = SolutionReport(
        chosen=res.chosen,
        hyperplanes=hyperplanes,
        trace=res.trace,
        feasible=res.feasible,
        shortfalls=res.shortfalls,
        violations=verify_partition(config, hyperplanes),
        halfspaces=halfspaces,
    )
    return hyperplanes, report
