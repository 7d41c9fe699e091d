"""Abstract cover problems and their submodular objectives.

Three problems live here:

* PCMS -- partial cover with several ground sets, each with a demand.
* PTD  -- choose edges so every element's face is no larger than its demand.
* RMC  -- choose edges so every face holds at most ``mu_i`` elements of
  every ground set ``G_i``.

Elements are integers ``0..n-1``; edges are frozensets of elements.  The
objectives work on Python ``int`` bitmasks internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .greedy import GainState, GreedyTrace, SubmodularObjective, greedy_cover

__all__ = [
    "SetSystem",
    "PCMSInstance",
    "PTDInstance",
    "RMCInstance",
    "Violation",
    "CoverResult",
    "arrangement",
    "face_of",
    "cut_of",
    "pair_index",
    "PCMSObjective",
    "RMCObjective",
    "pcms_objective",
    "ptd_to_pcms",
    "ptd_objective",
    "reduce_by_half",
    "rmc_objective",
    "rmc_to_pcms",
    "solve_pcms",
    "solve_ptd",
    "solve_rmc",
    "verify_pcms",
    "verify_ptd",
    "verify_rmc",
]


def _mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def _check_subset(members: frozenset[int], n: int, what: str) -> None:
    for x in members:
        if not 0 <= x < n:
            raise ValueError(f"{what}: element {x} outside universe [0, {n})")


@dataclass(frozen=True)
class SetSystem:
    n: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set must be non-empty")
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        for j, e in enumerate(self.edges):
            _check_subset(e, self.n, f"edges[{j}]")

    def duplicate_edges(self) -> list[tuple[int, int]]:
        """Pairs (first, later) of edges with identical member sets."""
        seen: dict[frozenset[int], int] = {}
        dups = []
        for j, e in enumerate(self.edges):
            if e in seen:
                dups.append((seen[e], j))
            else:
                seen[e] = j
        return dups


@dataclass(frozen=True)
class PCMSInstance:
    n: int
    edges: tuple[frozenset[int], ...]
    ground_sets: tuple[frozenset[int], ...]
    demands: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        object.__setattr__(self, "ground_sets", tuple(frozenset(g) for g in self.ground_sets))
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))
        if self.n < 1:
            raise ValueError("universe must be non-empty")
        if not self.ground_sets:
            raise ValueError("at least one ground set is required")
        if len(self.demands) != len(self.ground_sets):
            raise ValueError("demands must match ground_sets in length")
        for j, e in enumerate(self.edges):
            _check_subset(e, self.n, f"edges[{j}]")
        for i, (g, d) in enumerate(zip(self.ground_sets, self.demands)):
            _check_subset(g, self.n, f"ground_sets[{i}]")
            if not 0 <= d <= len(g):
                raise ValueError(f"ground_sets[{i}]: demand {d} not in [0, {len(g)}]")

    @property
    def m(self) -> int:
        return len(self.ground_sets)


@dataclass(frozen=True)
class PTDInstance:
    system: SetSystem
    demands: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))
        n = self.system.n
        if len(self.demands) != n:
            raise ValueError(f"need one demand per element ({n}), got {len(self.demands)}")
        for v, d in enumerate(self.demands):
            # v always sits in its own face, so d(v) = 0 can never be met
            if not 1 <= d <= n:
                raise ValueError(f"demands[{v}] = {d} not in [1, {n}]")

    @property
    def n(self) -> int:
        return self.system.n


@dataclass(frozen=True)
class RMCInstance:
    n: int
    edges: tuple[frozenset[int], ...]
    ground_sets: tuple[frozenset[int], ...]
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        object.__setattr__(self, "ground_sets", tuple(frozenset(g) for g in self.ground_sets))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.n < 1:
            raise ValueError("universe must be non-empty")
        if not self.ground_sets:
            raise ValueError("at least one ground set is required")
        if len(self.targets) != len(self.ground_sets):
            raise ValueError("targets must match ground_sets in length")
        for j, e in enumerate(self.edges):
            _check_subset(e, self.n, f"edges[{j}]")
        for i, (g, mu) in enumerate(zip(self.ground_sets, self.targets)):
            _check_subset(g, self.n, f"ground_sets[{i}]")
            if not 1 <= mu <= len(g):
                raise ValueError(f"ground_sets[{i}]: target {mu} not in [1, {len(g)}]")

    @property
    def m(self) -> int:
        return len(self.ground_sets)


# -- arrangements -----------------------------------------------------------


def arrangement(ground: int | Iterable[Hashable], edges: Iterable[Iterable[Hashable]]) -> list[frozenset]:
    """Partition ``ground`` by membership pattern in ``edges``.

    ``ground`` is either a size ``n`` (elements ``0..n-1``) or an iterable of
    elements.  Faces come out ordered by their first member in ground order.
    """
    elements = list(range(ground)) if isinstance(ground, int) else list(ground)
    edge_sets = [frozenset(e) for e in edges]
    faces: dict[tuple[bool, ...], list] = {}
    for x in elements:
        faces.setdefault(tuple(x in e for e in edge_sets), []).append(x)
    return [frozenset(f) for f in faces.values()]


def face_of(v: Hashable, ground: int | Iterable[Hashable], edges: Iterable[Iterable[Hashable]]) -> frozenset:
    """The face of the arrangement of ``edges`` containing ``v``."""
    elements = range(ground) if isinstance(ground, int) else list(ground)
    if v not in elements:
        raise IndexError(f"element {v!r} not in ground set")
    edge_sets = [frozenset(e) for e in edges]
    pattern = [v in e for e in edge_sets]
    return frozenset(x for x in elements if [x in e for e in edge_sets] == pattern)


def _faces_mask(n: int, edge_masks: Iterable[int]) -> list[int]:
    faces = [(1 << n) - 1]
    for e in edge_masks:
        split = []
        for f in faces:
            inside = f & e
            if inside and inside != f:
                split.append(inside)
                split.append(f & ~e)
            else:
                split.append(f)
        faces = split
    return faces


# -- cuts and pairs ---------------------------------------------------------


def pair_index(x: int, y: int, n: int) -> int:
    """Index of the unordered pair {x, y} in the row-major list of K_n's edges."""
    if x == y:
        raise ValueError("a pair needs two distinct elements")
    if x > y:
        x, y = y, x
    return x * n - x * (x + 1) // 2 + (y - x - 1)


def cut_of(e: Iterable[int], n: int) -> set[frozenset[int]]:
    """Unordered pairs {x, y} with exactly one endpoint in ``e``."""
    inside = set(e)
    _check_subset(frozenset(inside), n, "cut_of")
    outside = [y for y in range(n) if y not in inside]
    return {frozenset((x, y)) for x in inside for y in outside}


# -- PCMS -------------------------------------------------------------------


class _PCMSState(GainState):
    def __init__(self, obj: "PCMSObjective"):
        self.objective = obj
        self.chosen = set()
        self.union = 0
        self.value = 0

    def gain(self, e: int) -> int:
        if e in self.chosen:
            return 0
        obj = self.objective
        new = self.union | obj.edge_masks[e]
        total = 0
        for g, d in zip(obj.ground_masks, obj.demands):
            total += min((g & new).bit_count(), d)
        return total - self.value

    def add(self, e: int) -> None:
        if e in self.chosen:
            return
        self.value += self.gain(e)
        self.chosen.add(e)
        self.union |= self.objective.edge_masks[e]

    def copy(self) -> "_PCMSState":
        other = _PCMSState(self.objective)
        other.chosen = set(self.chosen)
        other.union = self.union
        other.value = self.value
        return other


class PCMSObjective(SubmodularObjective):
    """Service objective: sum over ground sets of min(|G_i ∩ ∪C|, d(G_i))."""

    def __init__(self, inst: PCMSInstance):
        self.instance = inst
        self.edge_count = len(inst.edges)
        self.edge_masks = [_mask(e) for e in inst.edges]
        self.ground_masks = [_mask(g) for g in inst.ground_sets]
        self.demands = list(inst.demands)

    def services(self, chosen: Iterable[int]) -> list[int]:
        union = 0
        for j in chosen:
            self.check_index(j)
            union |= self.edge_masks[j]
        return [min((g & union).bit_count(), d) for g, d in zip(self.ground_masks, self.demands)]

    def evaluate(self, chosen: Iterable[int]) -> int:
        return sum(self.services(chosen))

    def start(self) -> GainState:
        return _PCMSState(self)


def pcms_objective(inst: PCMSInstance) -> PCMSObjective:
    return PCMSObjective(inst)


@dataclass(frozen=True)
class Violation:
    """One unmet requirement.

    For face constraints (PTD/RMC/geometric) ``members`` is the offending
    face, ``count`` its occupancy in ground set ``group`` and ``limit`` the
    allowed maximum.  For PCMS ``members`` lists the covered elements of the
    ground set, ``count`` their number and ``limit`` the demand.
    """

    group: int
    members: tuple[int, ...]
    count: int
    limit: int


@dataclass
class CoverResult:
    chosen: list[int]
    trace: GreedyTrace
    feasible: bool
    shortfalls: list[int]
    violations: list[Violation] = field(default_factory=list)


def _dedup_order(keys: Sequence) -> list[int]:
    """Indices of the first occurrence of each key, in index order."""
    seen = set()
    keep = []
    for j, k in enumerate(keys):
        if k not in seen:
            seen.add(k)
            keep.append(j)
    return keep


def _remap(trace: GreedyTrace, keep: list[int]) -> GreedyTrace:
    out = GreedyTrace(f_max=trace.f_max, initial_value=trace.initial_value)
    out.steps = [type(s)(keep[s.edge], s.gain, s.deficiency) for s in trace.steps]
    return out


def verify_pcms(inst: PCMSInstance, chosen: Iterable[int]) -> list[Violation]:
    union: set[int] = set()
    for j in chosen:
        if not 0 <= j < len(inst.edges):
            raise IndexError(f"edge index {j} out of range")
        union |= inst.edges[j]
    out = []
    for i, (g, d) in enumerate(zip(inst.ground_sets, inst.demands)):
        covered = tuple(sorted(g & union))
        if len(covered) < d:
            out.append(Violation(i, covered, len(covered), d))
    return out


def solve_pcms(inst: PCMSInstance, mode: str = "lazy", threads: int = 1) -> CoverResult:
    """Greedy PCMS solve.  Identical edges are collapsed before the run."""
    keep = _dedup_order(inst.edges)
    reduced = PCMSInstance(inst.n, [inst.edges[j] for j in keep], inst.ground_sets, inst.demands)
    obj = pcms_objective(reduced)
    sol, trace = greedy_cover(obj, mode=mode, threads=threads)
    chosen = [keep[j] for j in sol]
    services = obj.services(sol)
    shortfalls = [d - s for d, s in zip(inst.demands, services)]
    return CoverResult(
        chosen=chosen,
        trace=_remap(trace, keep),
        feasible=obj.f_max == sum(inst.demands),
        shortfalls=shortfalls,
        violations=verify_pcms(inst, chosen),
    )


# -- PTD --------------------------------------------------------------------


def ptd_to_pcms(inst: PTDInstance) -> PCMSInstance:
    """Pair-cutting reduction.

    The universe is the n(n-1)/2 pairs of K_n (see :func:`pair_index`); the
    ground set of element v is the n-1 pairs through v with demand
    n - d(v); PCMS edge j is the cut of PTD edge j.
    """
    n = inst.n
    ground_sets = []
    for v in range(n):
        ground_sets.append(frozenset(pair_index(v, u, n) for u in range(n) if u != v))
    edges = []
    for e in inst.system.edges:
        edges.append(frozenset(pair_index(x, y, n) for x, y in (tuple(p) for p in cut_of(e, n))))
    demands = [n - d for d in inst.demands]
    return PCMSInstance(max(n * (n - 1) // 2, 1), edges, ground_sets, demands)


def ptd_objective(inst: PTDInstance) -> PCMSObjective:
    return pcms_objective(ptd_to_pcms(inst))


def reduce_by_half(system: SetSystem) -> PTDInstance:
    """Every face must end up with at most floor(n/2) elements."""
    if system.n < 2:
        raise ValueError("reduce-by-half needs at least two elements")
    return PTDInstance(system, [system.n // 2] * system.n)


def verify_ptd(inst: PTDInstance, chosen: Iterable[int]) -> list[Violation]:
    edges = [inst.system.edges[j] for j in chosen]
    out = []
    for face in arrangement(inst.n, edges):
        for v in sorted(face):
            if len(face) > inst.demands[v]:
                out.append(Violation(v, tuple(sorted(face)), len(face), inst.demands[v]))
    return out


def solve_ptd(inst: PTDInstance, mode: str = "lazy", threads: int = 1) -> CoverResult:
    """Solve PTD through the PCMS reduction; shortfalls are per element."""
    res = solve_pcms(ptd_to_pcms(inst), mode=mode, threads=threads)
    res.violations = verify_ptd(inst, res.chosen)
    return res


# -- RMC --------------------------------------------------------------------


class _RMCState(GainState):
    """Faces tracked as bitmasks; only (face, group) cells above target matter.

    For a cell with c = |F ∩ G_i| > mu, splitting it into parts a and b = c - a
    raises the objective by a*(c - max(a, mu)) + b*(c - max(b, mu)).
    """

    def __init__(self, obj: "RMCObjective"):
        self.objective = obj
        self.chosen = set()
        self.faces = [(1 << obj.n) - 1]
        self.value = obj._value_of_faces(self.faces)
        self._refresh()

    def _refresh(self) -> None:
        cells = []
        for f in self.faces:
            for g, mu in zip(self.objective.ground_masks, self.objective.targets):
                cell = f & g
                c = cell.bit_count()
                if c > mu:
                    cells.append((cell, c, mu))
        self.cells = cells

    def gain(self, e: int) -> int:
        if e in self.chosen:
            return 0
        em = self.objective.edge_masks[e]
        total = 0
        for cell, c, mu in self.cells:
            a = (cell & em).bit_count()
            b = c - a
            total += a * (c - max(a, mu)) + b * (c - max(b, mu))
        return total

    def add(self, e: int) -> None:
        if e in self.chosen:
            return
        self.value += self.gain(e)
        self.chosen.add(e)
        em = self.objective.edge_masks[e]
        split = []
        for f in self.faces:
            inside = f & em
            if inside and inside != f:
                split.append(inside)
                split.append(f & ~em)
            else:
                split.append(f)
        self.faces = split
        self._refresh()

    def copy(self) -> "_RMCState":
        other = object.__new__(_RMCState)
        other.objective = self.objective
        other.chosen = set(self.chosen)
        other.faces = list(self.faces)
        other.value = self.value
        other.cells = self.cells
        return other


class RMCObjective(SubmodularObjective):
    """Summed pair-separation objective for RMC.

    For ground set G_i and v in G_i, let sep_i(v, C) be the number of members
    of G_i separated from v by C.  Then

        f(C) = sum_i sum_{v in G_i} min(sep_i(v, C), |G_i| - mu_i)

    which reaches sum_i |G_i| (|G_i| - mu_i) exactly when every face holds
    at most mu_i members of every G_i.  ``evaluate`` recomputes it from the
    arrangement; :meth:`pair_cut_value` counts cut pairs directly.
    """

    def __init__(self, inst: RMCInstance):
        self.instance = inst
        self.n = inst.n
        self.edge_count = len(inst.edges)
        self.edge_masks = [_mask(e) for e in inst.edges]
        self.ground_masks = [_mask(g) for g in inst.ground_sets]
        self.targets = list(inst.targets)

    def _value_of_faces(self, faces: Iterable[int]) -> int:
        total = 0
        for f in faces:
            for g, mu in zip(self.ground_masks, self.targets):
                c = (f & g).bit_count()
                total += c * (g.bit_count() - max(c, mu))
        return total

    @property
    def cap_total(self) -> int:
        """Objective value of any valid solution."""
        return sum(g.bit_count() * (g.bit_count() - mu) for g, mu in zip(self.ground_masks, self.targets))

    def evaluate(self, chosen: Iterable[int]) -> int:
        masks = []
        for j in chosen:
            self.check_index(j)
            masks.append(self.edge_masks[j])
        return self._value_of_faces(_faces_mask(self.n, masks))

    def pair_cut_value(self, chosen: Iterable[int]) -> int:
        """Same value, counted through the pair-cut PCMS reduction."""
        return pcms_objective(rmc_to_pcms(self.instance)).evaluate(chosen)

    def start(self) -> GainState:
        return _RMCState(self)


def rmc_objective(inst: RMCInstance) -> RMCObjective:
    return RMCObjective(inst)


def rmc_to_pcms(inst: RMCInstance) -> PCMSInstance:
    """RMC as parallel pair-cutting covers, one PTD per ground set.

    Ground set (i, v) for v in G_i holds the pairs {v, u}, u in G_i - v, with
    demand |G_i| - mu_i.  Edges are cuts, index-aligned with ``inst.edges``.
    """
    n = inst.n
    ground_sets, demands = [], []
    for g, mu in zip(inst.ground_sets, inst.targets):
        for v in sorted(g):
            ground_sets.append(frozenset(pair_index(v, u, n) for u in g if u != v))
            demands.append(len(g) - mu)
    edges = [frozenset(pair_index(*sorted(p), n) for p in cut_of(e, n)) for e in inst.edges]
    return PCMSInstance(max(n * (n - 1) // 2, 1), edges, ground_sets, demands)


def verify_rmc(inst: RMCInstance, chosen: Iterable[int]) -> list[Violation]:
    """Every (face, ground set) whose occupancy exceeds the target."""
    edges = []
    for j in chosen:
        if not 0 <= j < len(inst.edges):
            raise IndexError(f"edge index {j} out of range")
        edges.append(inst.edges[j])
    out = []
    for face in arrangement(inst.n, edges):
        for i, (g, mu) in enumerate(zip(inst.ground_sets, inst.targets)):
            c = len(face & g)
            if c > mu:
                out.append(Violation(i, tuple(sorted(face)), c, mu))
    return out


def max_occupancy(inst: RMCInstance, chosen: Iterable[int]) -> list[int]:
    """Largest |face ∩ G_i| per ground set under ``chosen``."""
    faces = arrangement(inst.n, [inst.edges[j] for j in chosen])
    return [max(len(f & g) for f in faces) for g in inst.ground_sets]


def _cut_key(e: frozenset[int], n: int) -> frozenset[int]:
    # an edge and its complement induce the same split
    return e if 0 not in e else frozenset(range(n)) - e


def solve_rmc(inst: RMCInstance, mode: str = "lazy", threads: int = 1) -> CoverResult:
    """Greedy RMC solve; duplicate and complementary edges are collapsed first.

    Shortfalls are, per ground set, how far the largest face occupancy
    exceeds its target (0 when met).
    """
    keep = _dedup_order([_cut_key(e, inst.n) for e in inst.edges])
    reduced = RMCInstance(inst.n, [inst.edges[j] for j in keep], inst.ground_sets, inst.targets)
    obj = rmc_objective(reduced)
    sol, trace = greedy_cover(obj, mode=mode, threads=threads)
    chosen = [keep[j] for j in sol]
    occ = max_occupancy(inst, chosen)
    return CoverResult(
        chosen=chosen,
        trace=_remap(trace, keep),
        feasible=obj.f_max == obj.cap_total,
        shortfalls=[max(0, o - mu) for o, mu in zip(occ, inst.targets)],
        violations=verify_rmc(inst, chosen),
    )

