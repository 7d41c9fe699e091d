"""Greedy cover for monotone, integer-valued submodular set functions.

The greedy driver repeatedly adds the edge with the largest marginal gain
until the objective reaches its value on the whole edge family.  Ties are
broken by the smallest edge index, and the lazy (stale-gain) variant is
guaranteed to reproduce the naive scan exactly.
"""

from __future__ import annotations

import heapq
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

log = logging.getLogger(__name__)

__all__ = [
    "SubmodularObjective",
    "FunctionObjective",
    "GainState",
    "GreedyStep",
    "GreedyTrace",
    "marginal_gain",
    "greedy_cover",
]


class GainState:
    """Mutable greedy state over an objective.

    The default implementation re-evaluates the objective from scratch;
    objectives with cheap incremental updates override it.  ``gain`` must
    not mutate the state, so concurrent calls are safe.
    """

    def __init__(self, objective: "SubmodularObjective", chosen: Iterable[int] = ()):
        self.objective = objective
        self.chosen: set[int] = set(chosen)
        self.value = objective.evaluate(self.chosen)

    def gain(self, e: int) -> int:
        if e in self.chosen:
            return 0
        return self.objective.evaluate(self.chosen | {e}) - self.value

    def add(self, e: int) -> None:
        if e in self.chosen:
            return
        self.chosen.add(e)
        self.value = self.objective.evaluate(self.chosen)

    def copy(self) -> "GainState":
        other = object.__new__(type(self))
        other.objective = self.objective
        other.chosen = set(self.chosen)
        other.value = self.value
        return other


class SubmodularObjective:
    """A monotone submodular function over edges ``0..edge_count-1``.

    Subclasses implement :meth:`evaluate`; they may also override
    :meth:`start` to return an incremental :class:`GainState`.
    """

    edge_count: int

    def evaluate(self, chosen: Iterable[int]) -> int:
        raise NotImplementedError

    @cached_property
    def f_max(self) -> int:
        return self.evaluate(range(self.edge_count))

    def start(self) -> GainState:
        return GainState(self)

    def check_index(self, e: int) -> None:
        if not 0 <= e < self.edge_count:
            raise IndexError(f"edge index {e} out of range [0, {self.edge_count})")


class FunctionObjective(SubmodularObjective):
    """Wrap a plain callable on frozensets of edge indices."""

    def __init__(self, edge_count: int, fn: Callable[[frozenset[int]], int]):
        if edge_count < 0:
            raise ValueError("edge_count must be non-negative")
        self.edge_count = edge_count
        self._fn = fn

    def evaluate(self, chosen: Iterable[int]) -> int:
        return int(self._fn(frozenset(chosen)))


def marginal_gain(obj: SubmodularObjective, current: Iterable[int], e: int) -> int:
    """Return ``f(current + e) - f(current)``; zero when ``e`` is already chosen."""
    obj.check_index(e)
    current = frozenset(current)
    for c in current:
        obj.check_index(c)
    if e in current:
        return 0
    return obj.evaluate(current | {e}) - obj.evaluate(current)


@dataclass(frozen=True)
class GreedyStep:
    edge: int
    gain: int
    deficiency: int


@dataclass
class GreedyTrace:
    """Per-iteration record of a greedy run.

    ``deficiency`` of a step is ``f_max`` minus the objective value after
    that step was taken.
    """

    f_max: int
    initial_value: int
    steps: list[GreedyStep] = field(default_factory=list)

    @property
    def final_value(self) -> int:
        if not self.steps:
            return self.initial_value
        return self.f_max - self.steps[-1].deficiency

    @property
    def edges(self) -> list[int]:
        return [s.edge for s in self.steps]

    def values(self) -> list[int]:
        """Objective values f(C_0), f(C_1), ... along the run."""
        return [self.initial_value] + [self.f_max - s.deficiency for s in self.steps]


def _scan(state: GainState, candidates: Sequence[int], threads: int) -> tuple[int, int]:
    """Best (gain, edge) over candidates; ties go to the smallest index."""
    if threads > 1 and len(candidates) > 1:
        chunk = -(-len(candidates) // threads)
        parts = [candidates[i:i + chunk] for i in range(0, len(candidates), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda part: _scan(state, part, 1), parts))
        return min(results, key=lambda r: (-r[0], r[1]))
    best_gain, best_edge = -1, -1
    for e in candidates:
        g = state.gain(e)
        if g > best_gain:
            best_gain, best_edge = g, e
    return best_gain, best_edge


def greedy_cover(
    obj: SubmodularObjective, mode: str = "lazy", threads: int = 1
) -> tuple[list[int], GreedyTrace]:
    """Run the greedy cover until ``f(C) = f_max``.

    ``mode`` is ``"naive"`` (full gain scan every iteration) or ``"lazy"``
    (priority queue of stale gains).  Both return the same solution and
    trace.  ``threads > 1`` parallelizes gain scans; the selection order is
    fixed, so the output does not depend on scheduling.
    """
    if mode not in ("naive", "lazy"):
        raise ValueError(f"unknown greedy mode {mode!r}")
    state = obj.start()
    f_max = obj.f_max
    trace = GreedyTrace(f_max=f_max, initial_value=state.value)
    solution: list[int] = []

    if mode == "naive":
        remaining = list(range(obj.edge_count))
        while state.value < f_max and remaining:
            gain, e = _scan(state, remaining, threads)
            if gain <= 0:
                break
            state.add(e)
            remaining.remove(e)
            solution.append(e)
            trace.steps.append(GreedyStep(e, gain, f_max - state.value))
            log.debug("step %d: edge %d gain %d deficiency %d", len(solution), e, gain, f_max - state.value)
        return solution, trace

    if state.value >= f_max:
        return solution, trace
    all_edges = list(range(obj.edge_count))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            gains = list(pool.map(state.gain, all_edges))
    else:
        gains = [state.gain(e) for e in all_edges]
    heap = [(-g, e) for e, g in zip(all_edges, gains) if g > 0]
    heapq.heapify(heap)
    while state.value < f_max and heap:
        _, e = heapq.heappop(heap)
        g = state.gain(e)
        if g <= 0:
            continue
        # fresh gain still beats every stale upper bound (index breaks ties)
        if heap and (-g, e) > heap[0]:
            heapq.heappush(heap, (-g, e))
            continue
        state.add(e)
        solution.append(e)
        trace.steps.append(GreedyStep(e, g, f_max - state.value))
        log.debug("step %d: edge %d gain %d deficiency %d", len(solution), e, g, f_max - state.value)
    return solution, trace
