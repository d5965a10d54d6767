"""Functional graphs x -> f(x) and their topological certificates.

Connectivity is weak (edge directions ignored). The cyclomatic number is taken on the
simple undirected support: a self-loop counts once and the two arcs of a 2-cycle merge
into one edge. A vertex's degree is in-degree plus out-degree, a self-loop adding 2.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from config import MAX_WIDTH
from core.models import BitString, BooleanFunction
from graphs.union_find import DisjointSet

logger = logging.getLogger(__name__)

DOT_MAX_WIDTH = 10


@dataclass(frozen=True, eq=False)
class FunctionalGraph:
    """Successor array on 2^n vertices: successor[x] = f(x)."""

    n: int
    successor: np.ndarray

    def __post_init__(self) -> None:
        succ = np.array(self.successor, dtype=np.int64)
        size = 1 << self.n
        if succ.shape != (size,):
            raise ValueError(f"successor array needs {size} entries, got {succ.shape}")
        if np.any((succ < 0) | (succ >= size)):
            raise ValueError("successor out of vertex range")
        succ.setflags(write=False)
        object.__setattr__(self, "successor", succ)

    @property
    def vertex_count(self) -> int:
        return 1 << self.n

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.successor, minlength=self.vertex_count)


def build_graph(f: BooleanFunction) -> FunctionalGraph:
    if f.n > MAX_WIDTH:
        raise ValueError(f"graph width capped at {MAX_WIDTH}")
    return FunctionalGraph(f.n, f.truth_table)


def degree_histogram(g: FunctionalGraph) -> dict[int, int]:
    """degree -> number of vertices; every vertex has out-degree 1."""
    degrees = g.in_degree() + 1
    values, counts = np.unique(degrees, return_counts=True)
    return {int(d): int(c) for d, c in zip(values, counts)}


def support_edges(g: FunctionalGraph) -> set[tuple[int, int]]:
    """Edges of the simple undirected support, as (low, high) pairs."""
    x = np.arange(g.vertex_count, dtype=np.int64)
    low = np.minimum(x, g.successor)
    high = np.maximum(x, g.successor)
    return set(zip(low.tolist(), high.tolist()))


def weak_components(g: FunctionalGraph) -> int:
    dsu = DisjointSet(g.vertex_count)
    for x, y in enumerate(g.successor.tolist()):
        dsu.union(x, y)
    return dsu.components


def betti_numbers(g: FunctionalGraph) -> tuple[int, int]:
    """
    (betti0, betti1) of the undirected support.

    betti0 counts weakly connected components; betti1 = E_s - V + betti0.
    """
    betti0 = weak_components(g)
    betti1 = len(support_edges(g)) - g.vertex_count + betti0
    return betti0, betti1


def periodic_mask(g: FunctionalGraph) -> np.ndarray:
    """True for vertices on directed cycles, found by peeling in-degree-0 vertices."""
    indeg = g.in_degree()
    alive = np.ones(g.vertex_count, dtype=bool)
    queue = deque(np.flatnonzero(indeg == 0).tolist())
    succ = g.successor
    while queue:
        v = queue.popleft()
        alive[v] = False
        w = int(succ[v])
        indeg[w] -= 1
        if indeg[w] == 0:
            queue.append(w)
    return alive


def periodic_point_count(g: FunctionalGraph) -> int:
    """Total length of all directed cycles."""
    return int(periodic_mask(g).sum())


def directed_cycles(g: FunctionalGraph) -> list[list[int]]:
    """Every directed cycle, each listed from its smallest vertex."""
    on_cycle = periodic_mask(g)
    seen = np.zeros(g.vertex_count, dtype=bool)
    cycles = []
    for start in np.flatnonzero(on_cycle).tolist():
        if seen[start]:
            continue
        cycle = []
        v = start
        while not seen[v]:
            seen[v] = True
            cycle.append(v)
            v = int(g.successor[v])
        cycles.append(cycle)
    return cycles


def export_dot(
    g: FunctionalGraph,
    labels: Mapping[int, str] | None = None,
    name: str = "f",
) -> str:
    """
    DOT digraph with one node per vertex (labelled by bit string) and one edge per vertex.

    Raises:
        ValueError: If n exceeds the rendering cap
    """
    if g.n > DOT_MAX_WIDTH:
        raise ValueError(f"DOT export supports n <= {DOT_MAX_WIDTH}, got {g.n}")
    labels = labels or {}

    def node(v: int) -> str:
        return f'"{BitString(g.n, v)}"'

    lines = [f'digraph "{name}" {{']
    for v in range(g.vertex_count):
        label = labels.get(v, str(BitString(g.n, v)))
        lines.append(f'  {node(v)} [label="{label}"];')
    for v, w in enumerate(g.successor.tolist()):
        lines.append(f"  {node(v)} -> {node(w)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class TopologyReport:
    """Graph certificates of one function."""

    degree_histogram: dict[int, int]
    betti0: int
    betti1: int
    periodic_points: int
    is_permutation: bool

    @property
    def certificates_consistent(self) -> bool:
        """Permutation <=> degree histogram {2: V} <=> every vertex periodic."""
        total = sum(self.degree_histogram.values())
        degree_says = self.degree_histogram == {2: total}
        periodic_says = self.periodic_points == total
        return self.is_permutation == degree_says == periodic_says

    def as_row(self, function_id: int, label: int) -> dict:
        return {
            "function_id": function_id,
            "label": label,
            "betti0": self.betti0,
            "betti1": self.betti1,
            "periodic_points": self.periodic_points,
            "degree_histogram": json.dumps({str(k): v for k, v in self.degree_histogram.items()}, sort_keys=True),
            "is_permutation": self.is_permutation,
        }


def topology_report(g: FunctionalGraph) -> TopologyReport:
    betti0, betti1 = betti_numbers(g)
    return TopologyReport(
        degree_histogram=degree_histogram(g),
        betti0=betti0,
        betti1=betti1,
        periodic_points=periodic_point_count(g),
        is_permutation=bool(np.all(g.in_degree() == 1)),
    )


@dataclass(frozen=True)
class ThresholdRule:
    """Predict class 1 when value > threshold (direction "above") or <= it ("below")."""

    threshold: float
    direction: str
    accuracy: float
    feature: int = 0

    def predict(self, values: np.ndarray) -> np.ndarray:
        above = np.asarray(values, dtype=float) > self.threshold
        return (above if self.direction == "above" else ~above).astype(np.int64)


def best_threshold(values: Sequence[float], labels: Sequence[int]) -> ThresholdRule:
    """
    Single threshold (either direction) with the highest accuracy.

    Candidates are midpoints between consecutive distinct values plus one below the
    minimum; the first best candidate in ascending order wins.
    """
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    if values.size == 0 or values.shape != labels.shape:
        raise ValueError("values and labels must be non-empty and of equal length")
    distinct = np.unique(values)
    candidates = np.concatenate([[distinct[0] - 1.0], (distinct[:-1] + distinct[1:]) / 2])
    best: ThresholdRule | None = None
    for t in candidates:
        for direction in ("above", "below"):
            rule = ThresholdRule(float(t), direction, 0.0)
            acc = float(np.mean(rule.predict(values) == labels))
            if best is None or acc > best.accuracy:
                best = ThresholdRule(float(t), direction, acc)
    return best


def best_stump(columns: Sequence[Sequence[float]], labels: Sequence[int]) -> ThresholdRule:
    """Best single-feature threshold over several features (axis-aligned stump)."""
    best: ThresholdRule | None = None
    for i, col in enumerate(columns):
        rule = best_threshold(col, labels)
        if best is None or rule.accuracy > best.accuracy:
            best = ThresholdRule(rule.threshold, rule.direction, rule.accuracy, feature=i)
    return best
