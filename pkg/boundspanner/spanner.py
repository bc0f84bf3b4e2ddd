"""Sequential bounded-degree spanner construction over a Delaunay triangulation.

Edges are examined shortest first. An edge joins the core set ``E`` when both endpoints agree
on it, that is when every closed cone containing it is still free of core edges at both ends.
Each accepted edge then adds ring edges around its endpoints (the wedge set ``E*``) so paths
skipped by the pruning stay short. The spanner is ``E ∪ E*``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from boundspanner.config import CONE_COUNT, CONE_WIDTH, DEFAULT_CONE_TOLERANCE, WedgeReading
from boundspanner.delaunay import (
    Edge,
    Triangulation,
    nearest_neighbor_edge,
    sorted_edges,
)
from boundspanner.geometry import (
    TWO_PI,
    ConeSystem,
    PointSet,
    build_cone_system,
    cones_for_offset,
    is_obtuse,
)


@dataclass(frozen=True)
class VertexCones:
    """Cone system of one vertex with its neighbors sorted into the eight cones."""

    system: ConeSystem
    labels: dict[int, frozenset[int]]
    members: tuple[tuple[int, ...], ...]


class ConeTable:
    """Per-vertex cone systems anchored at each vertex's nearest-neighbor edge."""

    def __init__(self, t: Triangulation, tolerance: float = DEFAULT_CONE_TOLERANCE) -> None:
        self.triangulation = t
        self.tolerance = tolerance
        self._vertices = [self._build(p) for p in range(len(t))]

    def _build(self, p: int) -> VertexCones:
        t = self.triangulation
        q_min = nearest_neighbor_edge(t, p).other(p)
        system = build_cone_system(t.points[p], t.points[q_min])
        labels: dict[int, frozenset[int]] = {}
        placed: list[list[tuple[float, int]]] = [[] for _ in range(CONE_COUNT)]
        for q in t.neighbor_rings[p]:
            offset = system.offset(t.points[q])
            labels[q] = cones_for_offset(offset, self.tolerance)
            for label in labels[q]:
                placed[label - 1].append((_offset_in_cone(offset, label), q))
        members = tuple(tuple(q for _, q in sorted(cone)) for cone in placed)
        return VertexCones(system=system, labels=labels, members=members)

    def __getitem__(self, p: int) -> VertexCones:
        return self._vertices[p]

    def labels(self, p: int, q: int) -> frozenset[int]:
        """Labels of p's cones containing edge ``{p, q}``."""
        return self._vertices[p].labels[q]

    def members(self, p: int, label: int) -> tuple[int, ...]:
        """Neighbors of ``p`` inside cone ``label``, clockwise."""
        return self._vertices[p].members[label - 1]


def _offset_in_cone(offset: float, label: int) -> float:
    """Clockwise offset unwrapped into cone ``label``'s own angular range."""
    middle = (label - 0.5) * CONE_WIDTH
    return min((offset, offset - TWO_PI, offset + TWO_PI), key=lambda v: abs(v - middle))


class ConeOccupancy:
    """Which core edge, if any, occupies each cone of each vertex."""

    def __init__(self, table: ConeTable) -> None:
        self.table = table
        self.slots: list[list[Edge | None]] = [
            [None] * CONE_COUNT for _ in range(len(table.triangulation))
        ]

    def occupant(self, p: int, label: int) -> Edge | None:
        return self.slots[p][label - 1]

    def is_free(self, p: int, e: Edge) -> bool:
        return all(self.slots[p][label - 1] is None for label in self.table.labels(p, e.other(p)))

    def occupy(self, e: Edge) -> None:
        """Record ``e`` in every cone containing it at both endpoints.

        Raises:
            ValueError: If one of those cones already holds a core edge.
        """
        for p in (e.u, e.v):
            for label in self.table.labels(p, e.other(p)):
                held = self.slots[p][label - 1]
                if held is not None and held != e:
                    msg = f"cone {label} of vertex {p} already holds {held.key}, cannot add {e.key}"
                    raise ValueError(msg)
        for p in (e.u, e.v):
            for label in self.table.labels(p, e.other(p)):
                self.slots[p][label - 1] = e


def agrees(p: int, e: Edge, occ: ConeOccupancy) -> bool:
    """True iff every closed cone of ``p`` containing ``e`` is empty of core edges."""
    return occ.is_free(p, e)


@dataclass(frozen=True)
class SpannerGraph:
    """A spanner over ``points``: core edges ``E`` and wedge edges ``E*``."""

    points: PointSet
    core_edges: frozenset[Edge]
    wedge_edges: frozenset[Edge]

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return self.core_edges | self.wedge_edges

    @cached_property
    def adjacency(self) -> list[set[int]]:
        neighbors: list[set[int]] = [set() for _ in range(len(self.points))]
        for e in self.edges:
            neighbors[e.u].add(e.v)
            neighbors[e.v].add(e.u)
        return neighbors

    def degree(self, p: int) -> int:
        return len(self.adjacency[p])

    def canonical_edges(self) -> list[tuple[int, int]]:
        """Final edge set as sorted ``(u, v)`` pairs."""
        return sorted(e.key for e in self.edges)


def same_edges(a: SpannerGraph, b: SpannerGraph) -> bool:
    """Exact equality of the core sets and of the final edge sets."""
    return a.core_edges == b.core_edges and a.edges == b.edges


def wedge(
    p: int,
    q_i: int,
    t: Triangulation,
    table: ConeTable,
    reading: WedgeReading = "literal",
) -> set[Edge]:
    """Ring edges added around ``p`` after ``{p, q_i}`` joins the core set.

    For each cone of ``p`` containing ``{p, q_i}``, with the cone's neighbors ``q_j .. q_k``
    clockwise, the literal reading adds ``{q_m, q_m+1}`` for ``j < m < i-1`` and
    ``i < m < k-1``, plus ``{q_i, q_i±1}`` when that neighbor is not the cone's extreme and the
    angle at ``q_i`` is obtuse. The inclusive reading adds the whole ring path of the cone.
    """
    pts = t.points
    added: set[Edge] = set()

    def link(a: int, b: int) -> None:
        if t.has_edge(a, b):
            added.add(t.edge(a, b))

    for label in table.labels(p, q_i):
        ring = table.members(p, label)
        i = ring.index(q_i)
        last = len(ring) - 1
        if reading == "inclusive":
            for m in range(last):
                link(ring[m], ring[m + 1])
            continue
        for m in range(1, i - 1):
            link(ring[m], ring[m + 1])
        for m in range(i + 1, last - 1):
            link(ring[m], ring[m + 1])
        if i + 1 < last and is_obtuse(pts[q_i], pts[p], pts[ring[i + 1]]):
            link(q_i, ring[i + 1])
        if i - 1 > 0 and is_obtuse(pts[q_i], pts[p], pts[ring[i - 1]]):
            link(q_i, ring[i - 1])
    return added


def bound_spanner(
    t: Triangulation,
    *,
    reading: WedgeReading = "literal",
    tolerance: float = DEFAULT_CONE_TOLERANCE,
    table: ConeTable | None = None,
) -> SpannerGraph:
    """Sequential construction: examine triangulation edges shortest first.

    Agreement is tested against core edges only; wedge edges merge in at the end.
    """
    table = table or ConeTable(t, tolerance)
    occupancy = ConeOccupancy(table)
    core: set[Edge] = set()
    extra: set[Edge] = set()
    for e in sorted_edges(t):
        if agrees(e.u, e, occupancy) and agrees(e.v, e, occupancy):
            occupancy.occupy(e)
            core.add(e)
            extra |= wedge(e.u, e.v, t, table, reading)
            extra |= wedge(e.v, e.u, t, table, reading)
    return SpannerGraph(points=t.points, core_edges=frozenset(core), wedge_edges=frozenset(extra))


@dataclass(frozen=True)
class SpannerStats:
    core: int
    wedge_only: int
    total: int
    max_degree: int
    histogram: dict[int, int]

    def as_dict(self) -> dict[str, object]:
        return {
            "core_edges": self.core,
            "wedge_only_edges": self.wedge_only,
            "edges": self.total,
            "max_degree": self.max_degree,
            "degree_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def spanner_stats(g: SpannerGraph) -> SpannerStats:
    """Edge counts, maximum degree and degree histogram."""
    degrees = [g.degree(p) for p in range(len(g.points))]
    return SpannerStats(
        core=len(g.core_edges),
        wedge_only=len(g.wedge_edges - g.core_edges),
        total=len(g.edges),
        max_degree=max(degrees, default=0),
        histogram=dict(Counter(degrees)),
    )
