"""Delaunay triangulation with clockwise neighbor rings and the global edge order.

Construction is incremental Bowyer-Watson over a ghost-vertex triangle map: each insertion
walks to a conflicting triangle, grows the cavity of triangles whose circumcircle contains the
new point, and fans the cavity boundary to that point. Points are inserted in biased
randomized rounds, each round sorted along a Hilbert curve, so walks stay short.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from boundspanner.geometry import (
    Disk,
    Point,
    PointSet,
    build_cone_system,
    distance,
    incircle_symbolic,
    is_obtuse,
    orient2d,
    squared_distance,
)

if TYPE_CHECKING:
    from collections.abc import Iterator
    from fractions import Fraction

GHOST = -1
_HILBERT_ORDER = 16
_MIN_ROUND = 64

Triangle = tuple[int, int, int]


class DuplicatePointError(ValueError):
    """Two input points share both coordinates."""


class TooFewPointsError(ValueError):
    """A triangulation needs at least two points."""


@dataclass(frozen=True)
class Edge:
    """An undirected triangulation edge, stored with ``u < v``."""

    u: int
    v: int
    length: float = field(compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.u < self.v:
            msg = f"edge endpoints must satisfy 0 <= u < v, got ({self.u}, {self.v})"
            raise ValueError(msg)
        if not self.length > 0:
            msg = f"edge ({self.u}, {self.v}) has non-positive length {self.length}"
            raise ValueError(msg)

    @property
    def key(self) -> tuple[int, int]:
        return self.u, self.v

    def other(self, p: int) -> int:
        """The endpoint that is not ``p``."""
        if p == self.u:
            return self.v
        if p == self.v:
            return self.u
        msg = f"vertex {p} is not an endpoint of {self.key}"
        raise ValueError(msg)

    def __contains__(self, p: object) -> bool:
        return p in (self.u, self.v)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def make_edge(points: PointSet, u: int, v: int) -> Edge:
    a, b = edge_key(u, v)
    return Edge(a, b, distance(points[a], points[b]))


@dataclass(frozen=True)
class Wedge:
    """The fan of triangulation edges at ``apex`` from ``start`` clockwise to ``end``.

    ``members`` lists the ring neighbors from ``start`` to ``end`` inclusive.
    """

    apex: int
    start: int
    end: int
    members: tuple[int, ...]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.members[1:-1]


@dataclass(frozen=True)
class Triangulation:
    """An immutable Delaunay triangulation.

    ``neighbor_rings[p]`` lists p's neighbors in strict clockwise order. Rings of hull vertices
    are open: they start and end at the two hull edges. ``collinear`` marks the degenerate
    case where no triangle exists and the edges form a path.
    """

    points: PointSet
    edges: frozenset[Edge]
    neighbor_rings: tuple[tuple[int, ...], ...]
    triangles: tuple[Triangle, ...]
    hull: frozenset[int]
    collinear: bool = False

    @cached_property
    def _by_key(self) -> dict[tuple[int, int], Edge]:
        return {e.key: e for e in self.edges}

    @cached_property
    def _squared(self) -> dict[tuple[int, int], Fraction]:
        pts = self.points
        return {e.key: squared_distance(pts[e.u], pts[e.v]) for e in self.edges}

    @cached_property
    def _order(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges, key=lambda e: edge_order_key(self.points, e.u, e.v)))

    @cached_property
    def _ranks(self) -> dict[tuple[int, int], int]:
        return {e.key: rank for rank, e in enumerate(self._order)}

    def __len__(self) -> int:
        return len(self.points)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._by_key

    def edge(self, u: int, v: int) -> Edge:
        """The triangulation edge ``{u, v}``.

        Raises:
            KeyError: If ``{u, v}`` is not a triangulation edge.
        """
        return self._by_key[edge_key(u, v)]

    def rank(self, u: int, v: int) -> int:
        """Position of ``{u, v}`` in the global edge order."""
        return self._ranks[edge_key(u, v)]

    def squared_length(self, u: int, v: int) -> Fraction:
        """Exact squared length of triangulation edge ``{u, v}``."""
        return self._squared[edge_key(u, v)]

    def is_open_ring(self, p: int) -> bool:
        return p in self.hull

    def degree(self, p: int) -> int:
        return len(self.neighbor_rings[p])


def edge_order_key(points: PointSet, u: int, v: int) -> tuple[Fraction, int, int]:
    """Global total order: exact squared length, then min id, then max id."""
    a, b = edge_key(u, v)
    return squared_distance(points[a], points[b]), a, b


def _hilbert_keys(xy: np.ndarray) -> np.ndarray:
    side = 1 << _HILBERT_ORDER
    low = xy.min(axis=0)
    span = float((xy.max(axis=0) - low).max()) or 1.0
    grid = np.floor((xy - low) / span * (side - 1)).astype(np.int64)
    x, y = grid[:, 0].copy(), grid[:, 1].copy()
    keys = np.zeros(len(xy), dtype=np.int64)
    s = side >> 1
    while s > 0:
        rx = ((x & s) > 0).astype(np.int64)
        ry = ((y & s) > 0).astype(np.int64)
        keys += s * s * ((3 * rx) ^ ry)
        rotate = ry == 0
        flip = rotate & (rx == 1)
        x[flip] = side - 1 - x[flip]
        y[flip] = side - 1 - y[flip]
        swapped = x[rotate].copy()
        x[rotate] = y[rotate]
        y[rotate] = swapped
        s >>= 1
    return keys


def insertion_order(points: PointSet, seed: int = 0) -> list[int]:
    """Biased randomized insertion order: doubling rounds, each sorted along a Hilbert curve."""
    n = len(points)
    rng = np.random.default_rng(seed)
    shuffled = rng.permutation(n)
    bounds = [n]
    while bounds[-1] > _MIN_ROUND:
        bounds.append(bounds[-1] // 2)
    bounds.append(0)
    bounds.reverse()
    keys = _hilbert_keys(points.array)
    order: list[int] = []
    for low, high in zip(bounds, bounds[1:], strict=False):
        chunk = shuffled[low:high]
        order.extend(int(i) for i in chunk[np.argsort(keys[chunk], kind="stable")])
    return order


def _canonical(tri: Triangle) -> Triangle:
    a, b, c = tri
    if a <= b and a <= c:
        return tri
    if b <= a and b <= c:
        return b, c, a
    return c, a, b


class _Builder:
    """Mutable ghost-vertex triangle map used only during construction.

    ``apex[(u, v)] = w`` records the counterclockwise triangle ``(u, v, w)``. Hull edge
    ``(u, v)`` (interior on its left) is paired with the ghost triangle ``(v, u, GHOST)``.
    """

    def __init__(self, points: PointSet, seed: int) -> None:
        self.points = points.points
        self.apex: dict[tuple[int, int], int] = {}
        self.rng = random.Random(seed)
        self.last: tuple[int, int] = (0, 0)

    def _add(self, a: int, b: int, c: int) -> None:
        self.apex[(a, b)] = c
        self.apex[(b, c)] = a
        self.apex[(c, a)] = b

    def _remove(self, a: int, b: int, c: int) -> None:
        del self.apex[(a, b)]
        del self.apex[(b, c)]
        del self.apex[(c, a)]

    def start(self, a: int, b: int, c: int) -> None:
        if orient2d(self.points[a], self.points[b], self.points[c]) < 0:
            b, c = c, b
        self._add(a, b, c)
        self._add(b, a, GHOST)
        self._add(c, b, GHOST)
        self._add(a, c, GHOST)
        self.last = (a, b)

    def _locate(self, p: Point) -> Triangle:
        """Visibility walk from the last created triangle to one in conflict with ``p``."""
        pts = self.points
        a, b = self.last
        tri = (a, b, self.apex[(a, b)])
        while True:
            shift = self.rng.randrange(3)
            for k in range(3):
                i = (shift + k) % 3
                u, v = tri[i], tri[(i + 1) % 3]
                if orient2d(pts[u], pts[v], p) < 0:
                    w = self.apex[(v, u)]
                    tri = (v, u, w)
                    if w == GHOST:
                        return tri
                    break
            else:
                return tri

    def _in_conflict(self, tri: Triangle, p: Point) -> bool:
        pts = self.points
        if GHOST in tri:
            i = tri.index(GHOST)
            x, y = tri[(i + 1) % 3], tri[(i + 2) % 3]
            side = orient2d(pts[x], pts[y], p)
            if side != 0:
                return side > 0
            return is_obtuse(p, pts[x], pts[y])
        a, b, c = tri
        return incircle_symbolic(pts[a], pts[b], pts[c], p) > 0

    def insert(self, index: int) -> None:
        p = self.points[index]
        first = self._locate(p)
        cavity = {_canonical(first)}
        verdicts: dict[Triangle, bool] = {}
        stack = [first]
        boundary: list[tuple[int, int]] = []
        while stack:
            tri = stack.pop()
            for i in range(3):
                u, v = tri[i], tri[(i + 1) % 3]
                across = (v, u, self.apex[(v, u)])
                key = _canonical(across)
                if key in cavity:
                    continue
                if key not in verdicts:
                    verdicts[key] = self._in_conflict(across, p)
                if verdicts[key]:
                    cavity.add(key)
                    stack.append(across)
                else:
                    boundary.append((u, v))
        for tri in cavity:
            self._remove(*tri)
        for u, v in boundary:
            self._add(u, v, index)
            if GHOST not in (u, v):
                self.last = (u, v)

    def rings(self, n: int) -> tuple[list[tuple[int, ...]], set[int]]:
        successors: list[dict[int, int]] = [{} for _ in range(n)]
        for (u, v), w in self.apex.items():
            if u != GHOST:
                successors[u][v] = w
        rings: list[tuple[int, ...]] = []
        hull: set[int] = set()
        for p, succ in enumerate(successors):
            if GHOST in succ:
                hull.add(p)
                ccw = []
                q = succ[GHOST]
                while q != GHOST:
                    ccw.append(q)
                    q = succ[q]
                rings.append(tuple(reversed(ccw)))
                continue
            # closed rings start at their smallest neighbor
            first = min(succ)
            ccw = []
            q = succ[first]
            while q != first:
                ccw.append(q)
                q = succ[q]
            rings.append((first, *reversed(ccw)))
        return rings, hull

    def triangles(self) -> tuple[Triangle, ...]:
        found = {
            _canonical((u, v, w))
            for (u, v), w in self.apex.items()
            if u != GHOST and v != GHOST and w != GHOST
        }
        return tuple(sorted(found))


def _check_input(points: PointSet) -> None:
    if len(points) < 2:  # noqa: PLR2004
        msg = f"a triangulation needs at least 2 points, got {len(points)}"
        raise TooFewPointsError(msg)
    seen: dict[tuple[float, float], int] = {}
    for p in points:
        first = seen.setdefault((p.x, p.y), p.id)
        if first != p.id:
            msg = f"points {first} and {p.id} coincide at ({p.x}, {p.y})"
            raise DuplicatePointError(msg)


def _collinear_path(points: PointSet) -> Triangulation:
    order = sorted(range(len(points)), key=lambda i: (points[i].x, points[i].y))
    edges = frozenset(make_edge(points, a, b) for a, b in zip(order, order[1:], strict=False))
    neighbors: list[list[int]] = [[] for _ in range(len(points))]
    for a, b in zip(order, order[1:], strict=False):
        neighbors[a].append(b)
        neighbors[b].append(a)
    return Triangulation(
        points=points,
        edges=edges,
        neighbor_rings=tuple(tuple(ring) for ring in neighbors),
        triangles=(),
        hull=frozenset(range(len(points))),
        collinear=True,
    )


def build_delaunay(points: PointSet, seed: int = 0) -> Triangulation:
    """Build the Delaunay triangulation of ``points``.

    Cocircular ties are broken by the index-ordered symbolic perturbation of
    :func:`~boundspanner.geometry.incircle_symbolic`, so the result is unique and does not
    depend on ``seed`` (which only shapes the insertion order).

    Raises:
        TooFewPointsError: If fewer than two points are given.
        DuplicatePointError: If two points coincide.
    """
    _check_input(points)
    order = insertion_order(points, seed)
    a, b = order[0], order[1]
    third = next(
        (i for i, c in enumerate(order[2:], 2) if orient2d(points[a], points[b], points[c])),
        None,
    )
    if third is None:
        return _collinear_path(points)

    builder = _Builder(points, seed)
    builder.start(a, b, order[third])
    for index in order[2:third] + order[third + 1 :]:
        builder.insert(index)

    rings, hull = builder.rings(len(points))
    edges = frozenset(
        make_edge(points, p, q) for p, ring in enumerate(rings) for q in ring if p < q
    )
    return Triangulation(
        points=points,
        edges=edges,
        neighbor_rings=tuple(rings),
        triangles=builder.triangles(),
        hull=frozenset(hull),
    )


def neighbors_cw(t: Triangulation, p: int) -> tuple[int, ...]:
    """Neighbors of ``p`` in strict clockwise order."""
    return t.neighbor_rings[p]


def sorted_edges(t: Triangulation) -> tuple[Edge, ...]:
    """Edges by exact length, ties broken by ``(min id, max id)``."""
    return t._order


def nearest_neighbor_edge(t: Triangulation, p: int) -> Edge:
    """The shortest incident edge of ``p`` under the global edge order."""
    return min((t.edge(p, q) for q in t.neighbor_rings[p]), key=lambda e: t.rank(e.u, e.v))


def clockwise_span(t: Triangulation, apex: int, start: int, end: int) -> float:
    """Clockwise angle swept from ``apex→start`` to ``apex→end``."""
    system = build_cone_system(t.points[apex], t.points[start])
    return system.offset(t.points[end])


def make_wedge(t: Triangulation, apex: int, start: int, end: int) -> Wedge:
    """The wedge at ``apex`` running clockwise from ``start`` to ``end``.

    Raises:
        ValueError: If either end is not a neighbor of ``apex``, the sub-ring would cross the
            exterior of a hull vertex, or the wedge angle is not below π.
    """
    ring = t.neighbor_rings[apex]
    if start not in ring or end not in ring or start == end:
        msg = f"({start}, {end}) do not bound a wedge at {apex}"
        raise ValueError(msg)
    i, j = ring.index(start), ring.index(end)
    if j < i and t.is_open_ring(apex):
        msg = f"wedge ({start}, {end}) at hull vertex {apex} crosses the exterior"
        raise ValueError(msg)
    members = ring[i : j + 1] if i < j else ring[i:] + ring[: j + 1]
    if clockwise_span(t, apex, start, end) >= math.pi:
        msg = f"wedge ({start}, {end}) at {apex} spans at least π"
        raise ValueError(msg)
    return Wedge(apex=apex, start=start, end=end, members=members)


def iter_wedges(t: Triangulation, apex: int, max_span: float = math.pi) -> Iterator[Wedge]:
    """Every wedge at ``apex`` with at least two members and span below ``max_span``."""
    ring = t.neighbor_rings[apex]
    size = len(ring)
    for i, start in enumerate(ring):
        system = build_cone_system(t.points[apex], t.points[start])
        limit = size - i if t.is_open_ring(apex) else size
        for step in range(1, limit):
            end = ring[(i + step) % size]
            if system.offset(t.points[end]) >= min(max_span, math.pi):
                break
            members = tuple(ring[(i + k) % size] for k in range(step + 1))
            yield Wedge(apex=apex, start=start, end=end, members=members)


def wedge_path_length(t: Triangulation, w: Wedge) -> float:
    """Length of the ring path through consecutive wedge members."""
    pts = t.points
    return math.fsum(
        distance(pts[a], pts[b]) for a, b in zip(w.members, w.members[1:], strict=False)
    )


def wedge_members_in_disk(t: Triangulation, w: Wedge) -> bool:
    """Whether every member lies inside or on the disk through apex, start and end."""
    pts = t.points
    if orient2d(pts[w.apex], pts[w.start], pts[w.end]) == 0:
        return True
    disk = Disk(pts[w.apex], pts[w.start], pts[w.end])
    return all(disk.contains(pts[x]) for x in w.interior)
