"""Independent checks of a constructed spanner against its triangulation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Any, Protocol

import networkx as nx
import numpy as np

from boundspanner.config import (
    CONE_COUNT,
    DEFAULT_MAX_SOURCES,
    MAX_DEGREE,
    STRETCH_BOUND,
    Tolerances,
)
from boundspanner.delaunay import Edge, Triangulation, nearest_neighbor_edge
from boundspanner.lemmas import LemmaResult, lemma_suite
from boundspanner.spanner import ConeOccupancy, ConeTable, SpannerGraph

if TYPE_CHECKING:
    from collections.abc import Iterable

    from boundspanner.geometry import PointSet


class VerificationFailure(RuntimeError):
    """Raised by the pipeline when a verification record fails."""

    def __init__(self, message: str, record: dict[str, Any]) -> None:
        super().__init__(message)
        self.record = record


class EdgeGraph(Protocol):
    """Anything with points and a set of length-carrying edges."""

    @property
    def points(self) -> PointSet: ...

    @property
    def edges(self) -> frozenset[Edge]: ...


def to_networkx(points: PointSet, edges: Iterable[Edge]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))
    graph.add_weighted_edges_from((e.u, e.v, e.length) for e in edges)
    return graph


@dataclass
class StructureCheck:
    """Degree, subgraph and connectivity findings."""

    max_degree: int
    connected: bool
    offending_vertices: list[int] = field(default_factory=list)
    offending_edges: list[tuple[int, int]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_structure(g: SpannerGraph, t: Triangulation) -> StructureCheck:
    """Maximum degree ≤ 7, every edge a triangulation edge, connected like the triangulation."""
    degrees = [g.degree(p) for p in range(len(g.points))]
    check = StructureCheck(
        max_degree=max(degrees, default=0),
        connected=nx.is_connected(to_networkx(g.points, g.edges)) if len(g.points) else True,
    )
    for p, degree in enumerate(degrees):
        if degree > MAX_DEGREE:
            check.offending_vertices.append(p)
            check.violations.append(f"vertex {p} has degree {degree} > {MAX_DEGREE}")
    for e in sorted(g.edges, key=lambda e: e.key):
        if not t.has_edge(e.u, e.v):
            check.offending_edges.append(e.key)
            check.violations.append(f"edge {e.u}-{e.v} is not a Delaunay edge")
    if not check.connected:
        check.violations.append("spanner is disconnected")
    return check


def shortest_path_lengths(g: EdgeGraph, sources: Iterable[int]) -> dict[int, np.ndarray]:
    """Single-source Dijkstra distances from each source; unreachable targets are +∞."""
    graph = to_networkx(g.points, g.edges)
    n = len(g.points)
    table: dict[int, np.ndarray] = {}
    for source in sources:
        row = np.full(n, np.inf)
        for target, length in nx.single_source_dijkstra_path_length(graph, source).items():
            row[target] = length
        table[source] = row
    return table


@dataclass(frozen=True)
class EdgeStretch:
    max_ratio: float
    witness: tuple[int, int] | None
    violations: int


def per_edge_stretch(
    g: SpannerGraph,
    t: Triangulation,
    *,
    bound: float = STRETCH_BOUND,
    tolerance: float = Tolerances().relative,
) -> EdgeStretch:
    """Worst ratio ``δ_G(p, q) / |pq|`` over triangulation edges ``{p, q}``."""
    graph = to_networkx(g.points, g.edges)
    limit = bound * (1 + tolerance)
    worst, witness, violations = 1.0, None, 0
    for p in range(len(t)):
        targets = [t.edge(p, q) for q in t.neighbor_rings[p] if p < q]
        if not targets:
            continue
        cutoff = limit * max(e.length for e in targets)
        reached = nx.single_source_dijkstra_path_length(graph, p, cutoff=cutoff)
        for e in targets:
            q = e.other(p)
            length = reached.get(q)
            if length is None:
                try:
                    length = nx.dijkstra_path_length(graph, p, q)
                except nx.NetworkXNoPath:
                    length = math.inf
            ratio = length / e.length
            if ratio > limit:
                violations += 1
            if witness is None or ratio > worst:
                worst, witness = max(worst, ratio), e.key
    return EdgeStretch(max_ratio=worst, witness=witness, violations=violations)


@dataclass(frozen=True)
class SpannerRatios:
    global_ratio: float
    dt_ratio: float
    sampled: bool
    sources: int

    def within(self, bound: float = STRETCH_BOUND, tolerance: float = 1e-9) -> bool:
        return self.global_ratio <= bound * self.dt_ratio * (1 + tolerance)


def _worst_ratio(graph: nx.Graph, xy: np.ndarray, sources: Iterable[int]) -> float:
    worst = 1.0
    for source in sources:
        row = np.full(len(xy), np.inf)
        for target, length in nx.single_source_dijkstra_path_length(graph, source).items():
            row[target] = length
        euclid = np.hypot(*(xy - xy[source]).T)
        mask = euclid > 0
        if mask.any():
            worst = max(worst, float(np.max(row[mask] / euclid[mask])))
    return worst


def spanner_ratios(
    g: SpannerGraph,
    t: Triangulation,
    points: PointSet | None = None,
    *,
    max_sources: int = DEFAULT_MAX_SOURCES,
    seed: int = 0,
) -> SpannerRatios:
    """Global spanning ratio of ``g`` and of the triangulation, over the same sources.

    All vertices are sources up to ``max_sources``; above that a uniform sample is used.
    """
    points = points or t.points
    n = len(points)
    if n <= max_sources:
        sources = list(range(n))
    else:
        rng = np.random.default_rng(seed)
        sources = sorted(int(s) for s in rng.choice(n, size=max_sources, replace=False))
    xy = points.array
    return SpannerRatios(
        global_ratio=_worst_ratio(to_networkx(points, g.edges), xy, sources),
        dt_ratio=_worst_ratio(to_networkx(points, t.edges), xy, sources),
        sampled=n > max_sources,
        sources=len(sources),
    )


@dataclass(frozen=True)
class StrongDiagnostic:
    holds: bool
    worst_ratio: float
    witness: tuple[int, int] | None


def strong_spanner_diagnostic(
    g: SpannerGraph, t: Triangulation, *, stretch: float = STRETCH_BOUND
) -> StrongDiagnostic:
    """Whether every triangulation edge ``{p, q}`` has a path in ``g`` of length at most
    ``stretch·|pq|`` using only edges no longer than ``|pq|``. Diagnostic only."""
    graph = to_networkx(g.points, g.edges)
    worst, witness = 1.0, None
    for e in sorted(t.edges, key=lambda e: e.key):
        limit = e.length

        def short_only(_u: int, _v: int, data: dict[str, float], limit: float = limit) -> Any:
            return data["weight"] if data["weight"] <= limit else None

        try:
            length = nx.dijkstra_path_length(graph, e.u, e.v, weight=short_only)
        except nx.NetworkXNoPath:
            length = math.inf
        ratio = length / e.length
        if ratio > worst:
            worst, witness = ratio, e.key
    return StrongDiagnostic(holds=worst <= stretch, worst_ratio=worst, witness=witness)


def check_first_edges(g: SpannerGraph, t: Triangulation) -> list[tuple[int, int]]:
    """Nearest-neighbor edges missing from the core set."""
    missing = {
        nearest_neighbor_edge(t, p).key
        for p in range(len(t))
        if nearest_neighbor_edge(t, p) not in g.core_edges
    }
    return sorted(missing)


def check_shortest_property(
    g: SpannerGraph, t: Triangulation, table: ConeTable
) -> list[tuple[int, int, int, int]]:
    """Violations of: for accepted ``{s, r}`` and any ``{s, p}`` in the same cone of ``s``, every
    neighbor ``x`` strictly between them satisfies ``|sx| ≥ min(|sr|, |sp|)`` (exact).

    Returns:
        ``(s, r, p, x)`` for each violation.
    """
    violations = []
    for e in g.core_edges:
        for s in (e.u, e.v):
            r = e.other(s)
            for label in table.labels(s, r):
                cone = table.members(s, label)
                i = cone.index(r)
                for j, p in enumerate(cone):
                    low, high = min(i, j), max(i, j)
                    floor = min(t.squared_length(s, r), t.squared_length(s, p))
                    violations.extend(
                        (s, r, p, x)
                        for x in cone[low + 1 : high]
                        if t.squared_length(s, x) < floor
                    )
    return sorted(set(violations))


def charging_diagnostic(g: SpannerGraph, t: Triangulation, table: ConeTable) -> list[int]:
    """Vertices whose wedge-only edges outnumber their cones free of core edges."""
    occupancy = ConeOccupancy(table)
    for e in sorted(g.core_edges, key=lambda e: t.rank(e.u, e.v)):
        occupancy.occupy(e)
    extra_degree = [0] * len(t)
    for e in g.wedge_edges - g.core_edges:
        extra_degree[e.u] += 1
        extra_degree[e.v] += 1
    return [
        p
        for p in range(len(t))
        if extra_degree[p]
        > sum(occupancy.occupant(p, label) is None for label in range(1, CONE_COUNT + 1))
    ]


@dataclass
class VerificationReport:
    """Everything measured about one spanner; ``passed`` covers the asserted properties."""

    n: int
    edges: int
    collinear: bool
    max_degree: int
    per_edge_stretch_max: float
    per_edge_witness: tuple[int, int] | None
    global_spanner_ratio: float
    dt_spanner_ratio: float
    ratios_sampled: bool
    ratio_sources: int
    strong_spanner_diagnostic: bool
    strong_worst_ratio: float
    structure_violations: list[str]
    first_edge_missing: list[tuple[int, int]]
    shortest_violations: int
    charging_exceptions: list[int]
    tolerance: float
    lemma_suite: list[LemmaResult] = field(default_factory=list)
    identity: bool | None = None
    simulation: dict[str, int] | None = None
    wedge_reading: str = "literal"

    def failures(self) -> list[str]:
        """Human-readable reasons the report fails; empty when it passes."""
        reasons = list(self.structure_violations)
        if self.per_edge_stretch_max > STRETCH_BOUND * (1 + self.tolerance):
            reasons.append(
                f"per-edge stretch {self.per_edge_stretch_max:.10f} exceeds {STRETCH_BOUND:.10f}"
                f" at edge {self.per_edge_witness}"
            )
        global_limit = STRETCH_BOUND * self.dt_spanner_ratio * (1 + self.tolerance)
        if self.global_spanner_ratio > global_limit:
            reasons.append(
                f"global ratio {self.global_spanner_ratio:.10f} exceeds (1+√2)²·δ ="
                f" {global_limit:.10f}"
            )
        if self.first_edge_missing:
            reasons.append(f"nearest-neighbor edges not in E: {self.first_edge_missing[:5]}")
        if self.shortest_violations:
            reasons.append(f"{self.shortest_violations} shortest-edge property violations")
        reasons.extend(
            f"lemma {result.name}: worst margin {result.worst_margin:.3e}"
            for result in self.lemma_suite
            if not result.passed
        )
        if self.identity is False:
            reasons.append("sequential and distributed edge sets differ")
        if self.simulation and self.simulation.get("candidate_misses"):
            reasons.append(
                f"{self.simulation['candidate_misses']} accepted edges missing from candidate lists"
            )
        return reasons

    @property
    def passed(self) -> bool:
        return not self.failures()

    def as_dict(self) -> dict[str, Any]:
        """JSON-ready record; ``pass`` and ``failures`` are derived at call time."""
        record = asdict(self)
        record["per_edge_witness"] = list(self.per_edge_witness) if self.per_edge_witness else None
        record["first_edge_missing"] = [list(key) for key in self.first_edge_missing]
        record["lemma_suite"] = [result.as_dict() for result in self.lemma_suite]
        record["pass"] = self.passed
        record["failures"] = self.failures()
        return record


def verify_spanner(
    g: SpannerGraph,
    t: Triangulation,
    *,
    tolerances: Tolerances | None = None,
    table: ConeTable | None = None,
    max_sources: int = DEFAULT_MAX_SOURCES,
    seed: int = 0,
    lemma_trials: int = 0,
) -> VerificationReport:
    """Run every check and collect the results into one report."""
    tolerances = tolerances or Tolerances.from_env()
    table = table or ConeTable(t, tolerances.cone)
    structure = check_structure(g, t)
    stretch = per_edge_stretch(g, t, tolerance=tolerances.relative)
    ratios = spanner_ratios(g, t, max_sources=max_sources, seed=seed)
    strong = strong_spanner_diagnostic(g, t)
    lemmas = (
        lemma_suite(t, lemma_trials, np.random.default_rng(seed), tolerance=tolerances.relative)
        if lemma_trials
        else []
    )
    return VerificationReport(
        n=len(t),
        edges=len(g.edges),
        collinear=t.collinear,
        max_degree=structure.max_degree,
        per_edge_stretch_max=stretch.max_ratio,
        per_edge_witness=stretch.witness,
        global_spanner_ratio=ratios.global_ratio,
        dt_spanner_ratio=ratios.dt_ratio,
        ratios_sampled=ratios.sampled,
        ratio_sources=ratios.sources,
        strong_spanner_diagnostic=strong.holds,
        strong_worst_ratio=strong.worst_ratio,
        structure_violations=structure.violations,
        first_edge_missing=check_first_edges(g, t),
        shortest_violations=len(check_shortest_property(g, t, table)),
        charging_exceptions=charging_diagnostic(g, t, table),
        tolerance=tolerances.relative,
        lemma_suite=lemmas,
    )
