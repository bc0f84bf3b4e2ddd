"""Versioned JSON artifacts: spanner graphs, verification reports and bench tables.

Files are written with sorted keys and no timestamps so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import metadata
from typing import TYPE_CHECKING, Any

from boundspanner.config import GRAPH_SCHEMA, REPORT_SCHEMA
from boundspanner.delaunay import Edge, make_edge
from boundspanner.geometry import PointSet
from boundspanner.spanner import SpannerGraph

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from boundspanner.verify import VerificationReport


class ArtifactError(ValueError):
    """A graph or report file is malformed or carries an unexpected schema."""


def package_version() -> str:
    try:
        return metadata.version("boundspanner")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def write_json(path: Path, payload: dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: Path, schema: str) -> dict[str, Any]:
    """Load ``path`` and check its ``schema`` field.

    Raises:
        ArtifactError: On an unreadable file, invalid JSON or a schema mismatch.
    """
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as e:
        msg = f"{path}: cannot read ({e})"
        raise ArtifactError(msg) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"{path}: invalid JSON ({e})"
        raise ArtifactError(msg) from e
    if not isinstance(data, dict) or data.get("schema") != schema:
        found = data.get("schema") if isinstance(data, dict) else None
        msg = f"{path}: expected schema {schema!r}, found {found!r}"
        raise ArtifactError(msg)
    return data


@dataclass
class GraphArtifact:
    """A spanner together with the provenance it was built with."""

    graph: SpannerGraph
    metadata: dict[str, Any] = field(default_factory=dict)


def _edge_pairs(edges: Iterable[Edge]) -> list[list[int]]:
    return [list(key) for key in sorted(e.key for e in edges)]


def graph_payload(graph: SpannerGraph, provenance: dict[str, Any] | None = None) -> dict[str, Any]:
    return {
        "schema": GRAPH_SCHEMA,
        "points": [[p.x, p.y] for p in graph.points],
        "core_edges": _edge_pairs(graph.core_edges),
        "wedge_edges": _edge_pairs(graph.wedge_edges),
        "metadata": {"version": package_version(), **(provenance or {})},
    }


def save_graph(path: Path, graph: SpannerGraph, provenance: dict[str, Any] | None = None) -> None:
    write_json(path, graph_payload(graph, provenance))


def _parse_edges(points: PointSet, raw: Any, name: str, path: Path) -> frozenset[Edge]:
    if not isinstance(raw, list):
        msg = f"{path}: {name} must be a list of [u, v] pairs"
        raise ArtifactError(msg)
    edges = set()
    for pair in raw:
        valid = (
            isinstance(pair, list)
            and len(pair) == 2  # noqa: PLR2004
            and all(isinstance(v, int) and 0 <= v < len(points) for v in pair)
            and pair[0] != pair[1]
        )
        if not valid:
            msg = f"{path}: {name} entry {pair!r} is not a pair of distinct point indices"
            raise ArtifactError(msg)
        edges.add(make_edge(points, pair[0], pair[1]))
    return frozenset(edges)


def load_graph(path: Path) -> GraphArtifact:
    """Read a graph written by :func:`save_graph`.

    Raises:
        ArtifactError: If the file does not describe a valid graph.
    """
    data = read_json(path, GRAPH_SCHEMA)
    try:
        points = PointSet.from_coordinates(data["points"])
    except (KeyError, TypeError, ValueError) as e:
        msg = f"{path}: invalid points ({e})"
        raise ArtifactError(msg) from e
    graph = SpannerGraph(
        points=points,
        core_edges=_parse_edges(points, data.get("core_edges"), "core_edges", path),
        wedge_edges=_parse_edges(points, data.get("wedge_edges"), "wedge_edges", path),
    )
    return GraphArtifact(graph=graph, metadata=dict(data.get("metadata") or {}))


def report_payload(
    report: VerificationReport, provenance: dict[str, Any] | None = None
) -> dict[str, Any]:
    return {"schema": REPORT_SCHEMA, **report.as_dict(), "metadata": provenance or {}}


def save_report(
    path: Path, report: VerificationReport, provenance: dict[str, Any] | None = None
) -> None:
    write_json(path, report_payload(report, provenance))
