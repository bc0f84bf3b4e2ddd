"""Point-set generators and point-file ingestion."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from boundspanner.config import GENERATOR_KINDS, SEED_LIMIT
from boundspanner.geometry import PointSet

# relative radial jitter of the "ring" generator
RING_JITTER = 1e-9
_MAX_REDRAWS = 64


class PointInputError(ValueError):
    """A point file or generator request cannot produce a valid point set."""


def _uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(0.0, 1.0, size=(n, 2))


def _grid_jitter(rng: np.random.Generator, n: int) -> np.ndarray:
    side = math.ceil(math.sqrt(n))
    cells = rng.permutation(side * side)[:n]
    base = np.stack([cells % side, cells // side], axis=1).astype(np.float64)
    return (base + 0.5 + rng.uniform(-0.25, 0.25, size=(n, 2))) / side


def _clusters(rng: np.random.Generator, n: int) -> np.ndarray:
    count = max(1, round(math.sqrt(n) / 2))
    centers = rng.uniform(0.1, 0.9, size=(count, 2))
    owner = rng.integers(0, count, size=n)
    return centers[owner] + rng.normal(0.0, 0.03, size=(n, 2))


def _ring(rng: np.random.Generator, n: int) -> np.ndarray:
    theta = rng.uniform(0.0, 2 * math.pi, size=n)
    radius = 0.5 * (1.0 + rng.uniform(-RING_JITTER, RING_JITTER, size=n))
    return np.stack([0.5 + radius * np.cos(theta), 0.5 + radius * np.sin(theta)], axis=1)


_GENERATORS = {
    "uniform": _uniform,
    "grid-jitter": _grid_jitter,
    "clusters": _clusters,
    "ring": _ring,
}


def _duplicate_rows(xy: np.ndarray) -> np.ndarray:
    _, first = np.unique(xy, axis=0, return_index=True)
    mask = np.ones(len(xy), dtype=bool)
    mask[first] = False
    return np.flatnonzero(mask)


def generate_points(kind: str, n: int, seed: int) -> PointSet:
    """Deterministic point set of ``n`` distinct points drawn by generator ``kind``.

    Coincident draws are replaced by fresh draws from the same stream until all points differ.

    Raises:
        PointInputError: On an unknown kind, ``n < 2`` or a seed outside 64 bits.
    """
    if kind not in _GENERATORS:
        msg = f"unknown generator kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}"
        raise PointInputError(msg)
    if n < 2:  # noqa: PLR2004
        msg = f"n must be >= 2, got {n}"
        raise PointInputError(msg)
    if not 0 <= seed < SEED_LIMIT:
        msg = f"seed must be a 64-bit unsigned integer, got {seed}"
        raise PointInputError(msg)
    draw = _GENERATORS[kind]
    rng = np.random.default_rng(seed)
    xy = draw(rng, n)
    for _ in range(_MAX_REDRAWS):
        duplicates = _duplicate_rows(xy)
        if not len(duplicates):
            return PointSet.from_coordinates(xy.tolist())
        xy[duplicates] = draw(rng, len(duplicates))
    msg = f"could not draw {n} distinct {kind} points"
    raise PointInputError(msg)


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        msg = f"{where}: {text!r} is not a number"
        raise PointInputError(msg) from None
    if not math.isfinite(value):
        msg = f"{where}: coordinate {text!r} is not finite"
        raise PointInputError(msg)
    return value


def _read_csv(text: str, source: str) -> list[tuple[float, float]]:
    rows = [row for row in csv.reader(text.splitlines()) if any(cell.strip() for cell in row)]
    if rows and rows[0][0].strip().lower() == "x":
        rows = rows[1:]
    coordinates = []
    for line, row in enumerate(rows, 1):
        if len(row) != 2:  # noqa: PLR2004
            msg = f"{source}:{line}: expected 'x,y', got {','.join(row)!r}"
            raise PointInputError(msg)
        where = f"{source}:{line}"
        coordinates.append((_parse_float(row[0], where), _parse_float(row[1], where)))
    return coordinates


def _read_json(text: str, source: str) -> list[tuple[float, float]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"{source}: invalid JSON ({e})"
        raise PointInputError(msg) from e
    raw = data.get("points") if isinstance(data, dict) else None
    if not isinstance(raw, list):
        msg = f'{source}: expected an object {{"points": [[x, y], ...]}}'
        raise PointInputError(msg)
    coordinates = []
    for index, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:  # noqa: PLR2004
            msg = f"{source}: point {index} is not an [x, y] pair"
            raise PointInputError(msg)
        where = f"{source}: point {index}"
        coordinates.append((_parse_float(str(pair[0]), where), _parse_float(str(pair[1]), where)))
    return coordinates


def load_points(path: Path) -> PointSet:
    """Read a point set from a ``.json`` file or a CSV file with one ``x,y`` per line.

    Raises:
        PointInputError: If the file is unreadable, malformed, or holds fewer than two points.
    """
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as e:
        msg = f"{path}: cannot read point file ({e})"
        raise PointInputError(msg) from e
    reader = _read_json if path.suffix.lower() == ".json" else _read_csv
    coordinates = reader(text, str(path))
    if len(coordinates) < 2:  # noqa: PLR2004
        msg = f"{path}: need at least 2 points, found {len(coordinates)}"
        raise PointInputError(msg)
    return PointSet.from_coordinates(coordinates)


def save_points(points: PointSet, path: Path) -> None:
    """Write ``points`` as JSON (``.json`` suffix) or CSV, keeping full float precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".json":
        payload = {"points": [[p.x, p.y] for p in points]}
        path.write_text(json.dumps(payload, indent=2) + "\n")
        return
    lines = ["x,y", *(f"{p.x!r},{p.y!r}" for p in points)]
    path.write_text("\n".join(lines) + "\n")
