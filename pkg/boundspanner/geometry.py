"""Planar primitives: exact predicates, angles, directions and the eight-cone partition.

The orientation and in-circle predicates evaluate in floating point first and fall back to
exact rational arithmetic only when the result is within the forward error bound of the
floating-point evaluation. Every other module builds on these two signs.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple

from boundspanner.config import CONE_COUNT, CONE_WIDTH, DEFAULT_CONE_TOLERANCE

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence

    import numpy as np

TWO_PI = 2.0 * math.pi

_EPSILON = sys.float_info.epsilon / 2.0
_CCW_ERRBOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_ICC_ERRBOUND = (10.0 + 96.0 * _EPSILON) * _EPSILON
# below this magnitude products may be subnormal and the static bounds no longer hold
_UNDERFLOW_GUARD = 1e-280


class DegenerateGeometryError(ValueError):
    """A primitive was asked about coincident or collinear points."""


class Point(NamedTuple):
    """A planar point; ``id`` is its index inside the owning PointSet."""

    x: float
    y: float
    id: int = -1


@dataclass(frozen=True)
class PointSet:
    """Immutable indexed list of points whose ids are their positions."""

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        for index, point in enumerate(self.points):
            if point.id != index:
                msg = f"point at position {index} carries id {point.id}"
                raise ValueError(msg)
            if not (math.isfinite(point.x) and math.isfinite(point.y)):
                msg = f"point {index} has a non-finite coordinate ({point.x}, {point.y})"
                raise ValueError(msg)

    @classmethod
    def from_coordinates(cls, coordinates: Iterable[Sequence[float]]) -> PointSet:
        """Build a PointSet from ``(x, y)`` pairs, assigning ids in order."""
        return cls(
            tuple(Point(float(x), float(y), i) for i, (x, y) in enumerate(coordinates))
        )

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index: int) -> Point:
        return self.points[index]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        """Coordinates as an ``(n, 2)`` float64 array."""
        import numpy as np

        return np.array([(p.x, p.y) for p in self.points], dtype=np.float64).reshape(-1, 2)

    def coordinates(self) -> list[tuple[float, float]]:
        """Plain ``(x, y)`` tuples, in id order."""
        return [(p.x, p.y) for p in self.points]


@dataclass(frozen=True)
class Direction:
    """An angle in radians normalized to ``[0, 2π)``."""

    theta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta) or not 0.0 <= self.theta < TWO_PI:
            msg = f"direction {self.theta} is not normalized to [0, 2π)"
            raise ValueError(msg)

    @classmethod
    def normalized(cls, theta: float) -> Direction:
        wrapped = theta % TWO_PI
        if wrapped >= TWO_PI:
            wrapped = 0.0
        return cls(wrapped)

    @classmethod
    def between(cls, origin: Point, target: Point) -> Direction:
        """Direction of the ray ``origin → target``."""
        dx, dy = _exact_delta(origin, target)
        if dx == 0 and dy == 0:
            msg = f"no direction between coincident points {origin} and {target}"
            raise DegenerateGeometryError(msg)
        return cls.normalized(math.atan2(float(dy), float(dx)))


def _exact_delta(a: Sequence[float], b: Sequence[float]) -> tuple[Fraction, Fraction]:
    return Fraction(b[0]) - Fraction(a[0]), Fraction(b[1]) - Fraction(a[1])


def _cross_dot(
    vertex: Sequence[float], a: Sequence[float], b: Sequence[float]
) -> tuple[float, float]:
    """Cross and dot of ``vertex→a`` and ``vertex→b``, each rounded once."""
    ax, ay = _exact_delta(vertex, a)
    bx, by = _exact_delta(vertex, b)
    return float(ax * by - ay * bx), float(ax * bx + ay * by)


def _sign(value: float | Fraction) -> int:
    return (value > 0) - (value < 0)


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """Sign of the signed area of triangle ``(a, b, c)``: +1 counterclockwise, 0 collinear."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    if (detleft > 0 and detright <= 0) or (detleft < 0 and detright >= 0):
        # terms of opposite sign cannot cancel
        return _sign(det)
    detsum = abs(detleft) + abs(detright)
    if detsum > _UNDERFLOW_GUARD and abs(det) > _CCW_ERRBOUND * detsum:
        return _sign(det)
    return _orient2d_exact(a, b, c)


def _orient2d_exact(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    acx, acy = _exact_delta(c, a)
    bcx, bcy = _exact_delta(c, b)
    return _sign(acx * bcy - acy * bcx)


def incircle(
    a: Sequence[float], b: Sequence[float], c: Sequence[float], d: Sequence[float]
) -> int:
    """+1 iff ``d`` is strictly inside the circle through counterclockwise ``a, b, c``."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if permanent > _UNDERFLOW_GUARD and abs(det) > _ICC_ERRBOUND * permanent:
        return _sign(det)
    return _incircle_exact(a, b, c, d)


def _incircle_exact(
    a: Sequence[float], b: Sequence[float], c: Sequence[float], d: Sequence[float]
) -> int:
    adx, ady = _exact_delta(d, a)
    bdx, bdy = _exact_delta(d, b)
    cdx, cdy = _exact_delta(d, c)
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return _sign(det)


def incircle_symbolic(a: Point, b: Point, c: Point, d: Point) -> int:
    """In-circle sign with cocircular ties broken by index-ordered symbolic perturbation.

    Each lifted height ``|p|²`` is raised by an infinitesimal whose magnitude decreases with
    the point id, so the first non-vanishing coefficient (by id) decides. Never returns 0
    for a non-degenerate triangle ``(a, b, c)``.
    """
    sign = incircle(a, b, c, d)
    if sign != 0:
        return sign
    coefficients = {
        a.id: lambda: orient2d(b, c, d),
        b.id: lambda: orient2d(c, a, d),
        c.id: lambda: orient2d(a, b, d),
        d.id: lambda: -orient2d(a, b, c),
    }
    for point_id in sorted(coefficients):
        sign = coefficients[point_id]()
        if sign != 0:
            return sign
    return 0


def squared_distance(a: Sequence[float], b: Sequence[float]) -> Fraction:
    """Exact squared Euclidean distance."""
    dx, dy = _exact_delta(a, b)
    return dx * dx + dy * dy


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def is_obtuse(vertex: Sequence[float], a: Sequence[float], b: Sequence[float]) -> bool:
    """Exact test for ``∠(a vertex b) > π/2``."""
    ax, ay = _exact_delta(vertex, a)
    bx, by = _exact_delta(vertex, b)
    return ax * bx + ay * by < 0


def angle_at(vertex: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """Unsigned angle in ``[0, π]`` between rays ``vertex→a`` and ``vertex→b``.

    Raises:
        DegenerateGeometryError: If either ray has zero length.
    """
    if (a[0], a[1]) == (vertex[0], vertex[1]) or (b[0], b[1]) == (vertex[0], vertex[1]):
        msg = f"zero-length ray at {tuple(vertex)}"
        raise DegenerateGeometryError(msg)
    cross, dot = _cross_dot(vertex, a, b)
    return math.atan2(abs(cross), dot)


@dataclass(frozen=True)
class ConeSystem:
    """Eight closed π/4 sectors around ``apex``, labeled 1..8 clockwise from the anchor ray.

    Cone ``i`` is the sector ``[θ0 − i·π/4, θ0 − (i−1)·π/4]``; the anchor ray (toward the
    apex's nearest neighbor) is the shared boundary of cones 1 and 8.
    """

    apex: Point
    anchor_target: Point
    anchor: Direction

    def sector(self, label: int) -> tuple[float, float]:
        """Clockwise sweep ``(from_theta, to_theta)`` of cone ``label``, unnormalized."""
        if not 1 <= label <= CONE_COUNT:
            msg = f"cone label must be in 1..{CONE_COUNT}, got {label}"
            raise ValueError(msg)
        start = self.anchor.theta - (label - 1) * CONE_WIDTH
        return start, start - CONE_WIDTH

    def offset(self, target: Sequence[float]) -> float:
        """Clockwise angle in ``[0, 2π)`` from the anchor ray to ``apex→target``."""
        if (target[0], target[1]) == (self.apex.x, self.apex.y):
            msg = f"target coincides with apex {self.apex}"
            raise DegenerateGeometryError(msg)
        cross, dot = _cross_dot(self.apex, self.anchor_target, target)
        offset = -math.atan2(cross, dot) % TWO_PI
        return 0.0 if offset >= TWO_PI else offset


def build_cone_system(apex: Point, q_min: Point) -> ConeSystem:
    """Anchor the eight cones of ``apex`` on the ray toward ``q_min``.

    Raises:
        DegenerateGeometryError: If ``q_min`` coincides with ``apex``.
    """
    return ConeSystem(apex=apex, anchor_target=q_min, anchor=Direction.between(apex, q_min))


def cones_for_offset(offset: float, tolerance: float = DEFAULT_CONE_TOLERANCE) -> frozenset[int]:
    """Labels of every closed cone within ``tolerance`` of a clockwise offset."""
    labels = set()
    for label in range(1, CONE_COUNT + 1):
        low = (label - 1) * CONE_WIDTH - tolerance
        high = label * CONE_WIDTH + tolerance
        if any(low <= value <= high for value in (offset, offset - TWO_PI, offset + TWO_PI)):
            labels.add(label)
    return frozenset(labels)


def cones_containing(
    system: ConeSystem, target: Sequence[float], tolerance: float = DEFAULT_CONE_TOLERANCE
) -> frozenset[int]:
    """Labels (one, or two on a boundary ray) of the closed cones containing ``target``."""
    return cones_for_offset(system.offset(target), tolerance)


@dataclass(frozen=True)
class Disk:
    """The disk with three given points on its boundary."""

    a: Point
    b: Point
    c: Point

    def __post_init__(self) -> None:
        if orient2d(self.a, self.b, self.c) == 0:
            msg = f"disk boundary points {self.a}, {self.b}, {self.c} are collinear"
            raise DegenerateGeometryError(msg)

    def contains(self, point: Sequence[float], *, closed: bool = True) -> bool:
        """Whether ``point`` lies inside (or on, when ``closed``) the disk."""
        a, b, c = self.a, self.b, self.c
        if orient2d(a, b, c) < 0:
            b, c = c, b
        sign = incircle(a, b, c, point)
        return sign > 0 or (closed and sign == 0)

    @cached_property
    def center(self) -> tuple[float, float]:
        bx, by = self.b.x - self.a.x, self.b.y - self.a.y
        cx, cy = self.c.x - self.a.x, self.c.y - self.a.y
        denominator = 2.0 * (bx * cy - by * cx)
        b2, c2 = bx * bx + by * by, cx * cx + cy * cy
        ux = (cy * b2 - by * c2) / denominator
        uy = (bx * c2 - cx * b2) / denominator
        return self.a.x + ux, self.a.y + uy

    @property
    def radius(self) -> float:
        return distance(self.center, self.a)
