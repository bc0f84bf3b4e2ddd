"""Numeric checks of the path-length inequalities behind the stretch bound.

Each check samples configurations, evaluates ``rhs - lhs`` relative to the right-hand side,
and keeps the worst margin together with the configuration that produced it. Four checks
draw wedges from a real triangulation; the rest draw random triangles and circles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, TypeVar

import networkx as nx
import numpy as np

from boundspanner.config import CONE_CONSTANT, DEFAULT_RELATIVE_TOLERANCE, STRETCH_BOUND
from boundspanner.delaunay import Triangulation, Wedge, iter_wedges, wedge_path_length
from boundspanner.geometry import angle_at, distance, orient2d

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

HALF_PI = math.pi / 2
PROJECTION_FACTOR = math.pi / (2 * math.sqrt(2))
_TINY = 1e-300

T = TypeVar("T")


@dataclass
class LemmaResult:
    """Worst margin of one inequality over its sampled configurations."""

    name: str
    trials: int
    worst_margin: float
    passed: bool
    witness: dict[str, Any] | None = None
    observed: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
            "witness": self.witness,
            "observed": self.observed,
        }


def relative_margin(lhs: float, rhs: float) -> float:
    """``(rhs - lhs) / |rhs|``; non-negative when ``lhs <= rhs``."""
    return (rhs - lhs) / max(abs(rhs), _TINY)


class _Worst:
    def __init__(self, name: str, tolerance: float) -> None:
        self.name = name
        self.tolerance = tolerance
        self.trials = 0
        self.margin = math.inf
        self.witness: dict[str, Any] | None = None

    def add(self, margin: float, witness: Callable[[], dict[str, Any]]) -> None:
        self.trials += 1
        if margin < self.margin:
            self.margin = margin
            self.witness = witness()

    def result(self, **observed: float) -> LemmaResult:
        margin = self.margin if self.trials else 0.0
        return LemmaResult(
            name=self.name,
            trials=self.trials,
            worst_margin=margin,
            passed=margin >= -self.tolerance,
            witness=self.witness if margin < -self.tolerance else None,
            observed=observed,
        )


def _xy(t: Triangulation, *ids: int) -> dict[str, list[float]]:
    return {str(i): [t.points[i].x, t.points[i].y] for i in ids}


def _sample(items: Sequence[T], trials: int, rng: np.random.Generator) -> list[T]:
    if len(items) <= trials:
        return list(items)
    return [items[int(i)] for i in rng.choice(len(items), size=trials, replace=False)]


def _all_wedges(t: Triangulation, max_span: float = math.pi) -> list[Wedge]:
    return [w for apex in range(len(t)) for w in iter_wedges(t, apex, max_span)]


def _shorter_or_equal(t: Triangulation, s: int, a: int, others: Sequence[int]) -> bool:
    return all(t.squared_length(s, a) <= t.squared_length(s, x) for x in others)


def check_path_bound_shortest_pair(
    t: Triangulation, trials: int, rng: np.random.Generator, tolerance: float
) -> LemmaResult:
    """Wedges whose two extreme edges are its shortest: ``δ_S(r,p) ≤ |rp|·α/sin α``."""
    worst = _Worst("path_bound_shortest_pair", tolerance)
    eligible = [
        w
        for w in _all_wedges(t)
        if _shorter_or_equal(t, w.apex, w.start, w.interior)
        and _shorter_or_equal(t, w.apex, w.end, w.interior)
    ]
    pts = t.points
    for w in _sample(eligible, trials, rng):
        alpha = angle_at(pts[w.apex], pts[w.start], pts[w.end])
        factor = alpha / math.sin(alpha) if alpha > 0 else 1.0
        rhs = distance(pts[w.start], pts[w.end]) * factor
        lhs = wedge_path_length(t, w)
        worst.add(
            relative_margin(lhs, rhs), lambda w=w: {"wedge": w.members, **_xy(t, *w.members)}
        )
    return worst.result()


def _projection(
    s: Sequence[float], r: Sequence[float], p: Sequence[float]
) -> tuple[float, float]:
    dx, dy = p[0] - s[0], p[1] - s[1]
    scale = ((r[0] - s[0]) * dx + (r[1] - s[1]) * dy) / (dx * dx + dy * dy)
    return s[0] + scale * dx, s[1] + scale * dy


def _shortest_end_wedges(t: Triangulation) -> list[tuple[Wedge, int, int]]:
    """``(wedge, r, p)`` with span ≤ π/4 and ``{s, r}`` its shortest edge."""
    found = []
    for w in _all_wedges(t, math.pi / 4 + 1e-15):
        for r, p in ((w.start, w.end), (w.end, w.start)):
            others = [x for x in w.members if x != r]
            if _shorter_or_equal(t, w.apex, r, others):
                found.append((w, r, p))
    return found


def check_path_bound_projection(
    t: Triangulation, trials: int, rng: np.random.Generator, tolerance: float
) -> LemmaResult:
    """Shortest edge ``{s,r}``, span ≤ π/4: ``δ_S(r,p) ≤ π/(2√2)·(|pr′| + |r′r|)``."""
    worst = _Worst("path_bound_projection", tolerance)
    pts = t.points
    for w, r, p in _sample(_shortest_end_wedges(t), trials, rng):
        foot = _projection(pts[w.apex], pts[r], pts[p])
        rhs = PROJECTION_FACTOR * (distance(pts[p], foot) + distance(foot, pts[r]))
        lhs = wedge_path_length(t, w)
        worst.add(
            relative_margin(lhs, rhs),
            lambda w=w, r=r, p=p: {"apex": w.apex, "r": r, "p": p, **_xy(t, *w.members)},
        )
    return worst.result()


def check_path_bound_half_pi(
    t: Triangulation, trials: int, rng: np.random.Generator, tolerance: float
) -> LemmaResult:
    """Same wedges as the projection bound: ``δ_DT(r,p) ≤ (π/2)|rp|``."""
    worst = _Worst("path_bound_half_pi", tolerance)
    graph = nx.Graph()
    graph.add_weighted_edges_from((e.u, e.v, e.length) for e in t.edges)
    pts = t.points
    observed = 0.0
    for w, r, p in _sample(_shortest_end_wedges(t), trials, rng):
        chord = distance(pts[r], pts[p])
        rhs = HALF_PI * chord
        lhs = nx.dijkstra_path_length(graph, r, p)
        observed = max(observed, lhs / chord)
        worst.add(
            relative_margin(lhs, rhs),
            lambda w=w, r=r, p=p: {"apex": w.apex, "r": r, "p": p, **_xy(t, *w.members)},
        )
    return worst.result(worst_ratio=observed)


def check_inscribed_angle(
    t: Triangulation, trials: int, rng: np.random.Generator, tolerance: float
) -> LemmaResult:
    """Members beyond the chord of a wedge: ``∠(q_j q_i q_k) ≥ π − ∠(q_j p q_k)``."""
    worst = _Worst("inscribed_angle", tolerance)
    pts = t.points
    triples = []
    for w in _all_wedges(t):
        apex_side = orient2d(pts[w.start], pts[w.end], pts[w.apex])
        triples.extend(
            (w, x)
            for x in w.interior
            if orient2d(pts[w.start], pts[w.end], pts[x]) * apex_side <= 0
        )
    for w, x in _sample(triples, trials, rng):
        lhs = angle_at(pts[x], pts[w.start], pts[w.end])
        rhs = math.pi - angle_at(pts[w.apex], pts[w.start], pts[w.end])
        worst.add(
            (lhs - rhs) / math.pi,
            lambda w=w, x=x: {"wedge": w.members, "member": x, **_xy(t, *w.members)},
        )
    return worst.result()


def right_triangle_margin(beta: float, hypotenuse: float = 1.0) -> float:
    """``π/(2√2)·(|pq|+|qr|) ≤ (π/2)|pr|`` for a right angle at ``q`` and angle ``beta`` at
    ``p``."""
    q = (0.0, 0.0)
    p = (hypotenuse * math.cos(beta), 0.0)
    r = (0.0, hypotenuse * math.sin(beta))
    lhs = PROJECTION_FACTOR * (distance(p, q) + distance(q, r))
    return relative_margin(lhs, HALF_PI * distance(p, r))


def check_right_triangle(trials: int, rng: np.random.Generator, tolerance: float) -> LemmaResult:
    worst = _Worst("right_triangle", tolerance)
    betas = np.concatenate(([math.pi / 4], rng.uniform(0.0, HALF_PI, max(trials - 1, 0))))
    hyps = rng.uniform(0.1, 10.0, len(betas))
    for beta, hyp in zip(betas[:trials], hyps, strict=False):
        margin = right_triangle_margin(float(beta), float(hyp))
        worst.add(margin, lambda beta=beta, hyp=hyp: {"beta": float(beta), "hyp": float(hyp)})
    return worst.result()


def check_obtuse_triangle(trials: int, rng: np.random.Generator, tolerance: float) -> LemmaResult:
    """Angle at ``q`` of at least 3π/4: ``k|qp| + (π/2)|rq| ≤ k|rp|`` with ``k = (1+√2)²``."""
    worst = _Worst("obtuse_triangle", tolerance)
    gamma = rng.uniform(3 * math.pi / 4, math.pi, trials)
    qp = rng.uniform(0.01, 1.0, trials)
    qr = rng.uniform(0.01, 1.0, trials)
    p = np.stack([qp, np.zeros(trials)], axis=1)
    r = np.stack([qr * np.cos(gamma), qr * np.sin(gamma)], axis=1)
    rp = np.hypot(*(p - r).T)
    lhs = STRETCH_BOUND * qp + HALF_PI * qr
    rhs = STRETCH_BOUND * rp
    margins = (rhs - lhs) / rhs
    for i in range(trials):
        worst.add(
            float(margins[i]),
            lambda i=i: {"gamma": float(gamma[i]), "qp": float(qp[i]), "qr": float(qr[i])},
        )
    return worst.result()


def check_projection_constant(
    trials: int, rng: np.random.Generator, tolerance: float
) -> LemmaResult:
    """``|sr| + K(|rr′| + |r′p|) ≤ K|sp|`` for ``|sr| ≤ |sp|``, angle below π/4, ``|sr′| = |sr|``,
    for both ``K = 1/(1 − 2 sin(π/8))`` and ``K = (1+√2)²``."""
    worst = _Worst("projection_constant", tolerance)
    alpha = rng.uniform(0.0, math.pi / 4, trials)
    sp = rng.uniform(0.1, 10.0, trials)
    sr = sp * rng.uniform(0.01, 1.0, trials)
    r = np.stack([sr * np.cos(alpha), sr * np.sin(alpha)], axis=1)
    foot = np.stack([sr, np.zeros(trials)], axis=1)
    rr = np.hypot(*(r - foot).T)
    rp = sp - sr
    margins = np.minimum.reduce(
        [(k * sp - (sr + k * (rr + rp))) / (k * sp) for k in (CONE_CONSTANT, STRETCH_BOUND)]
    )
    for i in range(trials):
        worst.add(
            float(margins[i]),
            lambda i=i: {"alpha": float(alpha[i]), "sr": float(sr[i]), "sp": float(sp[i])},
        )
    return worst.result()


def inscribed_pair_margin(alpha: float, beta1: float, chord: float = 1.0) -> float:
    """``|ab| + |bc| ≤ |ac| / cos(α/2)`` when ``∠abc = π − α`` and ``∠bac = beta1``."""
    beta2 = alpha - beta1
    ab = chord * math.sin(beta2) / math.sin(alpha)
    a, c = (0.0, 0.0), (chord, 0.0)
    b = (ab * math.cos(beta1), ab * math.sin(beta1))
    lhs = distance(a, b) + distance(b, c)
    return relative_margin(lhs, chord / math.cos(alpha / 2))


def check_inscribed_pair(trials: int, rng: np.random.Generator, tolerance: float) -> LemmaResult:
    worst = _Worst("inscribed_pair", tolerance)
    alphas = rng.uniform(1e-3, HALF_PI, trials)
    splits = rng.uniform(0.0, 1.0, trials)
    chords = rng.uniform(0.1, 10.0, trials)
    for alpha, split, chord in zip(alphas, splits, chords, strict=True):
        beta1 = float(alpha * split)
        margin = inscribed_pair_margin(float(alpha), beta1, float(chord))
        worst.add(margin, lambda alpha=alpha, beta1=beta1: {"alpha": float(alpha), "beta1": beta1})
    return worst.result()


def arc_length_error(
    center: tuple[float, float], radius: float, phi_p: float, phi_a: float, phi_z: float
) -> float:
    """Relative gap between ``(β/sin β)|pa|`` and the arc ``pa`` that avoids ``z``."""
    def on_circle(phi: float) -> tuple[float, float]:
        return center[0] + radius * math.cos(phi), center[1] + radius * math.sin(phi)

    p, a, z = on_circle(phi_p), on_circle(phi_a), on_circle(phi_z)
    beta = angle_at(z, p, a)
    sweep = (phi_a - phi_p) % (2 * math.pi)
    if (phi_z - phi_p) % (2 * math.pi) < sweep:
        sweep = 2 * math.pi - sweep
    arc = radius * sweep
    return abs(beta / math.sin(beta) * distance(p, a) - arc) / arc


def check_arc_length(trials: int, rng: np.random.Generator, tolerance: float) -> LemmaResult:
    worst = _Worst("arc_length", tolerance)
    done = 0
    while done < trials:
        phis = rng.uniform(0.0, 2 * math.pi, 3)
        gaps = np.abs((phis[:, None] - phis[None, :] + math.pi) % (2 * math.pi) - math.pi)
        if np.min(gaps[np.triu_indices(3, 1)]) < 1e-3:  # noqa: PLR2004
            continue
        center = (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
        radius = float(rng.uniform(0.1, 10.0))
        error = arc_length_error(center, radius, *(float(v) for v in phis))
        worst.add(
            -error,
            lambda phis=phis, center=center, radius=radius: {
                "center": list(center),
                "radius": radius,
                "angles": [float(v) for v in phis],
            },
        )
        done += 1
    return worst.result()


def lemma_suite(
    t: Triangulation,
    trials: int,
    rng: np.random.Generator | None = None,
    *,
    tolerance: float = DEFAULT_RELATIVE_TOLERANCE,
) -> list[LemmaResult]:
    """Run all nine checks; triangulation-based checks use at most ``trials`` wedges each."""
    rng = rng or np.random.default_rng(0)
    return [
        check_path_bound_shortest_pair(t, trials, rng, tolerance),
        check_path_bound_projection(t, trials, rng, tolerance),
        check_path_bound_half_pi(t, trials, rng, tolerance),
        check_right_triangle(trials, rng, tolerance),
        check_obtuse_triangle(trials, rng, tolerance),
        check_projection_constant(trials, rng, tolerance),
        check_inscribed_pair(trials, rng, tolerance),
        check_arc_length(trials, rng, tolerance),
        check_inscribed_angle(t, trials, rng, tolerance),
    ]
