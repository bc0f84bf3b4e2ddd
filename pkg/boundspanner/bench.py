"""Scaling benchmark: triangulation, sequential and distributed construction per size."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from boundspanner.config import BENCH_SCHEMA, ConfigError
from boundspanner.delaunay import build_delaunay
from boundspanner.distributed import simulate
from boundspanner.points import generate_points
from boundspanner.spanner import ConeTable, bound_spanner

if TYPE_CHECKING:
    from collections.abc import Sequence


@dataclass(frozen=True)
class BenchSample:
    """One repetition at one size."""

    n: int
    repetition: int
    dt_seconds: float
    seq_seconds: float
    dist_seconds: float
    pops: int
    rounds: int
    edges: int


@dataclass(frozen=True)
class BenchRow:
    """Medians over the repetitions of one size."""

    n: int
    repetitions: int
    dt_seconds: float
    seq_seconds: float
    dist_seconds: float
    pops: float
    rounds: float
    edges: float

    @property
    def pops_per_point(self) -> float:
        return self.pops / self.n


def run_sample(kind: str, n: int, seed: int, repetition: int) -> BenchSample:
    """Time the three stages on one freshly generated instance."""
    points = generate_points(kind, n, seed + repetition)
    start = time.perf_counter()
    t = build_delaunay(points, seed)
    built = time.perf_counter()
    table = ConeTable(t)
    g = bound_spanner(t, table=table)
    sequential = time.perf_counter()
    run = simulate(t, seed, table=table)
    distributed = time.perf_counter()
    return BenchSample(
        n=n,
        repetition=repetition,
        dt_seconds=built - start,
        seq_seconds=sequential - built,
        dist_seconds=distributed - sequential,
        pops=run.metrics.pops,
        rounds=run.metrics.rounds,
        edges=len(g.edges),
    )


def summarize(samples: Sequence[BenchSample]) -> list[BenchRow]:
    rows = []
    for n in sorted({s.n for s in samples}):
        group = [s for s in samples if s.n == n]

        def median(name: str, group: list[BenchSample] = group) -> float:
            return float(np.median([getattr(s, name) for s in group]))

        rows.append(
            BenchRow(
                n=n,
                repetitions=len(group),
                dt_seconds=median("dt_seconds"),
                seq_seconds=median("seq_seconds"),
                dist_seconds=median("dist_seconds"),
                pops=median("pops"),
                rounds=median("rounds"),
                edges=median("edges"),
            )
        )
    return rows


def bench(
    sizes: Sequence[int],
    repetitions: int = 3,
    *,
    kind: str = "uniform",
    seed: int = 0,
    jobs: int = 1,
) -> list[BenchRow]:
    """Median stage timings and pop counts for every size.

    With ``jobs > 1`` repetitions run in a process pool; results do not depend on ``jobs``
    apart from the wall times.
    """
    if repetitions < 1:
        msg = f"repetitions must be >= 1, got {repetitions}"
        raise ConfigError(msg)
    tasks = [(kind, n, seed, rep) for n in sizes for rep in range(repetitions)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(run_sample, *zip(*tasks, strict=True)))
    else:
        samples = [run_sample(*task) for task in tasks]
    return summarize(samples)


def growth_ratios(rows: Sequence[BenchRow], field: str) -> list[tuple[int, int, float]]:
    """``(n, m, value(m) / value(n))`` for consecutive sizes."""
    return [
        (a.n, b.n, getattr(b, field) / getattr(a, field) if getattr(a, field) else float("inf"))
        for a, b in zip(rows, rows[1:], strict=False)
    ]


def bench_payload(rows: Sequence[BenchRow], settings: dict[str, Any]) -> dict[str, Any]:
    return {
        "schema": BENCH_SCHEMA,
        "settings": settings,
        "rows": [{**asdict(row), "pops_per_point": row.pops_per_point} for row in rows],
        "pop_ratios": [list(r) for r in growth_ratios(rows, "pops")],
    }
