"""Distributed spanner construction, simulated in synchronous rounds.

Every vertex runs one process over its candidate list: the few incident edges per cone that
the sequential construction could ever accept. A process pops its shortest remaining
candidate, drops it if one of its own cones is already taken, and otherwise waits until the
other endpoint has nothing shorter left before committing. The committed set equals the
sequential result for any activation order.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from boundspanner.config import CONE_COUNT, DEFAULT_CONE_TOLERANCE, WedgeReading
from boundspanner.spanner import ConeOccupancy, ConeTable, SpannerGraph, wedge

if TYPE_CHECKING:
    from collections.abc import Sequence

    from boundspanner.delaunay import Edge, Triangulation

Status = Literal["running", "blocked", "done"]
Action = Literal["discard", "wait", "commit", "reject"]

_TRACE_TAIL = 200
_THREAD_WAIT_SECONDS = 60.0


class LivelockError(RuntimeError):
    """A full round passed with work remaining and no process progressed."""

    def __init__(self, message: str, trace: Sequence[TraceEvent]) -> None:
        super().__init__(message)
        self.trace = list(trace)


@dataclass(frozen=True)
class TraceEvent:
    round: int
    vertex: int
    action: Action
    edge: tuple[int, int]


def format_trace_line(event: TraceEvent) -> str:
    u, v = event.edge
    return f"round={event.round} vertex={event.vertex} action={event.action} edge={u}-{v}"


def write_trace(events: Sequence[TraceEvent], path: Path) -> None:
    """Write one line per event."""
    path.write_text("".join(format_trace_line(event) + "\n" for event in events))


@dataclass(frozen=True)
class CandidateList:
    """Candidate edges of one vertex, in the global edge order."""

    owner: int
    entries: tuple[Edge, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, e: object) -> bool:
        return e in self.entries


def candidate_positions(lengths: Sequence[Any]) -> list[int]:
    """Positions (clockwise) of the candidates among one cone's edges, given their lengths.

    The candidates are the longest run of non-decreasing lengths starting clockwise from the
    first edge, the same run taken counterclockwise from the last edge, and every edge of
    minimum length strictly between the two runs.
    """
    k = len(lengths)
    if k == 0:
        return []
    head = 0
    while head + 1 < k and lengths[head + 1] >= lengths[head]:
        head += 1
    tail = k - 1
    while tail > 0 and lengths[tail - 1] >= lengths[tail]:
        tail -= 1
    chosen = set(range(head + 1)) | set(range(tail, k))
    middle = range(head + 1, tail)
    if middle:
        shortest = min(lengths[m] for m in middle)
        chosen |= {m for m in middle if lengths[m] == shortest}
    return sorted(chosen)


def candidate_edges_in_cone(t: Triangulation, p: int, cone: Sequence[int]) -> tuple[Edge, ...]:
    """Candidates among edges ``{p, x}`` for the cone's neighbors ``x`` (clockwise)."""
    lengths = [t.squared_length(p, x) for x in cone]
    picked = (t.edge(p, cone[m]) for m in candidate_positions(lengths))
    return tuple(sorted(picked, key=lambda e: t.rank(e.u, e.v)))


def candidate_list(t: Triangulation, p: int, table: ConeTable) -> CandidateList:
    """Merge of p's eight per-cone candidate segments."""
    merged = {
        e
        for label in range(1, CONE_COUNT + 1)
        for e in candidate_edges_in_cone(t, p, table.members(p, label))
    }
    return CandidateList(owner=p, entries=tuple(sorted(merged, key=lambda e: t.rank(e.u, e.v))))


@dataclass
class ProcessState:
    """One vertex's cursor through its candidate list."""

    owner: int
    candidates: CandidateList
    ranks: tuple[int, ...]
    cursor: int = 0
    pending: Edge | None = None
    pending_rank: int = 0
    status: Status = "running"
    blocked_on: int | None = None
    waited: int = 0

    @property
    def done(self) -> bool:
        return self.pending is None and self.cursor >= len(self.candidates)

    def front(self) -> float:
        """Rank of the edge this process is deciding or will pop next; +∞ when finished."""
        if self.pending is not None:
            return self.pending_rank
        if self.cursor < len(self.ranks):
            return self.ranks[self.cursor]
        return math.inf

    def pop(self) -> Edge:
        e = self.candidates.entries[self.cursor]
        self.pending_rank = self.ranks[self.cursor]
        self.cursor += 1
        return e


def build_process(t: Triangulation, p: int, table: ConeTable) -> ProcessState:
    """Initialize the process of vertex ``p`` with its candidate list."""
    candidates = candidate_list(t, p, table)
    ranks = tuple(t.rank(e.u, e.v) for e in candidates.entries)
    return ProcessState(owner=p, candidates=candidates, ranks=ranks)


@dataclass
class SharedView:
    """Committed core edges, wedge edges and cone occupancy, shared by all processes."""

    occupancy: ConeOccupancy
    core: set[Edge] = field(default_factory=set)
    extra: set[Edge] = field(default_factory=set)

    def commit(self, e: Edge, t: Triangulation, reading: WedgeReading) -> None:
        self.occupancy.occupy(e)
        self.core.add(e)
        table = self.occupancy.table
        self.extra |= wedge(e.u, e.v, t, table, reading)
        self.extra |= wedge(e.v, e.u, t, table, reading)


@dataclass(frozen=True)
class SimulationMetrics:
    """Counters of one distributed run.

    ``max_wait`` is the longest single wait of any process: rounds spent blocked in the
    round simulator, wake-ups spent blocked in threaded mode. ``rounds`` is 0 in threaded mode.
    """

    rounds: int
    pops: int
    max_wait: int
    commits: int
    candidates: int

    def as_dict(self) -> dict[str, int]:
        return {
            "rounds": self.rounds,
            "pops": self.pops,
            "max_wait": self.max_wait,
            "commits": self.commits,
            "candidates": self.candidates,
        }


@dataclass(frozen=True)
class DistributedRun:
    graph: SpannerGraph
    metrics: SimulationMetrics
    trace: tuple[TraceEvent, ...]
    processes: tuple[ProcessState, ...]


class _Simulation:
    def __init__(
        self,
        t: Triangulation,
        table: ConeTable,
        reading: WedgeReading,
        *,
        keep_trace: bool,
    ) -> None:
        self.t = t
        self.reading = reading
        self.processes = [build_process(t, p, table) for p in range(len(t))]
        self.view = SharedView(ConeOccupancy(table))
        self.trace: deque[TraceEvent] | list[TraceEvent] = (
            [] if keep_trace else deque(maxlen=_TRACE_TAIL)
        )
        self.pops = 0
        self.max_wait = 0

    def record(self, round_no: int, vertex: int, action: Action, e: Edge) -> None:
        self.trace.append(TraceEvent(round_no, vertex, action, e.key))

    def _decide(self, proc: ProcessState, round_no: int) -> None:
        e = proc.pending
        assert e is not None  # noqa: S101
        q = e.other(proc.owner)
        free = self.view.occupancy.is_free(q, e) and self.view.occupancy.is_free(proc.owner, e)
        if e not in self.view.core and free:
            self.view.commit(e, self.t, self.reading)
            self.record(round_no, proc.owner, "commit", e)
        else:
            self.record(round_no, proc.owner, "reject", e)
        proc.pending = None
        proc.status = "done" if proc.done else "running"
        proc.blocked_on = None
        proc.waited = 0

    def _pop(self, proc: ProcessState, round_no: int) -> bool:
        """Pop the next candidate; False when it was discarded right away."""
        e = proc.pop()
        self.pops += 1
        if e in self.view.core or not self.view.occupancy.is_free(proc.owner, e):
            self.record(round_no, proc.owner, "discard", e)
            proc.status = "done" if proc.done else "running"
            return False
        proc.pending = e
        return True

    def step(self, proc: ProcessState, round_no: int) -> bool:
        """Advance one process by one action; True when it made progress."""
        popped = False
        if proc.pending is None:
            popped = True
            if not self._pop(proc, round_no):
                return True
        e = proc.pending
        assert e is not None  # noqa: S101
        q = e.other(proc.owner)
        if self.processes[q].front() < proc.pending_rank:
            proc.status = "blocked"
            proc.blocked_on = q
            proc.waited += 1
            self.max_wait = max(self.max_wait, proc.waited)
            self.record(round_no, proc.owner, "wait", e)
            return popped
        self._decide(proc, round_no)
        return True

    def run_rounds(self, schedule_seed: int) -> int:
        rng = np.random.default_rng(schedule_seed)
        round_no = 0
        while not all(proc.done for proc in self.processes):
            round_no += 1
            progressed = False
            for p in rng.permutation(len(self.processes)):
                proc = self.processes[int(p)]
                if not proc.done:
                    progressed = self.step(proc, round_no) or progressed
            if not progressed:
                blocked = sorted(
                    (proc.owner, proc.blocked_on)
                    for proc in self.processes
                    if proc.status == "blocked"
                )
                msg = f"no progress in round {round_no}; blocked (vertex, on): {blocked[:10]}"
                raise LivelockError(msg, self.trace)
        return round_no

    def run_threads(self) -> None:
        condition = threading.Condition()
        failures: list[BaseException] = []

        def worker(proc: ProcessState) -> None:
            try:
                with condition:
                    while not proc.done and not failures:
                        if not self._pop(proc, 0):
                            condition.notify_all()
                            continue
                        e = proc.pending
                        assert e is not None  # noqa: S101
                        q = e.other(proc.owner)
                        if self.processes[q].front() < proc.pending_rank:
                            proc.status = "blocked"
                            proc.blocked_on = q
                            self.record(0, proc.owner, "wait", e)
                            while self.processes[q].front() < proc.pending_rank:
                                proc.waited += 1
                                self.max_wait = max(self.max_wait, proc.waited)
                                if not condition.wait(_THREAD_WAIT_SECONDS):
                                    msg = (
                                        f"vertex {proc.owner} waited too long on {q} for {e.key}"
                                    )
                                    raise LivelockError(msg, self.trace)
                        self._decide(proc, 0)
                        condition.notify_all()
            except BaseException as exc:  # noqa: BLE001
                with condition:
                    failures.append(exc)
                    condition.notify_all()

        threads = [
            threading.Thread(target=worker, args=(proc,), name=f"vertex-{proc.owner}", daemon=True)
            for proc in self.processes
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        if failures:
            raise failures[0]


def simulate(
    t: Triangulation,
    schedule_seed: int = 0,
    *,
    reading: WedgeReading = "literal",
    tolerance: float = DEFAULT_CONE_TOLERANCE,
    table: ConeTable | None = None,
    threaded: bool = False,
    keep_trace: bool = False,
) -> DistributedRun:
    """Run the distributed construction and keep its metrics and trace.

    Args:
        t: Triangulation to prune.
        schedule_seed: Seed of the per-round activation shuffle.
        reading: Wedge index-range reading, as in the sequential construction.
        tolerance: Cone boundary tolerance, used when ``table`` is not given.
        table: Precomputed cone table to share with a sequential run.
        threaded: Run one thread per vertex instead of simulated rounds.
        keep_trace: Keep every event instead of only the most recent ones.

    Raises:
        LivelockError: If the processes stop making progress.
    """
    table = table or ConeTable(t, tolerance)
    simulation = _Simulation(t, table, reading, keep_trace=keep_trace)
    if threaded:
        simulation.run_threads()
        rounds = 0
    else:
        rounds = simulation.run_rounds(schedule_seed)
    view = simulation.view
    graph = SpannerGraph(
        points=t.points, core_edges=frozenset(view.core), wedge_edges=frozenset(view.extra)
    )
    metrics = SimulationMetrics(
        rounds=rounds,
        pops=simulation.pops,
        max_wait=simulation.max_wait,
        commits=len(view.core),
        candidates=sum(len(proc.candidates) for proc in simulation.processes),
    )
    return DistributedRun(
        graph=graph,
        metrics=metrics,
        trace=tuple(simulation.trace),
        processes=tuple(simulation.processes),
    )


def run_distributed(
    t: Triangulation,
    schedule_seed: int = 0,
    *,
    reading: WedgeReading = "literal",
    tolerance: float = DEFAULT_CONE_TOLERANCE,
    threaded: bool = False,
) -> SpannerGraph:
    """The spanner produced by the distributed construction."""
    return simulate(
        t, schedule_seed, reading=reading, tolerance=tolerance, threaded=threaded
    ).graph


def simulation_metrics(run: DistributedRun) -> SimulationMetrics:
    return run.metrics


def check_candidate_soundness(
    t: Triangulation, sequential: SpannerGraph, table: ConeTable
) -> list[tuple[int, int, int]]:
    """Sequentially accepted edges missing from an endpoint's candidate list.

    Returns:
        ``(u, v, owner)`` for every core edge ``{u, v}`` absent from ``List(owner)``.
    """
    lists = {p: candidate_list(t, p, table) for p in range(len(t))}
    return [
        (e.u, e.v, owner)
        for e in sorted(sequential.core_edges, key=lambda e: e.key)
        for owner in (e.u, e.v)
        if e not in lists[owner]
    ]
