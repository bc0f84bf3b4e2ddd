import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundspanner.delaunay import build_delaunay
from boundspanner.distributed import (
    LivelockError,
    TraceEvent,
    build_process,
    candidate_edges_in_cone,
    candidate_list,
    candidate_positions,
    check_candidate_soundness,
    format_trace_line,
    run_distributed,
    simulate,
    simulation_metrics,
    write_trace,
)
from boundspanner.geometry import PointSet
from boundspanner.points import generate_points
from boundspanner.spanner import ConeTable, bound_spanner, same_edges


def reference_positions(lengths) -> set[int]:
    """Scan-free restatement: rising runs from both ends plus the shortest edges between them."""
    k = len(lengths)
    head = {m for m in range(k) if all(lengths[i] <= lengths[i + 1] for i in range(m))}
    tail = {m for m in range(k) if all(lengths[i] >= lengths[i + 1] for i in range(m, k - 1))}
    middle = [m for m in range(k) if max(head) < m < min(tail)]
    shortest = min((lengths[m] for m in middle), default=None)
    return head | tail | {m for m in middle if lengths[m] == shortest}


def test_candidate_positions_examples():
    assert candidate_positions([]) == []
    assert candidate_positions([1, 2, 3]) == [0, 1, 2]
    assert candidate_positions([3, 1, 2]) == [0, 1, 2]
    assert candidate_positions([1, 5, 3, 4, 6, 2]) == [0, 1, 2, 4, 5]
    assert candidate_positions([1, 5, 3, 3, 4, 6, 2]) == [0, 1, 2, 3, 5, 6]


@pytest.mark.parametrize("k", range(1, 7))
def test_candidate_positions_match_reference_on_all_permutations(k):
    for lengths in itertools.permutations(range(1, k + 1)):
        assert set(candidate_positions(lengths)) == reference_positions(lengths)


@given(st.lists(st.integers(1, 5), max_size=9))
def test_candidate_positions_keep_ends_and_minimum(lengths):
    chosen = candidate_positions(lengths)
    assert chosen == sorted(set(chosen))
    if lengths:
        assert {0, len(lengths) - 1} <= set(chosen)
        shortest = min(lengths)
        assert {m for m, v in enumerate(lengths) if v == shortest} <= set(chosen)
        assert set(chosen) == reference_positions(lengths)


def test_candidate_edges_in_cone_are_ordered_globally():
    t = build_delaunay(generate_points("uniform", 200, 4))
    table = ConeTable(t)
    for p in range(0, 200, 7):
        for label in range(1, 9):
            segment = candidate_edges_in_cone(t, p, table.members(p, label))
            ranks = [t.rank(e.u, e.v) for e in segment]
            assert ranks == sorted(ranks)
            assert all(p in e for e in segment)
    assert candidate_edges_in_cone(t, 0, ()) == ()


def test_build_process_on_small_inputs():
    t = build_delaunay(PointSet.from_coordinates([(0, 0), (1, 0)]))
    table = ConeTable(t)
    proc = build_process(t, 0, table)
    assert [e.key for e in proc.candidates.entries] == [(0, 1)]
    assert proc.front() == 0
    assert not proc.done

    t = build_delaunay(PointSet.from_coordinates([(0, 0), (4, 0), (1, 2)]))
    table = ConeTable(t)
    # every cone of vertex 0 holds at most one edge
    entries = candidate_list(t, 0, table).entries
    assert [e.key for e in entries] == [(0, 2), (0, 1)]


def test_candidate_lists_stay_linear():
    t = build_delaunay(generate_points("uniform", 1000, 6))
    table = ConeTable(t)
    total = sum(len(candidate_list(t, p, table)) for p in range(len(t)))
    assert total <= 2 * len(t.edges)


@pytest.mark.parametrize("kind", ["uniform", "grid-jitter", "clusters", "ring"])
def test_candidate_lists_hold_every_accepted_edge(kind):
    t = build_delaunay(generate_points(kind, 400, 12))
    table = ConeTable(t)
    assert check_candidate_soundness(t, bound_spanner(t, table=table), table) == []


def test_two_points_take_one_round():
    t = build_delaunay(PointSet.from_coordinates([(0, 0), (1, 0)]))
    run = simulate(t, keep_trace=True)
    assert [e.key for e in run.graph.edges] == [(0, 1)]
    metrics = simulation_metrics(run)
    assert metrics.as_dict() == {
        "rounds": 1,
        "pops": 2,
        "max_wait": 0,
        "commits": 1,
        "candidates": 2,
    }
    assert sorted(event.action for event in run.trace) == ["commit", "discard"]


@pytest.mark.parametrize("kind", ["uniform", "grid-jitter", "clusters", "ring"])
@pytest.mark.parametrize("schedule_seed", [0, 1, 2, 3])
def test_matches_sequential_for_every_schedule(kind, schedule_seed):
    t = build_delaunay(generate_points(kind, 300, 21))
    table = ConeTable(t)
    sequential = bound_spanner(t, table=table)
    run = simulate(t, schedule_seed, table=table)
    assert same_edges(run.graph, sequential)
    assert run.graph.canonical_edges() == sequential.canonical_edges()
    assert run.metrics.pops <= run.metrics.candidates
    assert all(proc.done for proc in run.processes)


def test_matches_sequential_with_inclusive_reading():
    t = build_delaunay(generate_points("uniform", 250, 13))
    expected = bound_spanner(t, reading="inclusive")
    assert same_edges(run_distributed(t, 5, reading="inclusive"), expected)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**63), schedule_seed=st.integers(0, 2**63), n=st.integers(2, 80))
def test_identity_on_random_instances(seed, schedule_seed, n):
    t = build_delaunay(generate_points("uniform", n, seed))
    assert same_edges(run_distributed(t, schedule_seed), bound_spanner(t))


@pytest.mark.timeout(60)
def test_threaded_run_matches_sequential():
    t = build_delaunay(generate_points("clusters", 80, 17))
    run = simulate(t, threaded=True)
    assert run.metrics.rounds == 0
    assert same_edges(run.graph, bound_spanner(t))


@pytest.mark.timeout(60)
@pytest.mark.parametrize("threaded", [False, True])
def test_max_wait_follows_the_recorded_waits(threaded):
    t = build_delaunay(generate_points("uniform", 150, 4))
    run = simulate(t, 2, threaded=threaded, keep_trace=True)
    waits = sum(event.action == "wait" for event in run.trace)
    assert (run.metrics.max_wait > 0) == (waits > 0)
    assert all(proc.waited == 0 for proc in run.processes)


def test_trace_records_every_pop():
    t = build_delaunay(generate_points("uniform", 60, 3))
    run = simulate(t, 9, keep_trace=True)
    actions = [event.action for event in run.trace]
    assert actions.count("commit") == run.metrics.commits == len(run.graph.core_edges)
    popped = actions.count("discard") + actions.count("commit") + actions.count("reject")
    assert popped == run.metrics.pops
    rounds = [event.round for event in run.trace]
    assert rounds == sorted(rounds)
    assert rounds[-1] == run.metrics.rounds


def test_trace_lines(tmp_path):
    events = [
        TraceEvent(1, 4, "commit", (2, 4)),
        TraceEvent(2, 7, "wait", (7, 9)),
    ]
    assert format_trace_line(events[0]) == "round=1 vertex=4 action=commit edge=2-4"
    path = tmp_path / "trace.log"
    write_trace(events, path)
    assert path.read_text().splitlines() == [
        "round=1 vertex=4 action=commit edge=2-4",
        "round=2 vertex=7 action=wait edge=7-9",
    ]


def test_livelock_error_keeps_trace():
    event = TraceEvent(3, 1, "wait", (1, 2))
    error = LivelockError("stuck", [event])
    assert error.trace == [event]
    assert str(error) == "stuck"
