"""CLI tests driven through ``main(argv)`` with the console captured.

Console output goes to a StringIO-backed Console; every module that prints holds its own
reference to the shared console, so each one is patched.
"""

import argparse
import json
from collections.abc import Callable
from io import StringIO
from pathlib import Path

import pytest
from rich.console import Console

from boundspanner import commands as commands_module
from boundspanner import config as config_module
from boundspanner import main as main_module
from boundspanner import ui as ui_module
from boundspanner.commands import verify_tolerances
from boundspanner.config import GRAPH_SCHEMA, REPORT_SCHEMA, Tolerances
from boundspanner.main import EXIT_INPUT, EXIT_OK, EXIT_OUTPUT, EXIT_VERIFICATION, main

Run = Callable[..., tuple[int, str]]


@pytest.fixture
def cli(mocker) -> Run:
    """Run ``main`` on the given arguments and return ``(exit code, console output)``."""
    output = StringIO()
    captured_console = Console(
        file=output,
        force_terminal=False,
        width=120,
        color_system=None,
        legacy_windows=False,
    )
    for module in (main_module, commands_module, ui_module, config_module):
        mocker.patch.object(module, "console", captured_console)

    def run(*argv: str) -> tuple[int, str]:
        output.seek(0)
        output.truncate()
        code = main(list(argv))
        return code, output.getvalue()

    return run


def test_help_and_no_command(cli):
    code, out = cli("help")
    assert code == EXIT_OK
    assert "boundspanner build" in out
    assert "BOUNDSPANNER_TOLERANCE" in out
    assert cli()[0] == EXIT_OK


def test_gen_writes_points(cli, tmp_path):
    path = tmp_path / "pts.csv"
    code, out = cli("gen", "--kind", "ring", "--n", "40", "--seed", "3", "--out", str(path))
    assert code == EXIT_OK
    assert "Wrote 40 ring points" in out
    assert len(path.read_text().splitlines()) == 41


def test_build_writes_every_artifact(cli, tmp_path):
    graph, report = tmp_path / "g.json", tmp_path / "r.json"
    svg, trace = tmp_path / "g.svg", tmp_path / "trace.log"
    code, out = cli(
        "build", "--kind", "uniform", "--n", "150", "--seed", "4",
        "--algorithm", "both", "--schedule-seed", "7", "--lemma-trials", "10",
        "--graph", str(graph), "--report", str(report), "--svg", str(svg), "--trace", str(trace),
    )  # fmt: skip
    assert code == EXIT_OK, out
    record = json.loads(report.read_text())
    assert record["schema"] == REPORT_SCHEMA
    assert record["pass"] is True
    assert record["identity"] is True
    assert record["simulation"]["candidate_misses"] == 0
    assert record["metadata"]["algorithm"] == "both"
    assert len(record["lemma_suite"]) == 9
    assert json.loads(graph.read_text())["schema"] == GRAPH_SCHEMA
    assert svg.read_text().startswith("<svg")
    assert all(" action=" in line for line in trace.read_text().splitlines())
    assert "verification passed" in out.lower()


def test_build_is_reproducible(cli, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert cli("build", "--kind", "clusters", "--n", "80", "--graph", str(path))[0] == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_build_from_file_and_verify_round_trip(cli, tmp_path):
    points, graph = tmp_path / "pts.json", tmp_path / "g.json"
    assert cli("gen", "--n", "60", "--out", str(points))[0] == EXIT_OK
    code, _ = cli("build", "--input", str(points), "--algorithm", "dist", "--graph", str(graph))
    assert code == EXIT_OK
    report = tmp_path / "again.json"
    code, out = cli("verify", str(graph), "--report", str(report))
    assert code == EXIT_OK, out
    assert json.loads(report.read_text())["pass"] is True


def test_verify_fails_on_a_broken_graph(cli, tmp_path):
    graph = tmp_path / "broken.json"
    payload = {
        "schema": GRAPH_SCHEMA,
        "points": [[0, 0], [1, 0], [0, 1], [5, 5]],
        "core_edges": [[0, 1]],
        "wedge_edges": [],
        "metadata": {},
    }
    graph.write_text(json.dumps(payload))
    code, out = cli("verify", str(graph))
    assert code == EXIT_VERIFICATION
    assert "Error:" in out
    assert "verification failed" in out


def test_render_saved_graph(cli, tmp_path):
    graph = tmp_path / "g.json"
    assert cli("build", "--kind", "uniform", "--n", "30", "--graph", str(graph))[0] == EXIT_OK
    code, _ = cli("render", str(graph))
    assert code == EXIT_OK
    assert graph.with_suffix(".svg").read_text().count("<circle ") == 30


def test_bench_writes_table(cli, tmp_path):
    output = tmp_path / "bench.json"
    code, out = cli("bench", "--sizes", "20", "40", "--repetitions", "1", "--output", str(output))
    assert code == EXIT_OK, out
    data = json.loads(output.read_text())
    assert [row["n"] for row in data["rows"]] == [20, 40]


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--kind", "uniform"],
        ["build", "--n", "10", "--kind", "uniform", "--input", "x.csv"],
        ["build", "--n", "1", "--kind", "uniform"],
        ["build", "--kind", "spiral", "--n", "10"],
        ["build", "--kind", "uniform", "--n", "10", "--seed", "-1"],
        ["build", "--kind", "uniform", "--n", "10", "--tolerance", "-1"],
        ["bench", "--sizes", "20", "--repetitions", "0"],
        ["verify", "no-such-graph.json"],
        ["verify", "g.json", "--lemma-trials", "-1"],
        ["gen", "--n", "10"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_with_three(cli, argv):
    code, _ = cli(*argv)
    assert code == EXIT_INPUT


def test_duplicate_points_are_input_errors(cli, tmp_path):
    path = tmp_path / "dup.csv"
    path.write_text("0,0\n1,1\n0,0\n")
    code, out = cli("build", "--input", str(path))
    assert code == EXIT_INPUT
    assert "coincide" in out


def test_missing_input_file(cli, tmp_path):
    code, out = cli("build", "--input", str(tmp_path / "nope.csv"))
    assert code == EXIT_INPUT
    assert "Error:" in out


def test_error_text_is_not_parsed_as_markup(cli, tmp_path):
    path: Path = tmp_path / "[bold]odd.csv"
    path.write_text("0,0\n")
    code, out = cli("build", "--input", str(path))
    assert code == EXIT_INPUT
    assert "[bold]odd.csv" in out


def test_verify_reuses_the_recorded_cone_tolerance(cli, mocker, tmp_path):
    graph, report = tmp_path / "g.json", tmp_path / "r.json"
    code, _ = cli("build", "--kind", "uniform", "--n", "60", "--cone-tolerance", "1e-9",
                  "--graph", str(graph))  # fmt: skip
    assert code == EXIT_OK
    spy = mocker.spy(commands_module, "verify_spanner")
    assert cli("verify", str(graph), "--report", str(report))[0] == EXIT_OK
    assert spy.call_args.kwargs["tolerances"].cone == 1e-9
    assert json.loads(report.read_text())["metadata"]["cone_tolerance"] == 1e-9

    assert cli("verify", str(graph), "--cone-tolerance", "0", "--report", str(report))[0] == EXIT_OK
    assert spy.call_args.kwargs["tolerances"].cone == 0.0
    assert json.loads(report.read_text())["metadata"]["cone_tolerance"] == 0.0


def test_verify_tolerance_precedence(monkeypatch):
    monkeypatch.delenv("BOUNDSPANNER_CONE_TOLERANCE", raising=False)
    monkeypatch.delenv("BOUNDSPANNER_TOLERANCE", raising=False)
    no_flags = argparse.Namespace(cone_tolerance=None, tolerance=None)
    assert verify_tolerances(no_flags, {}) == Tolerances()
    assert verify_tolerances(no_flags, {"cone_tolerance": 1e-6}).cone == 1e-6
    assert verify_tolerances(no_flags, {"cone_tolerance": "wide"}).cone == Tolerances().cone
    flags = argparse.Namespace(cone_tolerance=0.0, tolerance=1e-6)
    recorded = {"cone_tolerance": 1e-6, "relative_tolerance": 1e-3}
    assert verify_tolerances(flags, recorded) == Tolerances(cone=0.0, relative=1e-6)


def test_output_write_failure_is_not_an_input_error(cli, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, out = cli("gen", "--n", "10", "--out", str(blocker / "pts.csv"))
    assert code == EXIT_OUTPUT
    assert "could not write output" in out


def test_internal_errors_propagate(cli, mocker):
    mocker.patch.object(commands_module, "bound_spanner", side_effect=ValueError("broken"))
    with pytest.raises(ValueError, match="broken"):
        cli("build", "--kind", "uniform", "--n", "10")
