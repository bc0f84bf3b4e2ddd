"""Handlers for the `gen`, `build`, `verify`, `bench` and `render` subcommands."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from boundspanner.artifacts import load_graph, save_graph, save_report, write_json
from boundspanner.bench import bench, bench_payload
from boundspanner.config import (
    COLORS,
    ConfigError,
    RunConfig,
    Tolerances,
    console,
    default_max_sources,
)
from boundspanner.delaunay import Triangulation, build_delaunay
from boundspanner.distributed import (
    DistributedRun,
    check_candidate_soundness,
    simulate,
    write_trace,
)
from boundspanner.geometry import PointSet
from boundspanner.points import generate_points, load_points, save_points
from boundspanner.render import save_svg
from boundspanner.spanner import ConeTable, SpannerGraph, bound_spanner, same_edges, spanner_stats
from boundspanner.ui import render_bench, render_metrics, render_report, render_stats
from boundspanner.verify import VerificationFailure, VerificationReport, verify_spanner


@dataclass
class PipelineResult:
    """What one `build` produced."""

    triangulation: Triangulation
    graph: SpannerGraph
    report: VerificationReport
    sequential: SpannerGraph | None = None
    distributed: DistributedRun | None = None


def _load_input(cfg: RunConfig) -> PointSet:
    if cfg.input_path is not None:
        return load_points(cfg.input_path)
    assert cfg.kind is not None  # noqa: S101
    assert cfg.n is not None  # noqa: S101
    return generate_points(cfg.kind, cfg.n, cfg.seed)


def provenance(cfg: RunConfig, t: Triangulation) -> dict[str, Any]:
    """Settings that determine the artifacts, recorded next to them."""
    source: dict[str, Any] = (
        {"file": str(cfg.input_path)}
        if cfg.input_path is not None
        else {"kind": cfg.kind, "n": cfg.n, "seed": cfg.seed}
    )
    return {
        "source": source,
        "algorithm": cfg.algorithm,
        "schedule_seed": cfg.schedule_seed,
        "wedge_reading": cfg.wedge_reading,
        "cone_tolerance": cfg.tolerances.cone,
        "relative_tolerance": cfg.tolerances.relative,
        "collinear": t.collinear,
    }


def _raise_on_failure(report: VerificationReport) -> None:
    if not report.passed:
        reasons = report.failures()
        msg = f"verification failed: {reasons[0]}" + (
            f" (+{len(reasons) - 1} more)" if len(reasons) > 1 else ""
        )
        raise VerificationFailure(msg, report.as_dict())


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    """Build the spanner described by ``cfg``, verify it and write the requested artifacts.

    Artifacts are written before the verdict, so a failing run still leaves its report behind.

    Raises:
        ConfigError: If ``cfg`` is inconsistent.
        PointInputError: If the input points cannot be read or generated.
        VerificationFailure: If any asserted property fails.
        LivelockError: If the distributed run stops making progress.
    """
    cfg.validate()
    points = _load_input(cfg)
    with console.status(f"[bold {COLORS['primary']}]Triangulating {len(points):,} points..."):
        t = build_delaunay(points, cfg.seed)
    table = ConeTable(t, cfg.tolerances.cone)

    sequential = run = None
    if cfg.algorithm in ("seq", "both"):
        with console.status(f"[bold {COLORS['primary']}]Sequential construction..."):
            sequential = bound_spanner(t, reading=cfg.wedge_reading, table=table)
    if cfg.algorithm in ("dist", "both"):
        with console.status(f"[bold {COLORS['primary']}]Distributed simulation..."):
            run = simulate(
                t,
                cfg.schedule_seed,
                reading=cfg.wedge_reading,
                table=table,
                threaded=cfg.threaded,
                keep_trace=cfg.trace_path is not None,
            )
    graph = sequential or (run.graph if run else None)
    assert graph is not None  # noqa: S101

    with console.status(f"[bold {COLORS['primary']}]Verifying..."):
        report = verify_spanner(
            graph,
            t,
            tolerances=cfg.tolerances,
            table=table,
            max_sources=default_max_sources(),
            seed=cfg.seed,
            lemma_trials=cfg.lemma_trials,
        )
    report.wedge_reading = cfg.wedge_reading
    if run is not None:
        report.simulation = run.metrics.as_dict()
    if sequential is not None and run is not None:
        report.identity = same_edges(sequential, run.graph)
        report.simulation = {
            **run.metrics.as_dict(),
            "candidate_misses": len(check_candidate_soundness(t, sequential, table)),
        }

    meta = provenance(cfg, t)
    if cfg.graph_path:
        save_graph(cfg.graph_path, graph, meta)
    if cfg.report_path:
        save_report(cfg.report_path, report, meta)
    if cfg.svg_path:
        save_svg(graph, cfg.svg_path)
    if cfg.trace_path and run is not None:
        write_trace(run.trace, cfg.trace_path)

    render_stats(spanner_stats(graph))
    if run is not None:
        render_metrics(run.metrics)
    render_report(report)
    for path in (cfg.graph_path, cfg.report_path, cfg.svg_path, cfg.trace_path):
        if path:
            console.print(f"[dim]Wrote {path}[/dim]")
    _raise_on_failure(report)
    return PipelineResult(
        triangulation=t, graph=graph, report=report, sequential=sequential, distributed=run
    )


def config_from_args(args: argparse.Namespace) -> RunConfig:
    env = Tolerances.from_env()
    tolerances = Tolerances(
        cone=env.cone if args.cone_tolerance is None else args.cone_tolerance,
        relative=env.relative if args.tolerance is None else args.tolerance,
    )
    return RunConfig(
        input_path=args.input,
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        algorithm=args.algorithm,
        schedule_seed=args.schedule_seed,
        wedge_reading=args.wedge_reading,
        tolerances=tolerances,
        graph_path=args.graph,
        report_path=args.report,
        svg_path=args.svg,
        trace_path=args.trace,
        lemma_trials=args.lemma_trials,
        threaded=args.threaded,
    )


def run_build(args: argparse.Namespace) -> None:
    run_pipeline(config_from_args(args))


def run_gen(args: argparse.Namespace) -> None:
    points = generate_points(args.kind, args.n, args.seed)
    save_points(points, args.out)
    console.print(f"[green]✓ Wrote {len(points):,} {args.kind} points to {args.out}[/green]")


def verify_tolerances(args: argparse.Namespace, metadata: dict[str, Any]) -> Tolerances:
    """Tolerances for re-verifying a saved graph.

    Flags win, then the values recorded when the graph was built, then the environment.
    """
    env = Tolerances.from_env()

    def pick(flag: float | None, key: str, fallback: float) -> float:
        if flag is not None:
            return flag
        recorded = metadata.get(key)
        if isinstance(recorded, int | float) and not isinstance(recorded, bool):
            return float(recorded)
        return fallback

    return Tolerances(
        cone=pick(args.cone_tolerance, "cone_tolerance", env.cone),
        relative=pick(args.tolerance, "relative_tolerance", env.relative),
    )


def run_verify(args: argparse.Namespace) -> None:
    """Re-verify a saved graph against the triangulation of its own points."""
    if args.lemma_trials < 0:
        msg = f"lemma trials must be >= 0, got {args.lemma_trials}"
        raise ConfigError(msg)
    artifact = load_graph(args.graph)
    tolerances = verify_tolerances(args, artifact.metadata)
    with console.status(f"[bold {COLORS['primary']}]Verifying {args.graph}..."):
        t = build_delaunay(artifact.graph.points)
        report = verify_spanner(
            artifact.graph,
            t,
            tolerances=tolerances,
            max_sources=default_max_sources(),
            lemma_trials=args.lemma_trials,
        )
    report.wedge_reading = str(artifact.metadata.get("wedge_reading", "literal"))
    if args.report:
        save_report(
            args.report,
            report,
            {
                **artifact.metadata,
                "cone_tolerance": tolerances.cone,
                "relative_tolerance": tolerances.relative,
            },
        )
        console.print(f"[dim]Wrote {args.report}[/dim]")
    render_stats(spanner_stats(artifact.graph), title=str(args.graph))
    render_report(report)
    _raise_on_failure(report)


def run_bench(args: argparse.Namespace) -> None:
    rows = bench(args.sizes, args.repetitions, kind=args.kind, seed=args.seed, jobs=args.jobs)
    render_bench(rows)
    if args.output:
        settings = {
            "sizes": list(args.sizes),
            "repetitions": args.repetitions,
            "kind": args.kind,
            "seed": args.seed,
        }
        write_json(args.output, bench_payload(rows, settings))
        console.print(f"[dim]Wrote {args.output}[/dim]")


def run_render(args: argparse.Namespace) -> None:
    artifact = load_graph(args.graph)
    out: Path = args.out or args.graph.with_suffix(".svg")
    save_svg(artifact.graph, out)
    console.print(f"[green]✓ Wrote {out}[/green]")
