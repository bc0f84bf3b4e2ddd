"""Rich rendering of spanner stats, verification reports, lemma results and bench tables."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich import box
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from boundspanner.config import BANNER, COLORS, COMMANDS, MAX_DEGREE, STRETCH_BOUND, console

if TYPE_CHECKING:
    from collections.abc import Sequence

    from boundspanner.bench import BenchRow
    from boundspanner.distributed import SimulationMetrics
    from boundspanner.lemmas import LemmaResult
    from boundspanner.spanner import SpannerStats
    from boundspanner.verify import VerificationReport


def _mark(ok: bool) -> str:  # noqa: FBT001
    return f"[{COLORS['ok']}]✓[/]" if ok else f"[{COLORS['error']}]✗[/]"


def render_stats(stats: SpannerStats, title: str = "Spanner") -> None:
    """Edge counts and the degree histogram."""
    table = Table(title=title, box=box.SIMPLE_HEAD, title_style=f"bold {COLORS['primary']}")
    table.add_column("Measure")
    table.add_column("Value", justify="right")
    table.add_row("core edges (E)", f"{stats.core:,}")
    table.add_row("wedge-only edges (E* \\ E)", f"{stats.wedge_only:,}")
    table.add_row("edges (E ∪ E*)", f"{stats.total:,}")
    table.add_row("max degree", f"{stats.max_degree} {_mark(stats.max_degree <= MAX_DEGREE)}")
    histogram = "  ".join(f"{d}:{c}" for d, c in sorted(stats.histogram.items()))
    table.add_row("degree histogram", histogram)
    console.print(table)


def render_metrics(metrics: SimulationMetrics) -> None:
    console.print(
        f"  [dim]distributed: {metrics.rounds} rounds, {metrics.pops:,} pops, "
        f"max wait {metrics.max_wait}, {metrics.candidates:,} candidates[/dim]"
    )


def render_report(report: VerificationReport) -> None:
    """Verification summary; failing rows are marked and the failures listed below."""
    table = Table(box=box.SIMPLE_HEAD, show_header=True)
    table.add_column("Check")
    table.add_column("Measured", justify="right")
    table.add_column("", justify="center")
    table.add_row("max degree", str(report.max_degree), _mark(report.max_degree <= MAX_DEGREE))
    table.add_row(
        "per-edge stretch",
        f"{report.per_edge_stretch_max:.10f}",
        _mark(report.per_edge_stretch_max <= STRETCH_BOUND * (1 + report.tolerance)),
    )
    sampled = f" ({report.ratio_sources} sources)" if report.ratios_sampled else ""
    table.add_row("global ratio" + sampled, f"{report.global_spanner_ratio:.10f}", "")
    table.add_row("Delaunay ratio δ", f"{report.dt_spanner_ratio:.10f}", "")
    table.add_row(
        "strong spanner (diagnostic)",
        f"{report.strong_worst_ratio:.6f}",
        "yes" if report.strong_spanner_diagnostic else "no",
    )
    missing = report.first_edge_missing
    table.add_row("missing first edges", str(len(missing)), _mark(not missing))
    table.add_row("charging exceptions", str(len(report.charging_exceptions)), "")
    if report.identity is not None:
        table.add_row("sequential = distributed", "", _mark(report.identity))

    style = COLORS["ok"] if report.passed else COLORS["error"]
    title = "Verification passed" if report.passed else "Verification FAILED"
    console.print(Panel(table, title=f"[bold]{title}[/bold]", border_style=style, box=box.ROUNDED))
    for reason in report.failures():
        console.print(f"  [{COLORS['error']}]• {escape(reason)}[/]")
    if report.lemma_suite:
        render_lemmas(report.lemma_suite)


def render_lemmas(results: Sequence[LemmaResult]) -> None:
    table = Table(title="Path-length inequalities", box=box.SIMPLE_HEAD)
    table.add_column("Check")
    table.add_column("Trials", justify="right")
    table.add_column("Worst margin", justify="right")
    table.add_column("", justify="center")
    for result in results:
        table.add_row(
            result.name, f"{result.trials:,}", f"{result.worst_margin:.3e}", _mark(result.passed)
        )
    console.print(table)


def render_bench(rows: Sequence[BenchRow]) -> None:
    table = Table(title="Scaling", box=box.SIMPLE_HEAD, title_style=f"bold {COLORS['primary']}")
    for column in ("n", "reps", "DT s", "seq s", "dist s", "pops", "pops/n", "rounds"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            f"{row.n:,}",
            str(row.repetitions),
            f"{row.dt_seconds:.4f}",
            f"{row.seq_seconds:.4f}",
            f"{row.dist_seconds:.4f}",
            f"{row.pops:,.0f}",
            f"{row.pops_per_point:.2f}",
            f"{row.rounds:.0f}",
        )
    console.print(table)


def show_help() -> None:
    """Show help information."""
    console.print()
    console.print(BANNER, style=f"bold {COLORS['primary']}")
    console.print()

    console.print("[bold]Usage:[/bold]", style=COLORS["primary"])
    for name, description in COMMANDS.items():
        console.print(f"  boundspanner {name:<10} {description}")
    console.print()

    console.print("[bold]Examples:[/bold]", style=COLORS["primary"])
    examples = [
        ("boundspanner gen --kind ring --n 200 --out ring.json", "Near-cocircular points"),
        ("boundspanner build --kind uniform --n 500 --algorithm both", "Build and compare"),
        ("boundspanner build --input pts.csv --graph g.json --svg g.svg", "Build from a file"),
        ("boundspanner verify g.json --lemma-trials 10000", "Re-check a saved graph"),
        ("boundspanner bench --sizes 1000 2000 4000 --jobs 4", "Scaling table"),
    ]
    for command, note in examples:
        console.print(f"  {command:<62} # {note}", style=COLORS["dim"])
    console.print()

    console.print("[bold]Environment:[/bold]", style=COLORS["primary"])
    console.print("  BOUNDSPANNER_TOLERANCE        Relative verification tolerance (1e-9)")
    console.print("  BOUNDSPANNER_CONE_TOLERANCE   Cone boundary tolerance (1e-12)")
    console.print("  BOUNDSPANNER_MAX_SOURCES      Sources before global ratios are sampled (2000)")
    console.print()
