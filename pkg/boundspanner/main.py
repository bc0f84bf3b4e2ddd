"""Main entry point and argument parsing for boundspanner."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from rich.markup import escape

from boundspanner.artifacts import ArtifactError
from boundspanner.commands import run_bench, run_build, run_gen, run_render, run_verify
from boundspanner.config import GENERATOR_KINDS, ConfigError, console
from boundspanner.delaunay import DuplicatePointError, TooFewPointsError
from boundspanner.distributed import LivelockError
from boundspanner.geometry import DegenerateGeometryError
from boundspanner.points import PointInputError
from boundspanner.ui import show_help
from boundspanner.verify import VerificationFailure

EXIT_OK = 0
EXIT_OUTPUT = 1
EXIT_VERIFICATION = 2
EXIT_INPUT = 3

INPUT_ERRORS = (
    ConfigError,
    PointInputError,
    ArtifactError,
    DuplicatePointError,
    TooFewPointsError,
    DegenerateGeometryError,
)


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        msg = f"{text} is not a 64-bit unsigned integer"
        raise argparse.ArgumentTypeError(msg)
    return value


def add_build_parser(subparsers: argparse._SubParsersAction) -> None:
    """Add the `build` command parser to subparsers.

    Args:
        subparsers: The subparsers object from argparse
    """
    build = subparsers.add_parser("build", help="Build, verify and write a spanner")
    source = build.add_argument_group("input (a file or a generator)")
    source.add_argument("--input", type=Path, help="Point file: CSV 'x,y' lines or JSON")
    source.add_argument("--kind", choices=GENERATOR_KINDS, help="Generator kind")
    source.add_argument("--n", type=int, help="Number of generated points")
    build.add_argument("--seed", type=_seed, default=0, help="Generator and insertion seed")
    build.add_argument(
        "--algorithm",
        choices=["seq", "dist", "both"],
        default="seq",
        help="Sequential, distributed, or both with an identity check (default: seq)",
    )
    build.add_argument(
        "--schedule-seed", type=_seed, default=0, help="Seed of the distributed activation order"
    )
    build.add_argument(
        "--wedge-reading",
        choices=["literal", "inclusive"],
        default="literal",
        help="Index range used when adding wedge edges (default: literal)",
    )
    build.add_argument(
        "--threaded", action="store_true", help="Run the distributed construction on threads"
    )
    build.add_argument("--tolerance", type=float, help="Relative verification tolerance")
    build.add_argument("--cone-tolerance", type=float, help="Cone boundary tolerance")
    build.add_argument(
        "--lemma-trials",
        type=int,
        default=0,
        help="Sampled configurations per path-length inequality (default: 0, skip)",
    )
    build.add_argument("--graph", type=Path, help="Write the graph JSON here")
    build.add_argument("--report", type=Path, help="Write the verification report JSON here")
    build.add_argument("--svg", type=Path, help="Write an SVG drawing here")
    build.add_argument("--trace", type=Path, help="Write the distributed event trace here")


def add_gen_parser(subparsers: argparse._SubParsersAction) -> None:
    gen = subparsers.add_parser("gen", help="Generate a point set")
    gen.add_argument("--kind", choices=GENERATOR_KINDS, default="uniform")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=_seed, default=0)
    gen.add_argument("--out", type=Path, required=True, help="Output file (.json or .csv)")


def add_verify_parser(subparsers: argparse._SubParsersAction) -> None:
    verify = subparsers.add_parser("verify", help="Re-verify a saved graph")
    verify.add_argument("graph", type=Path, help="Graph JSON written by `build --graph`")
    verify.add_argument("--tolerance", type=float, help="Relative verification tolerance")
    verify.add_argument(
        "--cone-tolerance",
        type=float,
        help="Cone boundary tolerance (default: the value recorded in the graph)",
    )
    verify.add_argument("--lemma-trials", type=int, default=0)
    verify.add_argument("--report", type=Path, help="Write the verification report JSON here")


def add_bench_parser(subparsers: argparse._SubParsersAction) -> None:
    bench = subparsers.add_parser("bench", help="Time construction at several sizes")
    bench.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000])
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--kind", choices=GENERATOR_KINDS, default="uniform")
    bench.add_argument("--seed", type=_seed, default=0)
    bench.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    bench.add_argument("--output", type=Path, help="Write the bench JSON here")


def add_render_parser(subparsers: argparse._SubParsersAction) -> None:
    render = subparsers.add_parser("render", help="Draw a saved graph as SVG")
    render.add_argument("graph", type=Path)
    render.add_argument("--out", type=Path, help="SVG path (default: graph path with .svg)")


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="boundspanner",
        description="Bounded-degree plane spanners of Delaunay triangulations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")
    subparsers.add_parser("help", help="Show help information")
    add_gen_parser(subparsers)
    add_build_parser(subparsers)
    add_verify_parser(subparsers)
    add_bench_parser(subparsers)
    add_render_parser(subparsers)
    return parser.parse_args(argv)


HANDLERS = {
    "gen": run_gen,
    "build": run_build,
    "verify": run_verify,
    "bench": run_bench,
    "render": run_render,
}


def main(argv: list[str] | None = None) -> int:
    """Run one command and map its outcome to an exit status."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        # usage errors count as input errors
        return EXIT_INPUT if e.code else EXIT_OK
    handler = HANDLERS.get(args.command)
    if handler is None:
        show_help()
        return EXIT_OK
    try:
        handler(args)
    except (VerificationFailure, LivelockError) as e:
        console.print(f"\n[bold red]Error:[/bold red] {escape(str(e))}")
        return EXIT_VERIFICATION
    except INPUT_ERRORS as e:
        console.print(f"\n[bold red]Error:[/bold red] {escape(str(e))}")
        return EXIT_INPUT
    except OSError as e:
        # loaders report read failures as input errors; this is an output write
        console.print(f"\n[bold red]Error:[/bold red] could not write output: {escape(str(e))}")
        return EXIT_OUTPUT
    return EXIT_OK


def cli_main() -> None:
    """Entry point for console script."""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        # Clean exit on Ctrl+C - suppress ugly traceback
        console.print("\n\n[yellow]Interrupted[/yellow]")
        sys.exit(0)


if __name__ == "__main__":
    cli_main()
