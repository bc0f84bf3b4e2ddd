"""boundspanner - bounded-degree plane spanners of Delaunay triangulations."""

from boundspanner.main import cli_main

__all__ = ["cli_main"]
