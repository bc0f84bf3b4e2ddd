"""Configuration, constants, and run settings for the CLI."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import dotenv
from rich.console import Console

dotenv.load_dotenv()

# Color scheme
COLORS = {
    "primary": "#0ea5e9",
    "dim": "#6b7280",
    "ok": "#10b981",
    "warn": "#fbbf24",
    "error": "#ef4444",
    "core": "#111827",
    "wedge": "#0ea5e9",
}

BANNER = r"""
  _                           _
 | |__   ___  _   _ _ __   __| |  ___ _ __   __ _ _ __  _ __   ___ _ __
 | '_ \ / _ \| | | | '_ \ / _` | / __| '_ \ / _` | '_ \| '_ \ / _ \ '__|
 | |_) | (_) | |_| | | | | (_| | \__ \ |_) | (_| | | | | | | |  __/ |
 |_.__/ \___/ \__,_|_| |_|\__,_| |___/ .__/ \__,_|_| |_|_| |_|\___|_|
                                     |_|
"""

# Subcommands shown by `boundspanner help`
COMMANDS = {
    "gen": "Generate a point set and write it as JSON or CSV",
    "build": "Build the spanner, verify it, and write graph/report artifacts",
    "verify": "Re-verify a saved graph against a fresh Delaunay triangulation",
    "bench": "Time triangulation, sequential and distributed construction",
    "render": "Render a saved graph as SVG",
    "help": "Show help information",
}

# Geometry and verification constants
CONE_COUNT = 8
CONE_WIDTH = math.pi / 4
STRETCH_BOUND = (1 + math.sqrt(2)) ** 2
CONE_CONSTANT = 1 / (1 - 2 * math.sin(math.pi / 8))
MAX_DEGREE = 7

DEFAULT_CONE_TOLERANCE = 1e-12
DEFAULT_RELATIVE_TOLERANCE = 1e-9
DEFAULT_MAX_SOURCES = 2000

GRAPH_SCHEMA = "boundspanner.graph/1"
REPORT_SCHEMA = "boundspanner.report/1"
BENCH_SCHEMA = "boundspanner.bench/1"

Algorithm = Literal["seq", "dist", "both"]
WedgeReading = Literal["literal", "inclusive"]
GeneratorKind = Literal["uniform", "grid-jitter", "clusters", "ring"]

GENERATOR_KINDS: tuple[str, ...] = ("uniform", "grid-jitter", "clusters", "ring")
SEED_LIMIT = 2**64

# Rich console instance
console = Console(highlight=False)


class ConfigError(ValueError):
    """A run was configured with inconsistent or out-of-range settings."""


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        console.print(f"[yellow]⚠ Ignoring {name}={raw!r}: not a number[/yellow]")
        return default
    if not math.isfinite(value) or value < 0:
        console.print(f"[yellow]⚠ Ignoring {name}={raw!r}: must be finite and >= 0[/yellow]")
        return default
    return value


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances shared by the geometry and verification layers."""

    cone: float = DEFAULT_CONE_TOLERANCE
    relative: float = DEFAULT_RELATIVE_TOLERANCE

    def __post_init__(self) -> None:
        for name in ("cone", "relative"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                msg = f"{name} tolerance must be finite and >= 0, got {value}"
                raise ConfigError(msg)

    @classmethod
    def from_env(cls) -> Tolerances:
        """Read defaults from BOUNDSPANNER_CONE_TOLERANCE / BOUNDSPANNER_TOLERANCE."""
        return cls(
            cone=_env_float("BOUNDSPANNER_CONE_TOLERANCE", DEFAULT_CONE_TOLERANCE),
            relative=_env_float("BOUNDSPANNER_TOLERANCE", DEFAULT_RELATIVE_TOLERANCE),
        )


def default_max_sources() -> int:
    """Source-count threshold above which global ratios are sampled."""
    return int(_env_float("BOUNDSPANNER_MAX_SOURCES", DEFAULT_MAX_SOURCES))


@dataclass
class RunConfig:
    """Everything `build` needs: input source, algorithm choice, and output paths."""

    input_path: Path | None = None
    kind: str | None = None
    n: int | None = None
    seed: int = 0
    algorithm: Algorithm = "seq"
    schedule_seed: int = 0
    wedge_reading: WedgeReading = "literal"
    tolerances: Tolerances = field(default_factory=Tolerances.from_env)
    graph_path: Path | None = None
    report_path: Path | None = None
    svg_path: Path | None = None
    trace_path: Path | None = None
    lemma_trials: int = 0
    threaded: bool = False

    def validate(self) -> None:
        """Check the invariants the pipeline relies on.

        Raises:
            ConfigError: On any inconsistent or out-of-range setting.
        """
        has_file = self.input_path is not None
        has_generator = self.kind is not None or self.n is not None
        if has_file == has_generator:
            msg = "exactly one input source is required: --input FILE or --kind/--n"
            raise ConfigError(msg)
        if has_generator:
            if self.kind not in GENERATOR_KINDS:
                msg = f"unknown generator kind {self.kind!r}; expected one of {GENERATOR_KINDS}"
                raise ConfigError(msg)
            if self.n is None or self.n < 2:  # noqa: PLR2004
                msg = f"n must be >= 2, got {self.n}"
                raise ConfigError(msg)
        for name in ("seed", "schedule_seed"):
            value = getattr(self, name)
            if not 0 <= value < SEED_LIMIT:
                msg = f"{name} must be a 64-bit unsigned integer, got {value}"
                raise ConfigError(msg)
        if self.algorithm not in ("seq", "dist", "both"):
            msg = f"unknown algorithm {self.algorithm!r}"
            raise ConfigError(msg)
        if self.wedge_reading not in ("literal", "inclusive"):
            msg = f"unknown wedge reading {self.wedge_reading!r}"
            raise ConfigError(msg)
        if self.lemma_trials < 0:
            msg = "lemma trials must be >= 0"
            raise ConfigError(msg)
