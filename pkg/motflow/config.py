"""Pipeline configuration and logging setup."""

from __future__ import annotations

import logging
import os
import sys
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from motflow.errors import IoFailure
from motflow.transform.templates import BUILTIN_TEMPLATE_DIR

ENV_TEMPLATE_DIR = "MOT_TEMPLATE_DIR"
DEFAULT_OUTPUT_DIR = "mot-out"

GRAPH_FILE = "graph.json"
CONFIGURED_GRAPH_FILE = "configured_graph.json"
SERVICES_FILE = "services.json"
MANIFEST_FILE = "manifest.json"
PACKAGE_DIR = "package"
TRACE_FILE = "trace.json"


def default_template_paths(environ: Mapping[str, str] | None = None) -> tuple[Path, ...]:
    """``MOT_TEMPLATE_DIR`` (``os.pathsep``-separated) or the built-in repository."""
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_TEMPLATE_DIR, "").strip()
    if raw:
        return tuple(Path(p) for p in raw.split(os.pathsep) if p)
    return (BUILTIN_TEMPLATE_DIR,)


@dataclass(frozen=True)
class PipelineConfig:
    model_path: Path | None = None
    template_paths: tuple[Path, ...] = (BUILTIN_TEMPLATE_DIR,)
    profile_extension_path: Path | None = None
    manifest_path: Path | None = None
    credentials_path: Path | None = None
    scenario_path: Path | None = None
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    strict: bool = False
    local_only: bool = False

    def check_paths(self) -> None:
        """Fail fast with :class:`IoFailure` before any stage runs."""
        files = {
            "model": self.model_path,
            "profile extension": self.profile_extension_path,
            "manifest": self.manifest_path,
            "credentials": self.credentials_path,
            "scenario": self.scenario_path,
        }
        for what, path in files.items():
            if path is not None and not path.is_file():
                raise IoFailure(f"{what.capitalize()} file '{path}' does not exist.")
        for directory in self.template_paths:
            if not directory.is_dir():
                raise IoFailure(f"Template repository '{directory}' is not a directory.")
        if self.output_dir.exists() and not self.output_dir.is_dir():
            raise IoFailure(f"Output path '{self.output_dir}' is not a directory.")

    @property
    def graph_file(self) -> Path:
        return self.output_dir / GRAPH_FILE

    @property
    def configured_graph_file(self) -> Path:
        return self.output_dir / CONFIGURED_GRAPH_FILE

    @property
    def package_dir(self) -> Path:
        return self.output_dir / PACKAGE_DIR


def configure_logging(verbose: bool = False) -> None:
    """Send log records to stderr, through ``rich`` when it is installed."""
    level = logging.DEBUG if verbose else logging.WARNING
    try:
        from rich.console import Console
        from rich.logging import RichHandler

        handler: logging.Handler = RichHandler(
            console=Console(stderr=True), show_path=False, rich_tracebacks=False
        )
        fmt = "%(message)s"
    except ImportError:
        handler = logging.StreamHandler(sys.stderr)
        fmt = "%(levelname)s %(name)s: %(message)s"
    handler.setFormatter(logging.Formatter(fmt))
    root = logging.getLogger("motflow")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False
