"""Analyzer module: loads simulation traces and generates matplotlib plots.

Provides the plots behind ``motflow analyze``: dashboard values over virtual
time and event counts per sink.
"""

from __future__ import annotations

import json
import logging
import os
from typing import Any

from motflow.errors import ScenarioError
from motflow.utils import read_json_file

logger = logging.getLogger(__name__)


def load_trace(path: str) -> dict[str, Any]:
    """Load a trace JSON file written by ``motflow simulate``.

    Raises:
        IoFailure: If *path* cannot be read.
        ScenarioError: If the file is not valid JSON.
    """
    try:
        return read_json_file(path, what="trace")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"Trace '{path}' is not valid JSON: {exc}") from exc


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_dashboard(data: dict[str, Any], output_dir: str) -> str:
    """Plot each dashboard widget's numeric values against virtual time.

    Returns:
        Path to the saved PNG file, or ``""`` when there is nothing to plot.
    """
    series: dict[str, list[tuple[int, float]]] = {}
    for event in data.get("dashboard", []):
        value = event.get("value")
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            series.setdefault(event["widget"], []).append((event["time"], float(value)))
    if not series:
        logger.warning("No numeric dashboard data to plot.")
        return ""

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(10, 5))
    for widget, points in series.items():
        ax.plot([t for t, _ in points], [v for _, v in points], marker="o", linewidth=1, label=widget)
    ax.set_xlabel("Virtual time (ms)")
    ax.set_ylabel("Value")
    ax.set_title("Dashboard Updates")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    out_path = os.path.join(output_dir, "dashboard.png")
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_sink_counts(data: dict[str, Any], output_dir: str) -> str:
    """Bar chart of events per sink kind, drops included."""
    kinds = ["db_records", "dashboard", "emails", "published", "social", "dropped"]
    counts = [len(data.get(k, [])) for k in kinds]
    if not any(counts):
        logger.warning("Trace holds no events.")
        return ""

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4))
    colors = ["#4f8ff7"] * (len(kinds) - 1) + ["#f7734f"]
    ax.bar(kinds, counts, color=colors)
    ax.set_ylabel("Events")
    ax.set_title("Events per Sink")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()

    out_path = os.path.join(output_dir, "sinks.png")
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
