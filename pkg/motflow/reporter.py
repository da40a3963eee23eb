"""Component brief: the generated application components as a markdown page."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from motflow.configure.readiness import ReadinessReport, readiness
from motflow.transform.graph import ComponentGraph


def generate_report_markdown(graph: ComponentGraph, source_path: str) -> str:
    """Build a one-page markdown brief listing components per use case."""
    report = readiness(graph)
    status = "READY" if report.ready else "PENDING"

    lines: list[str] = []
    lines.append(f"# Component Brief: {graph.application}")
    lines.append("")
    lines.append(f"- Source graph: `{source_path}`")
    lines.append(f"- Use cases with components: `{len(graph.groups)}`")
    lines.append(f"- Components: `{len(graph.components)}`")
    lines.append(f"- Edges: `{len(graph.edges)}` ({_guarded(graph)} guarded)")
    lines.append("")
    lines.append("## Executive Summary")
    lines.append(f"- Configuration status: **{status}**")
    lines.append(f"- Required properties pending: `{len(report.pending_required)}`")
    lines.append(f"- Secrets deferred to customization: `{len(report.deferred_sensitive)}`")
    if graph.associations:
        actors = sorted({actor for actor, _ in graph.associations})
        lines.append(f"- Actors: {', '.join(f'`{a}`' for a in actors)}")
    lines.append("")
    lines.append("## Components")
    for group in graph.groups:
        lines.append(f"### {group.label}")
        lines.append("")
        lines.append("| Node kind | Stereotype | Template path | Configured |")
        lines.append("|---|---|---|---|")
        for cid in group.component_ids:
            component = graph.component(cid)
            filled = sum(1 for s in component.slots if s.is_filled)
            lines.append(
                f"| {component.node_kind} | {component.origin_stereotype} | "
                f"`{'/'.join(component.template_path)}` | {filled}/{len(component.slots)} |"
            )
        lines.append("")
    lines.append("## Connections")
    labels = {cid: g.label for g in graph.groups for cid in g.component_ids}
    crossing = [e for e in graph.edges if labels[e.source] != labels[e.target]]
    if crossing:
        for edge in crossing:
            rule = _guard_text(edge.guard.to_dict()) if edge.guard else "always"
            lines.append(f"- {labels[edge.source]} → {labels[edge.target]}: {rule}")
    else:
        lines.append("- No connections between use cases.")
    lines.append("")
    lines.append("## Pending Properties")
    lines.extend(_pending_lines(graph, report))
    lines.append("")
    return "\n".join(lines)


def default_report_path(graph_path: str) -> str:
    """Return the default brief path for a graph file."""
    p = Path(graph_path)
    return str(p.with_name(f"{p.stem}_brief.md"))


def _guarded(graph: ComponentGraph) -> int:
    return sum(1 for e in graph.edges if e.guard is not None)


def _guard_text(guard: dict[str, Any]) -> str:
    threshold = guard.get("threshold")
    if threshold is None:
        return f"when `{guard['property']}` {guard['comparator']} (threshold unset)"
    return f"when `{guard['property']}` {guard['comparator']} `{threshold}`"


def _pending_lines(graph: ComponentGraph, report: ReadinessReport) -> list[str]:
    if not report.pending_required and not report.deferred_sensitive:
        return ["- Nothing pending."]
    lines = []
    for item in report.pending_required:
        alias = graph.alias(graph.component(item.component_id))
        lines.append(f"- [REQUIRED] `{alias}.{item.property_name}` ({item.value_type.value})")
    for item in report.deferred_sensitive:
        alias = graph.alias(graph.component(item.component_id))
        lines.append(f"- [DEFERRED] `{alias}.{item.property_name}` (supply via credentials)")
    return lines
