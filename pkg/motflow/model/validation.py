"""Model validation: turn invariant violations into a report, never an exception."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from motflow.model.profile import ProfileRegistry
from motflow.model.xmi import RelationshipKind, UmlModel


class ValidationMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class Finding:
    """Single validation finding."""

    code: str
    severity: str
    message: str
    element_id: str | None = None

    def to_dict(self) -> dict[str, str | None]:
        return {
            "code": self.code,
            "severity": self.severity,
            "message": self.message,
            "element": self.element_id,
        }


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, element_id: str | None = None) -> None:
        self.errors.append(Finding(code, "error", message, element_id))

    def warn(self, code: str, message: str, element_id: str | None = None) -> None:
        self.warnings.append(Finding(code, "warning", message, element_id))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [f.to_dict() for f in self.errors],
            "warnings": [f.to_dict() for f in self.warnings],
        }


def validate_model(
    model: UmlModel,
    registry: ProfileRegistry,
    mode: ValidationMode = ValidationMode.STRICT,
) -> ValidationReport:
    """Check *model* against the structural rules and the active profile."""
    report = ValidationReport()
    kinds: dict[str, str] = {}

    # Ids and names
    counts = Counter(
        [a.id for a in model.actors]
        + [u.id for u in model.use_cases]
        + [r.id for r in model.relationships]
    )
    for element_id, count in counts.items():
        if count > 1:
            report.error("DuplicateId", f"Id '{element_id}' is used by {count} elements.", element_id)
    for actor in model.actors:
        kinds.setdefault(actor.id, "Actor")
        if not actor.name.strip():
            report.error("EmptyName", "Actor has an empty name.", actor.id)
    for uc in model.use_cases:
        kinds.setdefault(uc.id, "UseCase")
        if not uc.name.strip():
            report.error("EmptyName", "Use case has an empty name.", uc.id)
    for rel in model.relationships:
        kinds.setdefault(rel.id, "Relationship")

    # Relationships
    related: set[str] = set()
    flow_graph = nx.DiGraph()
    for rel in model.relationships:
        missing = [e for e in (rel.source_id, rel.target_id) if e not in kinds]
        if missing:
            report.error(
                "DanglingReference",
                f"{rel.kind.value} '{rel.id}' references missing element(s): {', '.join(missing)}.",
                rel.id,
            )
            continue
        related.update((rel.source_id, rel.target_id))
        source_kind, target_kind = kinds[rel.source_id], kinds[rel.target_id]
        if rel.kind is RelationshipKind.ASSOCIATION:
            if {source_kind, target_kind} != {"Actor", "UseCase"}:
                report.error(
                    "InvalidRelationship",
                    f"Association '{rel.id}' must connect an actor and a use case.",
                    rel.id,
                )
            continue
        if source_kind != "UseCase" or target_kind != "UseCase":
            report.error(
                "InvalidRelationship",
                f"{rel.kind.value} '{rel.id}' must connect two use cases.",
                rel.id,
            )
            continue
        # Messages flow from the including / extended use case outward.
        if rel.kind is RelationshipKind.INCLUDE:
            flow_graph.add_edge(rel.source_id, rel.target_id)
        else:
            flow_graph.add_edge(rel.target_id, rel.source_id)

    try:
        cycle = nx.find_cycle(flow_graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        path = " -> ".join([edge[0] for edge in cycle] + [cycle[-1][1]])
        report.error(
            "CyclicRelationship",
            f"Include/extend relationships form a cycle: {path}.",
            cycle[0][0],
        )

    # Stereotype applications
    per_use_case: dict[str, list[str]] = {}
    for app in model.applications:
        base_kind = kinds.get(app.base_id)
        if base_kind is None:
            report.error(
                "DanglingReference",
                f"Stereotype {app.stereotype_name} is applied to missing element '{app.base_id}'.",
                app.base_id,
            )
            continue
        if base_kind != "UseCase":
            report.error(
                "StereotypeTarget",
                f"Stereotype {app.stereotype_name} is applied to a {base_kind}; "
                "only use cases may carry MoT stereotypes.",
                app.base_id,
            )
            continue
        if app.stereotype_name not in registry:
            message = f"Stereotype '{app.stereotype_name}' is not in the profile."
            if mode is ValidationMode.STRICT:
                report.error("UnknownStereotype", message, app.base_id)
            else:
                report.warn("UnknownStereotype", message, app.base_id)
        names = per_use_case.setdefault(app.base_id, [])
        if app.stereotype_name in names:
            report.error(
                "DuplicateApplication",
                f"Stereotype {app.stereotype_name} is applied twice to the same use case.",
                app.base_id,
            )
        names.append(app.stereotype_name)

    for uc_id, names in per_use_case.items():
        if len(set(names)) > 1:
            report.warn(
                "MultipleStereotypes",
                f"Use case carries {len(set(names))} stereotypes; each expands independently.",
                uc_id,
            )

    for uc in model.use_cases:
        if uc.id not in per_use_case and uc.id not in related:
            report.warn(
                "UnusedUseCase",
                f"Use case '{uc.name}' has no stereotype and no relationship.",
                uc.id,
            )

    return report
