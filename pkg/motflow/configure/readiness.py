"""Which required properties are still missing before emission."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from motflow.transform.graph import ComponentGraph
from motflow.transform.templates import Sensitivity, ValueType


@dataclass(frozen=True)
class PendingProperty:
    component_id: str
    property_name: str
    value_type: ValueType
    sensitivity: Sensitivity

    def to_dict(self) -> dict[str, str]:
        return {
            "component": self.component_id,
            "property": self.property_name,
            "type": self.value_type.value,
            "sensitivity": self.sensitivity.value,
        }


@dataclass
class ReadinessReport:
    ready: bool
    pending_required: list[PendingProperty] = field(default_factory=list)
    deferred_sensitive: list[PendingProperty] = field(default_factory=list)
    unset_guards: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ready": self.ready,
            "pending_required": [p.to_dict() for p in self.pending_required],
            "deferred_sensitive": [p.to_dict() for p in self.deferred_sensitive],
            "unset_guards": list(self.unset_guards),
        }


def required_properties(graph: ComponentGraph) -> list[PendingProperty]:
    """Unfilled required slots in graph order, then property order."""
    return [
        PendingProperty(c.id, s.name, s.spec.value_type, s.spec.sensitivity)
        for c in graph.components
        for s in c.slots
        if s.spec.required and not s.is_filled
    ]


def readiness(graph: ComponentGraph) -> ReadinessReport:
    """Deferred secrets and unset guards are reported but never block readiness."""
    pending = required_properties(graph)
    plain = [p for p in pending if p.sensitivity is Sensitivity.PLAIN]
    deferred = [p for p in pending if p.sensitivity is Sensitivity.DEFERRED]
    unset = [
        key for key in graph.guard_keys()
        if not any(e.guard is not None and e.guard.key == key and e.guard.is_set for e in graph.edges)
    ]
    return ReadinessReport(ready=not plain, pending_required=plain, deferred_sensitive=deferred, unset_guards=unset)
