"""Configuration manifests: declarative slot values and provisioning requests."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from motflow.errors import ManifestError, TypeMismatch, UnknownProperty
from motflow.providers.base import Binding, ProvisionRequest, ServiceKind
from motflow.transform.graph import EXTEND_PREFIX, Comparator, ComponentGraph
from motflow.transform.templates import value_matches
from motflow.utils import read_json_file

logger = logging.getLogger(__name__)

GUARD_PROPERTIES = ("threshold", "comparator", "property_name")


@dataclass(frozen=True)
class ConfigurationManifest:
    entries: dict[str, dict[str, Any]] = field(default_factory=dict)
    provisions: tuple[ProvisionRequest, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "entries": {k: dict(v) for k, v in self.entries.items()},
            "provisions": [p.to_dict() for p in self.provisions],
        }


def parse_manifest(raw: Any) -> ConfigurationManifest:
    if not isinstance(raw, dict):
        raise ManifestError("Manifest must be a JSON object with 'entries' and 'provisions'.")
    unknown = set(raw) - {"entries", "provisions"}
    if unknown:
        raise ManifestError(f"Unknown manifest key(s): {', '.join(sorted(unknown))}")

    entries = raw.get("entries", {})
    if not isinstance(entries, dict) or not all(isinstance(v, dict) for v in entries.values()):
        raise ManifestError("'entries' must map selectors to {property: value} objects.")

    provisions: list[ProvisionRequest] = []
    for idx, item in enumerate(raw.get("provisions", [])):
        if not isinstance(item, dict):
            raise ManifestError(f"Provision #{idx} is not an object.")
        name = item.get("instance_name")
        if not isinstance(name, str) or not name.strip():
            raise ManifestError(f"Provision #{idx} needs a non-empty 'instance_name'.")
        bind = item.get("bind_to")
        binding = None
        if bind is not None:
            if not isinstance(bind, dict) or not bind.get("component") or not bind.get("property"):
                raise ManifestError(f"Provision #{idx}: 'bind_to' needs 'component' and 'property'.")
            binding = Binding(str(bind["component"]), str(bind["property"]))
        provisions.append(
            ProvisionRequest(
                provider_id=str(item.get("provider", "mock")),
                service_kind=ServiceKind.parse(str(item.get("service_kind", ""))),
                instance_name=name,
                bind_to=binding,
            )
        )
    return ConfigurationManifest({k: dict(v) for k, v in entries.items()}, tuple(provisions))


def load_manifest(path: str | Path) -> ConfigurationManifest:
    try:
        raw = read_json_file(path, what="manifest")
    except json.JSONDecodeError as exc:
        raise ManifestError(f"Manifest '{path}' is not valid JSON: {exc}") from exc
    return parse_manifest(raw)


def _apply_guard(graph: ComponentGraph, selector: str, values: dict[str, Any]) -> ComponentGraph:
    key = graph.resolve_guard(selector)
    changes: dict[str, Any] = {}
    for prop, value in values.items():
        if prop not in GUARD_PROPERTIES:
            raise UnknownProperty(
                f"Guard '{selector}' has no property '{prop}' "
                f"(expected {', '.join(GUARD_PROPERTIES)})."
            )
        if prop == "threshold":
            if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                raise TypeMismatch(f"Guard threshold must be a number or text, got {value!r}.")
            changes["threshold"] = value
        elif not isinstance(value, str):
            raise TypeMismatch(f"Guard {prop} must be text, got {value!r}.")
        elif prop == "comparator":
            changes["comparator"] = Comparator.parse(value)
        else:
            changes["property_name"] = value
    return graph.with_guard(key, **changes)


def apply_manifest(graph: ComponentGraph, manifest: ConfigurationManifest) -> ComponentGraph:
    """Return a copy of *graph* with the manifest's values filled in.

    Raises:
        UnknownComponent: A selector matches no component or guard.
        UnknownProperty: A component has no slot of that name.
        TypeMismatch: A value does not match the slot's declared type.
    """
    for selector, values in manifest.entries.items():
        if selector.startswith(EXTEND_PREFIX):
            graph = _apply_guard(graph, selector, values)
            continue
        component = graph.resolve_component(selector)
        for prop, value in values.items():
            spec = component.slot(prop).spec
            if not value_matches(spec.value_type, value):
                raise TypeMismatch(
                    f"{selector}.{prop} expects {spec.value_type.value}, got {value!r}."
                )
            component = component.with_value(prop, value)
        graph = graph.with_component(component)
        logger.debug("Configured %s (%d value(s))", component.id, len(values))
    return graph
