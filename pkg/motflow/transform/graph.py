"""Platform-independent component graph and its JSON persistence."""

from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

from motflow.errors import GraphFormatError, TemplateSyntax, UnknownComponent, UnknownProperty
from motflow.transform.templates import PropertySpec, Sensitivity
from motflow.utils import canonical_json, read_json_file

SCHEMA_VERSION = 1
EXTEND_PREFIX = "extend:"


class Comparator(str, Enum):
    GT = "GT"
    GE = "GE"
    LT = "LT"
    LE = "LE"
    EQ = "EQ"
    NE = "NE"

    @classmethod
    def parse(cls, value: str) -> "Comparator":
        name = value.strip().upper()
        try:
            return cls(_ALIASES.get(name, name))
        except ValueError:
            raise UnknownProperty(
                f"Unknown comparator '{value}'. Expected one of: "
                + ", ".join(m.value for m in cls)
            ) from None

    def holds(self, lhs: Any, rhs: Any) -> bool:
        """Compare numerically when both sides coerce to numbers.

        Non-numeric operands only support EQ/NE (string comparison); the
        ordering comparators return ``False`` for them.
        """
        a, b = as_number(lhs), as_number(rhs)
        if a is None or b is None:
            if self not in (Comparator.EQ, Comparator.NE) or lhs is None or rhs is None:
                return False
            a, b = str(lhs), str(rhs)
        return _OPS[self](a, b)


_ALIASES = {"GTE": "GE", "LTE": "LE", "NEQ": "NE"}

_OPS = {
    Comparator.GT: operator.gt,
    Comparator.GE: operator.ge,
    Comparator.LT: operator.lt,
    Comparator.LE: operator.le,
    Comparator.EQ: operator.eq,
    Comparator.NE: operator.ne,
}


def as_number(value: Any) -> float | None:
    if isinstance(value, bool) or value is None:
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value.strip())
        except ValueError:
            return None
    return None


@dataclass(frozen=True)
class GuardSpec:
    """Condition attached to an extend edge."""

    key: str
    property_name: str = "payload"
    comparator: Comparator = Comparator.GT
    threshold: int | float | str | None = None

    @property
    def is_set(self) -> bool:
        return self.threshold is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "property": self.property_name,
            "comparator": self.comparator.value,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class Slot:
    spec: PropertySpec
    value: Any = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def is_filled(self) -> bool:
        return self.value is not None

    @property
    def is_deferred(self) -> bool:
        return self.spec.sensitivity is Sensitivity.DEFERRED


@dataclass(frozen=True)
class AbstractComponent:
    id: str
    origin_use_case: str
    origin_stereotype: str
    node_kind: str
    template_path: tuple[str, ...]
    ordinal: int
    slots: tuple[Slot, ...] = ()

    def slot(self, name: str) -> Slot:
        for s in self.slots:
            if s.name == name:
                return s
        raise UnknownProperty(f"Component '{self.id}' has no property '{name}'.")

    def with_value(self, name: str, value: Any) -> "AbstractComponent":
        self.slot(name)
        slots = tuple(replace(s, value=value) if s.name == name else s for s in self.slots)
        return replace(self, slots=slots)


@dataclass(frozen=True)
class ComponentEdge:
    """Directed connection between components.

    A guarded edge stands for a whole extend: ``fan_in`` holds the other
    terminals of the extended use case and ``fan_out`` the other entries of
    the extending one, so each extend is one edge and one switch.
    """

    source: str
    target: str
    guard: GuardSpec | None = None
    fan_in: tuple[str, ...] = ()
    fan_out: tuple[str, ...] = ()

    @property
    def sources(self) -> tuple[str, ...]:
        return (self.source, *self.fan_in)

    @property
    def targets(self) -> tuple[str, ...]:
        return (self.target, *self.fan_out)


@dataclass(frozen=True)
class ComponentGroup:
    use_case_id: str
    label: str
    component_ids: tuple[str, ...]


@dataclass(frozen=True)
class ComponentGraph:
    components: tuple[AbstractComponent, ...]
    edges: tuple[ComponentEdge, ...]
    groups: tuple[ComponentGroup, ...]
    application: str = "mot-application"
    associations: tuple[tuple[str, str], ...] = ()
    _by_id: dict[str, AbstractComponent] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {c.id: c for c in self.components})

    def component(self, component_id: str) -> AbstractComponent:
        try:
            return self._by_id[component_id]
        except KeyError:
            raise UnknownComponent(f"No component with id '{component_id}'.") from None

    def group_of(self, component_id: str) -> ComponentGroup:
        for group in self.groups:
            if component_id in group.component_ids:
                return group
        raise UnknownComponent(f"Component '{component_id}' belongs to no group.")

    def alias(self, component: AbstractComponent) -> str:
        return f"{self.group_of(component.id).label}/{component.node_kind}"

    def resolve_component(self, selector: str) -> AbstractComponent:
        """Find a component by id or by its ``<use case name>/<node_kind>`` alias."""
        if selector in self._by_id:
            return self._by_id[selector]
        matches = [c for c in self.components if self.alias(c) == selector]
        if len(matches) == 1:
            return matches[0]
        if matches:
            raise UnknownComponent(
                f"Selector '{selector}' is ambiguous ({len(matches)} components); use a component id."
            )
        raise UnknownComponent(f"No component matches '{selector}'.")

    def guard_keys(self) -> list[str]:
        keys: list[str] = []
        for edge in self.edges:
            if edge.guard is not None and edge.guard.key not in keys:
                keys.append(edge.guard.key)
        return keys

    def resolve_guard(self, selector: str) -> str:
        """Map ``extend:<a>-><b>`` (use case ids or names) to the stored guard key."""
        if not selector.startswith(EXTEND_PREFIX) or "->" not in selector:
            raise UnknownComponent(f"'{selector}' is not a guard selector.")
        source, _, target = selector[len(EXTEND_PREFIX):].partition("->")
        key = f"{EXTEND_PREFIX}{self._use_case_ref(source)}->{self._use_case_ref(target)}"
        if key not in self.guard_keys():
            raise UnknownComponent(f"No extend relationship matches '{selector}'.")
        return key

    def _use_case_ref(self, ref: str) -> str:
        ref = ref.strip()
        for group in self.groups:
            if group.use_case_id == ref:
                return ref
        named = [g.use_case_id for g in self.groups if g.label == ref]
        return named[0] if len(named) == 1 else ref

    def with_component(self, component: AbstractComponent) -> "ComponentGraph":
        components = tuple(component if c.id == component.id else c for c in self.components)
        return replace(self, components=components)

    def with_guard(self, key: str, **changes: Any) -> "ComponentGraph":
        edges = tuple(
            replace(e, guard=replace(e.guard, **changes))
            if e.guard is not None and e.guard.key == key
            else e
            for e in self.edges
        )
        return replace(self, edges=edges)


# ---------------------------------------------------------------------------
# JSON persistence
# ---------------------------------------------------------------------------
def _edge_to_dict(edge: ComponentEdge) -> dict[str, Any]:
    raw: dict[str, Any] = {
        "source": edge.source,
        "target": edge.target,
        "guard": edge.guard.to_dict() if edge.guard else None,
    }
    if edge.fan_in:
        raw["fan_in"] = list(edge.fan_in)
    if edge.fan_out:
        raw["fan_out"] = list(edge.fan_out)
    return raw


def graph_to_dict(graph: ComponentGraph) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "application": graph.application,
        "components": [
            {
                "id": c.id,
                "use_case": c.origin_use_case,
                "stereotype": c.origin_stereotype,
                "node_kind": c.node_kind,
                "template_path": list(c.template_path),
                "ordinal": c.ordinal,
                "slots": [dict(s.spec.to_dict(), value=s.value) for s in c.slots],
            }
            for c in graph.components
        ],
        "edges": [_edge_to_dict(e) for e in graph.edges],
        "groups": [
            {"use_case": g.use_case_id, "label": g.label, "components": list(g.component_ids)}
            for g in graph.groups
        ],
        "associations": [list(a) for a in graph.associations],
    }


def graph_from_dict(raw: Any) -> ComponentGraph:
    if not isinstance(raw, dict) or raw.get("schema_version") != SCHEMA_VERSION:
        raise GraphFormatError(
            f"Expected a component graph with schema_version {SCHEMA_VERSION}."
        )
    try:
        components = tuple(
            AbstractComponent(
                id=c["id"],
                origin_use_case=c["use_case"],
                origin_stereotype=c["stereotype"],
                node_kind=c["node_kind"],
                template_path=tuple(c["template_path"]),
                ordinal=int(c["ordinal"]),
                slots=tuple(
                    Slot(PropertySpec.from_dict(s, where=c["id"]), s.get("value"))
                    for s in c["slots"]
                ),
            )
            for c in raw["components"]
        )
        edges = tuple(
            ComponentEdge(
                e["source"],
                e["target"],
                GuardSpec(
                    key=e["guard"]["key"],
                    property_name=e["guard"].get("property", "payload"),
                    comparator=Comparator.parse(str(e["guard"].get("comparator", "GT"))),
                    threshold=e["guard"].get("threshold"),
                )
                if e.get("guard")
                else None,
                fan_in=tuple(e.get("fan_in", ())),
                fan_out=tuple(e.get("fan_out", ())),
            )
            for e in raw["edges"]
        )
        groups = tuple(
            ComponentGroup(g["use_case"], g["label"], tuple(g["components"]))
            for g in raw["groups"]
        )
        associations = tuple((a[0], a[1]) for a in raw.get("associations", []))
        application = str(raw.get("application", "mot-application"))
    except (KeyError, TypeError, ValueError, IndexError, TemplateSyntax, UnknownProperty) as exc:
        raise GraphFormatError(f"Malformed component graph: {exc}") from exc

    graph = ComponentGraph(components, edges, groups, application, associations)
    known = {c.id for c in components}
    for edge in edges:
        if not known.issuperset(edge.sources + edge.targets):
            raise GraphFormatError(f"Edge {edge.source} -> {edge.target} names an unknown component.")
    return graph


def dump_graph(graph: ComponentGraph) -> str:
    return canonical_json(graph_to_dict(graph))


def load_graph(path: str | Path) -> ComponentGraph:
    try:
        raw = read_json_file(path, what="component graph")
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"Component graph '{path}' is not valid JSON: {exc}") from exc
    return graph_from_dict(raw)
