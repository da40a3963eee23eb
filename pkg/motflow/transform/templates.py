"""Component template repository, one JSON template per file.

Schema (see ``docs/templates.md``)::

    {"id": "sensor-subscribe", "kind": "composite",
     "children": ["node-mqtt-in", "node-json-parse"], "chain": true}

    {"id": "node-mqtt-in", "kind": "leaf", "node_kind": "mqtt-in",
     "properties": [{"name": "topic", "type": "Text", "required": true}]}

Composites may replace ``chain`` with ``"edges": [[0, 1], ...]`` over child
positions.  The file name must equal the template id plus ``.json``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import networkx as nx

from motflow.errors import IoFailure, TemplateSyntax, UnresolvedChild

logger = logging.getLogger(__name__)

BUILTIN_TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"


class ValueType(str, Enum):
    TEXT = "Text"
    INTEGER = "Integer"
    BOOLEAN = "Boolean"
    SECRET = "Secret"
    SERVICE_REF = "ServiceRef"


class Sensitivity(str, Enum):
    PLAIN = "Plain"
    DEFERRED = "DeferredSensitive"


class TemplateKind(str, Enum):
    COMPOSITE = "composite"
    LEAF = "leaf"


def value_matches(value_type: ValueType, value: Any) -> bool:
    """Return ``True`` if *value* is acceptable for a slot of *value_type*."""
    if value_type is ValueType.INTEGER:
        return isinstance(value, int) and not isinstance(value, bool)
    if value_type is ValueType.BOOLEAN:
        return isinstance(value, bool)
    return isinstance(value, str)


@dataclass(frozen=True)
class PropertySpec:
    name: str
    value_type: ValueType
    required: bool = False
    sensitivity: Sensitivity = Sensitivity.PLAIN
    default: Any = None

    def __post_init__(self) -> None:
        if self.value_type is ValueType.SECRET and self.sensitivity is not Sensitivity.DEFERRED:
            raise TemplateSyntax(f"Secret property '{self.name}' must be DeferredSensitive.")
        if self.default is not None and not value_matches(self.value_type, self.default):
            raise TemplateSyntax(
                f"Default {self.default!r} of property '{self.name}' is not a {self.value_type.value}."
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "type": self.value_type.value,
            "required": self.required,
            "sensitivity": self.sensitivity.value,
            "default": self.default,
        }

    @classmethod
    def from_dict(cls, raw: Any, where: str = "template") -> "PropertySpec":
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str) or not raw["name"]:
            raise TemplateSyntax(f"{where}: every property needs a non-empty 'name'.")
        try:
            value_type = ValueType(raw.get("type", "Text"))
        except ValueError:
            raise TemplateSyntax(
                f"{where}: property '{raw['name']}' has unknown type {raw.get('type')!r}."
            ) from None
        default_sensitivity = (
            Sensitivity.DEFERRED if value_type is ValueType.SECRET else Sensitivity.PLAIN
        )
        try:
            sensitivity = Sensitivity(raw.get("sensitivity", default_sensitivity.value))
        except ValueError:
            raise TemplateSyntax(
                f"{where}: property '{raw['name']}' has unknown sensitivity "
                f"{raw.get('sensitivity')!r}."
            ) from None
        return cls(
            name=raw["name"],
            value_type=value_type,
            required=bool(raw.get("required", False)),
            sensitivity=sensitivity,
            default=raw.get("default"),
        )


@dataclass(frozen=True)
class ComponentTemplate:
    id: str
    kind: TemplateKind
    children: tuple[str, ...] = ()
    node_kind: str | None = None
    properties: tuple[PropertySpec, ...] = ()
    chain: bool = False
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.kind is TemplateKind.COMPOSITE:
            if not self.children:
                raise TemplateSyntax(f"Composite template '{self.id}' has no children.")
            if self.properties or self.node_kind:
                raise TemplateSyntax(
                    f"Composite template '{self.id}' must not declare properties or node_kind."
                )
            for a, b in self.edges:
                if not (0 <= a < len(self.children) and 0 <= b < len(self.children)):
                    raise TemplateSyntax(
                        f"Template '{self.id}' edge [{a}, {b}] is out of range."
                    )
        else:
            if self.children or self.edges or self.chain:
                raise TemplateSyntax(f"Leaf template '{self.id}' must not declare children.")
            if not self.node_kind:
                raise TemplateSyntax(f"Leaf template '{self.id}' has no node_kind.")
            names = [p.name for p in self.properties]
            if len(names) != len(set(names)):
                raise TemplateSyntax(f"Leaf template '{self.id}' repeats a property name.")

    @property
    def is_leaf(self) -> bool:
        return self.kind is TemplateKind.LEAF

    @classmethod
    def from_dict(cls, raw: Any, where: str = "template") -> "ComponentTemplate":
        if not isinstance(raw, dict):
            raise TemplateSyntax(f"{where}: template must be a JSON object.")
        template_id = raw.get("id")
        if not isinstance(template_id, str) or not template_id:
            raise TemplateSyntax(f"{where}: missing string 'id'.")
        try:
            kind = TemplateKind(raw.get("kind"))
        except ValueError:
            raise TemplateSyntax(
                f"{where}: 'kind' must be 'composite' or 'leaf', got {raw.get('kind')!r}."
            ) from None

        children = raw.get("children", [])
        if not isinstance(children, list) or not all(isinstance(c, str) for c in children):
            raise TemplateSyntax(f"{where}: 'children' must be a list of template ids.")
        edges_raw = raw.get("edges", [])
        if not isinstance(edges_raw, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(i, int) for i in e)
            for e in edges_raw
        ):
            raise TemplateSyntax(f"{where}: 'edges' must be a list of [from, to] index pairs.")
        if raw.get("chain") and edges_raw:
            raise TemplateSyntax(f"{where}: use either 'chain' or 'edges', not both.")
        properties_raw = raw.get("properties", [])
        if not isinstance(properties_raw, list):
            raise TemplateSyntax(f"{where}: 'properties' must be a list.")

        return cls(
            id=template_id,
            kind=kind,
            children=tuple(children),
            node_kind=raw.get("node_kind"),
            properties=tuple(PropertySpec.from_dict(p, where) for p in properties_raw),
            chain=bool(raw.get("chain", False)),
            edges=tuple((a, b) for a, b in edges_raw),
        )


@dataclass(frozen=True)
class TemplateRepo:
    """Immutable mapping of template id to :class:`ComponentTemplate`."""

    templates: tuple[ComponentTemplate, ...] = ()
    _index: dict[str, ComponentTemplate] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index: dict[str, ComponentTemplate] = {}
        for t in self.templates:
            if t.id in index:
                raise TemplateSyntax(f"Template id '{t.id}' is defined twice.")
            index[t.id] = t
        object.__setattr__(self, "_index", index)

    def __contains__(self, template_id: object) -> bool:
        return template_id in self._index

    def __len__(self) -> int:
        return len(self.templates)

    def ids(self) -> list[str]:
        return [t.id for t in self.templates]

    def get(self, template_id: str) -> ComponentTemplate | None:
        return self._index.get(template_id)

    def dependency_graph(self) -> nx.DiGraph:
        """Composite → child edges over every template in the repository."""
        graph = nx.DiGraph()
        for t in self.templates:
            graph.add_node(t.id)
            for child in t.children:
                graph.add_edge(t.id, child)
        return graph

    def check_children(self) -> None:
        for t in self.templates:
            for child in t.children:
                if child not in self._index:
                    raise UnresolvedChild(
                        f"Template '{t.id}' references missing child '{child}'."
                    )


def _load_file(path: Path) -> ComponentTemplate:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"Cannot read template '{path}': {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise TemplateSyntax(f"{path.name}: invalid JSON ({exc.msg} at line {exc.lineno}).") from exc
    template = ComponentTemplate.from_dict(raw, where=path.name)
    if template.id != path.stem:
        raise TemplateSyntax(
            f"{path.name}: template id '{template.id}' does not match the file name."
        )
    return template


def load_templates(*repository_paths: str | Path) -> TemplateRepo:
    """Load every ``*.json`` template under the given directories.

    Later directories extend earlier ones; redefining an id is an error.
    Defaults to the built-in repository when no path is given.

    Raises:
        IoFailure: A directory does not exist or cannot be read.
        TemplateSyntax: A file is not valid JSON or violates the schema.
        UnresolvedChild: A composite references an id missing from the repo.
    """
    paths = [Path(p) for p in repository_paths] or [BUILTIN_TEMPLATE_DIR]
    templates: list[ComponentTemplate] = []
    for directory in paths:
        if not directory.is_dir():
            raise IoFailure(f"Template repository '{directory}' is not a directory.")
        for path in sorted(directory.glob("*.json")):
            templates.append(_load_file(path))
    repo = TemplateRepo(tuple(templates))
    repo.check_children()
    logger.debug("Loaded %d templates from %s", len(repo), ", ".join(str(p) for p in paths))
    return repo
