"""XMI ingestion: parse exported use-case diagrams into a normalized model.

The accepted dialect is XMI 2.x with UML-namespaced elements as written by
Eclipse Papyrus (see ``docs/xmi-grammar.md``).  Stereotype applications are
top-level siblings of the ``uml:Model`` element carrying a ``base_UseCase``
attribute; other exporters are handled on a best-effort basis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from lxml import etree

from motflow.errors import DanglingReference, DuplicateId, IoFailure, MalformedXml, NotXmi
from motflow.model.profile import builtin_profile, normalize_stereotype_name

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Model types
# ---------------------------------------------------------------------------
class RelationshipKind(str, Enum):
    ASSOCIATION = "Association"
    INCLUDE = "Include"
    EXTEND = "Extend"


@dataclass(frozen=True)
class Actor:
    id: str
    name: str


@dataclass(frozen=True)
class UseCase:
    id: str
    name: str


@dataclass(frozen=True)
class Relationship:
    """A directed relationship.

    Include: source includes target.  Extend: source extends target.
    Association: source is the actor, target the use case.
    """

    id: str
    kind: RelationshipKind
    source_id: str
    target_id: str


@dataclass(frozen=True)
class StereotypeApplication:
    stereotype_name: str
    base_id: str
    base_attribute: str = "base_UseCase"


@dataclass(frozen=True)
class UmlModel:
    actors: tuple[Actor, ...] = ()
    use_cases: tuple[UseCase, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    applications: tuple[StereotypeApplication, ...] = ()
    source_tool: str | None = None
    name: str | None = None

    def use_case(self, element_id: str) -> UseCase | None:
        for uc in self.use_cases:
            if uc.id == element_id:
                return uc
        return None

    def element_kind(self, element_id: str) -> str | None:
        """Return ``"Actor"``, ``"UseCase"``, ``"Relationship"`` or ``None``."""
        if any(a.id == element_id for a in self.actors):
            return "Actor"
        if any(u.id == element_id for u in self.use_cases):
            return "UseCase"
        if any(r.id == element_id for r in self.relationships):
            return "Relationship"
        return None

    def applications_for(self, use_case_id: str) -> list[StereotypeApplication]:
        return [a for a in self.applications if a.base_id == use_case_id]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------
_XMI_MARKERS = ("omg.org/spec/XMI", "schema.omg.org/spec/XMI")
_UML_MARKERS = ("omg.org/spec/UML", "eclipse.org/uml2")
_PAPYRUS_MARKERS = ("eclipse.org/papyrus", "eclipse.org/uml2")


def _local(tag: object) -> str:
    if not isinstance(tag, str):
        return ""
    return etree.QName(tag).localname


def _namespace(tag: object) -> str:
    if not isinstance(tag, str):
        return ""
    return etree.QName(tag).namespace or ""


def _is_xmi_ns(uri: str) -> bool:
    return any(marker in uri for marker in _XMI_MARKERS)


def _is_uml_ns(uri: str) -> bool:
    return any(marker in uri for marker in _UML_MARKERS)


class _XmiReader:
    """Single document-order pass over a parsed XMI tree."""

    def __init__(self, root: etree._Element, stereotype_names: Iterable[str]) -> None:
        self.root = root
        self.known_stereotypes = set(stereotype_names)
        self.xmi_ns = self._find_xmi_namespace()
        self.actors: list[Actor] = []
        self.use_cases: list[UseCase] = []
        self.relationships: list[Relationship] = []
        self.applications: list[StereotypeApplication] = []
        self._property_types: dict[str, str] = {}

    def _find_xmi_namespace(self) -> str | None:
        for uri in (self.root.nsmap or {}).values():
            if uri and _is_xmi_ns(uri):
                return uri
        return None

    def _attr(self, elem: etree._Element, name: str) -> str | None:
        if self.xmi_ns is not None:
            value = elem.get(f"{{{self.xmi_ns}}}{name}")
            if value is not None:
                return value
        return elem.get(name)

    def _uml_type(self, elem: etree._Element) -> str | None:
        declared = self._attr(elem, "type")
        if declared and ":" in declared:
            return declared.split(":", 1)[1]
        if _is_uml_ns(_namespace(elem.tag)):
            return _local(elem.tag)
        return None

    # -- entry point ---------------------------------------------------------
    def read(self) -> UmlModel:
        root_local = _local(self.root.tag)
        root_ns = _namespace(self.root.tag)
        if root_local == "XMI" and _is_xmi_ns(root_ns):
            models = [
                child for child in self.root
                if _is_uml_ns(_namespace(child.tag)) and _local(child.tag) in ("Model", "Package")
            ]
            if not models:
                raise NotXmi("XMI document contains no uml:Model element.")
            model_roots = models
            top_level = [child for child in self.root if child not in models]
        elif _is_uml_ns(root_ns) and root_local in ("Model", "Package"):
            model_roots = [self.root]
            top_level = []
        else:
            raise NotXmi(
                f"Root element '{self.root.tag}' is neither xmi:XMI nor uml:Model."
            )

        for model_root in model_roots:
            self._index_properties(model_root)
        for model_root in model_roots:
            self._read_model(model_root)
        for elem in top_level:
            self._read_application(elem)

        model = UmlModel(
            actors=tuple(self.actors),
            use_cases=tuple(self.use_cases),
            relationships=tuple(self._oriented_relationships()),
            applications=tuple(self.applications),
            source_tool=self._source_tool(),
            name=model_roots[0].get("name"),
        )
        _check_references(model)
        return model

    def _oriented_relationships(self) -> list[Relationship]:
        # Associations are stored actor -> use case whatever the end order.
        actor_ids = {a.id for a in self.actors}
        oriented: list[Relationship] = []
        for rel in self.relationships:
            if (
                rel.kind is RelationshipKind.ASSOCIATION
                and rel.target_id in actor_ids
                and rel.source_id not in actor_ids
            ):
                rel = Relationship(rel.id, rel.kind, rel.target_id, rel.source_id)
            oriented.append(rel)
        return oriented

    # -- model elements ------------------------------------------------------
    def _index_properties(self, model_root: etree._Element) -> None:
        for elem in model_root.iter():
            if _local(elem.tag) in ("ownedEnd", "ownedAttribute"):
                prop_id = self._attr(elem, "id")
                prop_type = elem.get("type")
                if prop_id and prop_type:
                    self._property_types[prop_id] = prop_type

    def _read_model(self, model_root: etree._Element) -> None:
        for elem in model_root.iter():
            if not isinstance(elem.tag, str):
                continue
            kind = self._uml_type(elem)
            if kind == "Actor":
                self.actors.append(
                    Actor(id=self._required_id(elem), name=(elem.get("name") or "").strip())
                )
            elif kind == "UseCase":
                self.use_cases.append(
                    UseCase(id=self._required_id(elem), name=(elem.get("name") or "").strip())
                )
            elif kind == "Include":
                self._read_include(elem)
            elif kind == "Extend":
                self._read_extend(elem)
            elif kind == "Association":
                self._read_association(elem)

    def _required_id(self, elem: etree._Element) -> str:
        element_id = self._attr(elem, "id")
        if not element_id:
            raise NotXmi(f"Element '{_local(elem.tag)}' on line {elem.sourceline} has no xmi:id.")
        return element_id

    def _owner_id(self, elem: etree._Element) -> str:
        parent = elem.getparent()
        if parent is None or self._uml_type(parent) != "UseCase":
            raise DanglingReference(
                f"{_local(elem.tag)} '{self._attr(elem, 'id')}' is not owned by a use case."
            )
        return self._required_id(parent)

    def _read_include(self, elem: etree._Element) -> None:
        source = elem.get("includingCase") or self._owner_id(elem)
        target = elem.get("addition")
        if not target:
            raise DanglingReference(f"Include '{self._attr(elem, 'id')}' has no addition.")
        self.relationships.append(
            Relationship(self._required_id(elem), RelationshipKind.INCLUDE, source, target)
        )

    def _read_extend(self, elem: etree._Element) -> None:
        source = elem.get("extension") or self._owner_id(elem)
        target = elem.get("extendedCase")
        if not target:
            raise DanglingReference(f"Extend '{self._attr(elem, 'id')}' has no extendedCase.")
        self.relationships.append(
            Relationship(self._required_id(elem), RelationshipKind.EXTEND, source, target)
        )

    def _read_association(self, elem: etree._Element) -> None:
        end_types = [
            child.get("type")
            for child in elem
            if _local(child.tag) == "ownedEnd" and child.get("type")
        ]
        if len(end_types) < 2:
            for member in (elem.get("memberEnd") or "").split():
                member_type = self._property_types.get(member)
                if member_type and member_type not in end_types:
                    end_types.append(member_type)
        if len(end_types) != 2:
            logger.debug(
                "Skipping association %s: %d resolvable ends",
                self._attr(elem, "id"),
                len(end_types),
            )
            return
        self.relationships.append(
            Relationship(
                self._required_id(elem), RelationshipKind.ASSOCIATION, end_types[0], end_types[1]
            )
        )

    # -- stereotype applications ----------------------------------------------
    def _read_application(self, elem: etree._Element) -> None:
        if not isinstance(elem.tag, str):
            return
        ns = _namespace(elem.tag)
        if _is_xmi_ns(ns) or _is_uml_ns(ns):
            return
        base_attrs = [name for name in elem.attrib if str(name).startswith("base_")]
        if not base_attrs:
            return
        name = normalize_stereotype_name(_local(elem.tag))
        if "base_UseCase" in base_attrs:
            base_attr = "base_UseCase"
        elif name in self.known_stereotypes:
            base_attr = str(base_attrs[0])
        else:
            logger.debug("Skipping foreign stereotype application %s", name)
            return
        self.applications.append(
            StereotypeApplication(
                stereotype_name=name, base_id=elem.get(base_attr) or "", base_attribute=base_attr
            )
        )

    def _source_tool(self) -> str | None:
        for elem in self.root.iter():
            if _local(elem.tag) == "Documentation":
                exporter = elem.get("exporter")
                if exporter:
                    return exporter
        for uri in (self.root.nsmap or {}).values():
            if uri and any(marker in uri for marker in _PAPYRUS_MARKERS):
                return "Papyrus"
        return None


def _check_references(model: UmlModel) -> None:
    seen: set[str] = set()
    for element_id in (
        [a.id for a in model.actors]
        + [u.id for u in model.use_cases]
        + [r.id for r in model.relationships]
    ):
        if element_id in seen:
            raise DuplicateId(f"Element id '{element_id}' appears more than once.")
        seen.add(element_id)

    for rel in model.relationships:
        for endpoint in (rel.source_id, rel.target_id):
            if endpoint not in seen:
                raise DanglingReference(
                    f"{rel.kind.value} '{rel.id}' references missing element '{endpoint}'."
                )
    for app in model.applications:
        if app.base_id not in seen:
            raise DanglingReference(
                f"Stereotype application {app.stereotype_name} references missing "
                f"element '{app.base_id}'."
            )


def parse_xmi(document: bytes, *, stereotype_names: Iterable[str] | None = None) -> UmlModel:
    """Parse XMI bytes into a :class:`UmlModel`.

    Args:
        document: Raw XMI file contents (UTF-8 XML).
        stereotype_names: Names recognised for best-effort applications that
            lack a ``base_UseCase`` attribute.  Defaults to the built-in profile.

    Raises:
        MalformedXml: The bytes are not well-formed XML.
        NotXmi: No XMI/UML root could be recognised.
        DanglingReference: A relationship or application points at a missing id.
        DuplicateId: Two model elements share an id.
    """
    parser = etree.XMLParser(
        remove_comments=True, resolve_entities=False, no_network=True, huge_tree=False
    )
    try:
        root = etree.fromstring(document, parser=parser)
    except etree.XMLSyntaxError as exc:
        raise MalformedXml(f"Document is not well-formed XML: {exc}") from exc
    if root is None:
        raise MalformedXml("Document is empty.")

    names = stereotype_names if stereotype_names is not None else builtin_profile().names()
    model = _XmiReader(root, names).read()
    logger.info(
        "Parsed XMI: %d actors, %d use cases, %d relationships, %d applications",
        len(model.actors),
        len(model.use_cases),
        len(model.relationships),
        len(model.applications),
    )
    return model


def parse_xmi_file(path: str, **kwargs) -> UmlModel:
    """Convenience wrapper reading *path* before calling :func:`parse_xmi`."""
    try:
        with open(path, "rb") as f:
            document = f.read()
    except OSError as exc:
        raise IoFailure(f"Cannot read model '{path}': {exc.strerror or exc}") from exc
    return parse_xmi(document, **kwargs)
