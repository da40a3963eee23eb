"""UML model → component graph."""

from __future__ import annotations

import logging

from motflow.errors import EmptyGraph, InvalidModel, NoApplicableTemplate
from motflow.model.profile import ProfileRegistry
from motflow.model.validation import ValidationMode, validate_model
from motflow.model.xmi import RelationshipKind, UmlModel
from motflow.transform.expander import expand
from motflow.transform.graph import (
    EXTEND_PREFIX,
    AbstractComponent,
    ComponentEdge,
    ComponentGraph,
    ComponentGroup,
    GuardSpec,
    Slot,
)
from motflow.transform.templates import TemplateRepo
from motflow.utils import slugify

logger = logging.getLogger(__name__)


def component_id(use_case_id: str, stereotype: str, ordinal: int, template_path: tuple[str, ...]) -> str:
    return f"{use_case_id}:{stereotype}:{ordinal}:{'/'.join(template_path)}"


def transform_model(
    model: UmlModel,
    registry: ProfileRegistry,
    repo: TemplateRepo,
    mode: ValidationMode = ValidationMode.STRICT,
) -> ComponentGraph:
    """Expand every stereotype application and wire use cases together.

    Include(A → B) links A's terminals to B's entries.  Extend(B → A) links
    A's terminals to B's entries through a single guarded edge keyed
    ``extend:<B>-><A>``, whatever the number of terminals and entries; its
    threshold is left for configuration.  Relationships that touch a
    use case without applications contribute no edges.

    Raises:
        InvalidModel: Validation reported errors.
        NoApplicableTemplate: A stereotype's template is not in *repo*.
        EmptyGraph: No application produced a component.
    """
    report = validate_model(model, registry, mode)
    if not report.ok:
        detail = "; ".join(f"{f.code}: {f.message}" for f in report.errors[:3])
        raise InvalidModel(f"Model has {len(report.errors)} validation error(s): {detail}")
    for finding in report.warnings:
        logger.warning("%s: %s", finding.code, finding.message)
    if not model.applications:
        raise EmptyGraph("The model applies no MoT stereotype; nothing to transform.")

    components: list[AbstractComponent] = []
    edges: list[ComponentEdge] = []
    groups: list[ComponentGroup] = []
    boundary: dict[str, tuple[list[str], list[str]]] = {}

    for uc in model.use_cases:
        member_ids: list[str] = []
        entries: list[str] = []
        terminals: list[str] = []
        for app in model.applications_for(uc.id):
            if app.stereotype_name not in registry:
                logger.warning("Skipping unknown stereotype %s on '%s'", app.stereotype_name, uc.name)
                continue
            stereotype = registry.lookup(app.stereotype_name)
            if stereotype.template_id not in repo:
                raise NoApplicableTemplate(
                    f"Stereotype {stereotype.name} needs template '{stereotype.template_id}', "
                    "which is not in the repository."
                )
            expansion = expand(stereotype.template_id, repo)
            ids = [
                component_id(uc.id, stereotype.name, ordinal, proto.template_path)
                for ordinal, proto in enumerate(expansion.prototypes)
            ]
            for ordinal, proto in enumerate(expansion.prototypes):
                components.append(
                    AbstractComponent(
                        id=ids[ordinal],
                        origin_use_case=uc.id,
                        origin_stereotype=stereotype.name,
                        node_kind=proto.node_kind,
                        template_path=proto.template_path,
                        ordinal=ordinal,
                        slots=tuple(Slot(spec, spec.default) for spec in proto.properties),
                    )
                )
            edges.extend(ComponentEdge(ids[a], ids[b]) for a, b in expansion.edges)
            member_ids.extend(ids)
            entries.extend(ids[i] for i in expansion.entries)
            terminals.extend(ids[i] for i in expansion.terminals)
        if member_ids:
            groups.append(ComponentGroup(uc.id, uc.name, tuple(member_ids)))
            boundary[uc.id] = (entries, terminals)

    if not components:
        raise EmptyGraph("No stereotype application expanded to a component.")

    for rel in model.relationships:
        if rel.kind is RelationshipKind.INCLUDE:
            upstream, downstream, guard = rel.source_id, rel.target_id, None
        elif rel.kind is RelationshipKind.EXTEND:
            upstream, downstream = rel.target_id, rel.source_id
            guard = GuardSpec(key=f"{EXTEND_PREFIX}{rel.source_id}->{rel.target_id}")
        else:
            continue
        if upstream not in boundary or downstream not in boundary:
            logger.info("%s '%s' joins a use case without components; no edge", rel.kind.value, rel.id)
            continue
        terminals, entries = boundary[upstream][1], boundary[downstream][0]
        if not terminals or not entries:
            continue
        if guard is not None:
            edges.append(
                ComponentEdge(
                    terminals[0], entries[0], guard,
                    fan_in=tuple(terminals[1:]), fan_out=tuple(entries[1:]),
                )
            )
            continue
        edges.extend(ComponentEdge(s, t) for s in terminals for t in entries)

    actor_names = {a.id: a.name for a in model.actors}
    associations = tuple(
        (actor_names[rel.source_id], rel.target_id)
        for rel in model.relationships
        if rel.kind is RelationshipKind.ASSOCIATION and rel.source_id in actor_names
    )

    graph = ComponentGraph(
        components=tuple(components),
        edges=tuple(edges),
        groups=tuple(groups),
        application=slugify(model.name or ""),
        associations=associations,
    )
    logger.info(
        "Transformed %d use cases into %d components and %d edges",
        len(groups), len(components), len(edges),
    )
    return graph
