"""Template expansion: composite templates flattened into leaf prototypes."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from motflow.errors import CyclicTemplate, UnresolvedChild
from motflow.transform.templates import ComponentTemplate, PropertySpec, TemplateRepo


@dataclass(frozen=True)
class ComponentPrototype:
    """A leaf reached during expansion, not yet bound to a use case."""

    template_path: tuple[str, ...]
    node_kind: str
    properties: tuple[PropertySpec, ...]


@dataclass(frozen=True)
class Expansion:
    """Prototypes plus edges between them, all by prototype position."""

    prototypes: tuple[ComponentPrototype, ...]
    edges: tuple[tuple[int, int], ...]
    entries: tuple[int, ...]
    terminals: tuple[int, ...]


def _child_links(template: ComponentTemplate) -> nx.DiGraph:
    links = nx.DiGraph()
    links.add_nodes_from(range(len(template.children)))
    if template.chain:
        links.add_edges_from((i, i + 1) for i in range(len(template.children) - 1))
    else:
        links.add_edges_from(template.edges)
    return links


def _expand(template_id: str, repo: TemplateRepo, path: tuple[str, ...]) -> Expansion:
    if template_id in path:
        start = path.index(template_id)
        cycle = " -> ".join(path[start:] + (template_id,))
        raise CyclicTemplate(f"Template expansion recurses: {cycle}.")
    template = repo.get(template_id)
    if template is None:
        owner = f" (child of '{path[-1]}')" if path else ""
        raise UnresolvedChild(f"Template '{template_id}'{owner} is not in the repository.")

    path = path + (template_id,)
    if template.is_leaf:
        proto = ComponentPrototype(path, template.node_kind or "", template.properties)
        return Expansion((proto,), (), (0,), (0,))

    parts = [_expand(child, repo, path) for child in template.children]
    offsets: list[int] = []
    prototypes: list[ComponentPrototype] = []
    edges: list[tuple[int, int]] = []
    for part in parts:
        offset = len(prototypes)
        offsets.append(offset)
        prototypes.extend(part.prototypes)
        edges.extend((a + offset, b + offset) for a, b in part.edges)

    links = _child_links(template)
    for a, b in links.edges():
        for t in parts[a].terminals:
            for e in parts[b].entries:
                edges.append((t + offsets[a], e + offsets[b]))

    entries = tuple(
        e + offsets[i]
        for i in range(len(parts)) if links.in_degree(i) == 0
        for e in parts[i].entries
    )
    terminals = tuple(
        t + offsets[i]
        for i in range(len(parts)) if links.out_degree(i) == 0
        for t in parts[i].terminals
    )
    return Expansion(tuple(prototypes), tuple(edges), entries, terminals)


def expand(template_id: str, repo: TemplateRepo) -> Expansion:
    """Flatten *template_id* into leaf prototypes and their internal edges.

    Children expand in declaration order.  A chained composite links each
    child's terminals to the next child's entries; explicit ``edges`` link
    the listed children the same way.  Children without incoming links
    contribute entries, children without outgoing links contribute terminals.

    Raises:
        CyclicTemplate: The template reaches itself through its children.
        UnresolvedChild: A referenced template is missing from *repo*.
    """
    return _expand(template_id, repo, ())
