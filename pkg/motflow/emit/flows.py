"""Component graph → Node-RED flow document."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from motflow.configure.readiness import readiness
from motflow.emit import platform
from motflow.errors import NotReady, UnknownComponent
from motflow.transform.graph import ComponentEdge, ComponentGraph, as_number
from motflow.utils import stable_digest

logger = logging.getLogger(__name__)

X_ORIGIN, Y_ORIGIN = 120, 120
X_STEP, Y_STEP = 200, 120


@dataclass(frozen=True)
class Tab:
    id: str
    label: str


@dataclass
class FlowNode:
    id: str
    type: str
    tab_id: str
    name: str
    config: dict[str, Any] = field(default_factory=dict)
    wires: list[list[str]] = field(default_factory=list)
    x: int = 0
    y: int = 0

    def targets(self) -> list[str]:
        return [t for port in self.wires for t in port]


@dataclass
class ConfigNode:
    id: str
    type: str
    name: str
    config: dict[str, Any] = field(default_factory=dict)


@dataclass
class FlowDocument:
    tabs: list[Tab] = field(default_factory=list)
    nodes: list[FlowNode] = field(default_factory=list)
    config_nodes: list[ConfigNode] = field(default_factory=list)

    def node(self, node_id: str) -> FlowNode | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def tab(self, tab_id: str) -> Tab | None:
        for tab in self.tabs:
            if tab.id == tab_id:
                return tab
        return None

    def config_node(self, node_id: str) -> ConfigNode | None:
        for node in self.config_nodes:
            if node.id == node_id:
                return node
        return None

    def nodes_on(self, tab_id: str) -> list[FlowNode]:
        return [n for n in self.nodes if n.tab_id == tab_id]

    def alias(self, node: FlowNode) -> str:
        tab = self.tab(node.tab_id)
        return f"{tab.label if tab else node.tab_id}/{node.name}"

    def select(self, selector: str) -> list[FlowNode]:
        """Nodes matching an id, a ``<tab label>/<node name>`` alias or a switch name."""
        node = self.node(selector)
        if node is not None:
            return [node]
        matches = [
            n for n in self.nodes
            if self.alias(n) == selector or (n.type == platform.SWITCH and n.name == selector)
        ]
        if not matches:
            raise UnknownComponent(f"No flow node matches '{selector}'.")
        return matches


# ---------------------------------------------------------------------------
# Ids
# ---------------------------------------------------------------------------
def node_id(component_id: str) -> str:
    return stable_digest(component_id)


def tab_id(use_case_id: str) -> str:
    return stable_digest(f"tab:{use_case_id}")


def config_id(config_type: str, value: Any) -> str:
    return stable_digest(f"config:{config_type}:{value}")


def _link_key(source: str, target: str) -> str:
    return f"{source}->{target}"


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------
class _Emitter:
    def __init__(self, graph: ComponentGraph) -> None:
        self.graph = graph
        self.config_nodes: dict[str, ConfigNode] = {}
        self.link_ins: dict[str, list[FlowNode]] = {}
        self.components: dict[str, list[FlowNode]] = {}
        self.outgoing: dict[str, list[FlowNode]] = {}
        self.by_id: dict[str, FlowNode] = {}

    def _config_ref(self, config_type: str, value: Any) -> str:
        ref = config_id(config_type, value)
        if ref not in self.config_nodes:
            mapping = platform.CONFIG_MAPPINGS[config_type]
            config = dict(mapping.statics)
            if mapping.value_key:
                config[mapping.value_key] = value
            self.config_nodes[ref] = ConfigNode(ref, mapping.platform_type, str(value), config)
        return ref

    def _component_node(self, component_id: str, tab: str) -> FlowNode:
        component = self.graph.component(component_id)
        mapping = platform.mapping_for(component.node_kind)
        nid = node_id(component.id)
        config: dict[str, Any] = dict(mapping.statics)
        for slot in component.slots:
            key = mapping.key_for(slot.name)
            if slot.is_deferred:
                config[key] = platform.secret_placeholder(nid, key)
            elif not slot.is_filled:
                continue
            elif slot.name in mapping.config_refs:
                config[key] = self._config_ref(mapping.config_refs[slot.name], slot.value)
            else:
                config[key] = slot.value
        return FlowNode(nid, mapping.platform_type, tab, component.node_kind, config, [[]])

    def _switch(self, edge: ComponentEdge, tab: str) -> FlowNode:
        guard = edge.guard
        assert guard is not None
        if guard.is_set:
            value = str(guard.threshold)
            value_type = "num" if as_number(guard.threshold) is not None else "str"
        else:
            logger.warning("Guard %s has no threshold; emitting a placeholder rule", guard.key)
            value, value_type = platform.GUARD_UNSET, "str"
        config = {
            "checkall": "true",
            "outputs": 1,
            "property": guard.property_name,
            "propertyType": "msg",
            "repair": False,
            "rules": [{"t": platform.COMPARATOR_RULES[guard.comparator], "v": value, "vt": value_type}],
        }
        switch_id = stable_digest(f"switch:{_link_key(edge.source, edge.target)}")
        return FlowNode(switch_id, platform.SWITCH, tab, guard.key, config, [[]])

    def _register(self, node: FlowNode, bucket: dict[str, list[FlowNode]]) -> FlowNode:
        bucket.setdefault(node.tab_id, []).append(node)
        self.by_id[node.id] = node
        return node

    def _wire(self, source: FlowNode, target_id: str) -> None:
        if target_id not in source.wires[0]:
            source.wires[0].append(target_id)

    def emit(self) -> FlowDocument:
        groups = self.graph.groups
        tabs = [Tab(tab_id(g.use_case_id), g.label) for g in groups]
        tab_of: dict[str, str] = {}
        label_of = {tab_id(g.use_case_id): g.label for g in groups}
        for group in groups:
            tid = tab_id(group.use_case_id)
            for cid in group.component_ids:
                tab_of[cid] = tid
                self._register(self._component_node(cid, tid), self.components)

        for edge in self.graph.edges:
            src_tab = tab_of[edge.source]
            tails = [self.by_id[node_id(s)] for s in edge.sources]
            if edge.guard is not None:
                switch = self._register(self._switch(edge, src_tab), self.outgoing)
                for tail in tails:
                    self._wire(tail, switch.id)
                tails = [switch]
            for target in edge.targets:
                target_id, dst_tab = node_id(target), tab_of[target]
                if src_tab == dst_tab:
                    for tail in tails:
                        self._wire(tail, target_id)
                    continue
                key = _link_key(edge.source, target)
                out_id = stable_digest(f"link-out:{key}")
                in_id = stable_digest(f"link-in:{key}")
                link_out = FlowNode(
                    out_id, platform.LINK_OUT, src_tab, f"to {label_of[dst_tab]}",
                    {"links": [in_id], "mode": "link"}, [],
                )
                link_in = FlowNode(
                    in_id, platform.LINK_IN, dst_tab, f"from {label_of[src_tab]}",
                    {"links": [out_id]}, [[target_id]],
                )
                self._register(link_out, self.outgoing)
                self._register(link_in, self.link_ins)
                for tail in tails:
                    self._wire(tail, out_id)

        nodes: list[FlowNode] = []
        for tab in tabs:
            tab_nodes = (
                self.link_ins.get(tab.id, [])
                + self.components.get(tab.id, [])
                + self.outgoing.get(tab.id, [])
            )
            layout(tab_nodes)
            nodes.extend(tab_nodes)
        return FlowDocument(tabs, nodes, list(self.config_nodes.values()))


def layout(tab_nodes: list[FlowNode]) -> None:
    """Left-to-right columns by wiring depth; lanes follow list order.

    Falls back to one node per column when the wiring has a cycle.
    """
    order = {n.id: i for i, n in enumerate(tab_nodes)}
    wiring = nx.DiGraph()
    wiring.add_nodes_from(order)
    wiring.add_edges_from((n.id, t) for n in tab_nodes for t in n.targets() if t in order)
    try:
        columns = [sorted(gen, key=order.__getitem__) for gen in nx.topological_generations(wiring)]
    except nx.NetworkXUnfeasible:
        columns = [[n.id] for n in tab_nodes]
    by_id = {n.id: n for n in tab_nodes}
    for col, members in enumerate(columns):
        for lane, nid in enumerate(members):
            by_id[nid].x = X_ORIGIN + X_STEP * col
            by_id[nid].y = Y_ORIGIN + Y_STEP * lane


def emit_flows(graph: ComponentGraph) -> FlowDocument:
    """Render a configured graph: one tab per group, link pairs across tabs.

    Each extend gets one ``switch`` node that every terminal of the extended
    use case feeds; it fans out to the extending use case through link
    pairs.  Unset guards render a placeholder rule and log a warning.

    Raises:
        NotReady: Required plain properties are still unset.
        UnknownNodeType: A component's node kind has no platform mapping.
    """
    report = readiness(graph)
    if not report.ready:
        missing = ", ".join(f"{p.component_id}.{p.property_name}" for p in report.pending_required[:5])
        raise NotReady(f"Required properties unset ({len(report.pending_required)}): {missing}")
    doc = _Emitter(graph).emit()
    logger.info(
        "Emitted %d tabs, %d nodes, %d config nodes",
        len(doc.tabs), len(doc.nodes), len(doc.config_nodes),
    )
    return doc
