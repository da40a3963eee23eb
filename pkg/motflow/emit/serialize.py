"""Canonical flows file: serialization, parsing and document checks."""

from __future__ import annotations

import json
from typing import Any

from motflow.emit import platform
from motflow.emit.flows import ConfigNode, FlowDocument, FlowNode, Tab
from motflow.errors import InvalidDocument
from motflow.utils import canonical_json

_NODE_KEYS = ("id", "type", "z", "x", "y", "wires")
_CONFIG_KEYS = ("id", "type", "name")


def _tab_dict(tab: Tab) -> dict[str, Any]:
    return {"id": tab.id, "type": platform.TAB, "label": tab.label}


def _config_dict(node: ConfigNode) -> dict[str, Any]:
    out: dict[str, Any] = {"id": node.id, "type": node.type, "name": node.name}
    for key in sorted(node.config):
        out[key] = node.config[key]
    return out


def _node_dict(node: FlowNode) -> dict[str, Any]:
    out: dict[str, Any] = {"id": node.id, "type": node.type, "z": node.tab_id}
    out[platform.label_key(node.type)] = node.name
    for key in sorted(node.config):
        out[key] = node.config[key]
    out["x"] = node.x
    out["y"] = node.y
    out["wires"] = [list(port) for port in node.wires]
    return out


def flows_to_list(doc: FlowDocument) -> list[dict[str, Any]]:
    return (
        [_tab_dict(t) for t in doc.tabs]
        + [_config_dict(c) for c in doc.config_nodes]
        + [_node_dict(n) for n in doc.nodes]
    )


def serialize_flows(doc: FlowDocument) -> bytes:
    """Tabs, then config nodes, then flow nodes; keys id, type, z, the label
    key, sorted config keys, x, y, wires; 4-space indent, no trailing newline.

    The label key is ``name`` except on ``e-mail`` nodes, where the platform
    keeps the recipient in ``name``: there the label is ``dname`` and ``name``
    sorts in among the config keys.
    """
    return canonical_json(flows_to_list(doc)).encode("utf-8")


def parse_flows(data: bytes | str) -> FlowDocument:
    """Read a flows file back into a :class:`FlowDocument`.

    Objects typed ``tab`` become tabs, objects carrying ``z`` or ``wires``
    become flow nodes and everything else is a config node.

    Raises:
        InvalidDocument: The data is not a JSON array of node objects.
    """
    try:
        raw = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidDocument(f"Flows file is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise InvalidDocument("Flows file must be a JSON array.")

    doc = FlowDocument()
    for idx, item in enumerate(raw):
        if not isinstance(item, dict) or not isinstance(item.get("id"), str) or "type" not in item:
            raise InvalidDocument(f"Flows entry #{idx} needs string 'id' and 'type'.")
        if item["type"] == platform.TAB:
            doc.tabs.append(Tab(item["id"], str(item.get("label", ""))))
        elif "z" in item or "wires" in item:
            wires = item.get("wires", [])
            label = platform.label_key(item["type"])
            if not isinstance(wires, list) or not all(isinstance(p, list) for p in wires):
                raise InvalidDocument(f"Node '{item['id']}' has malformed wires.")
            doc.nodes.append(
                FlowNode(
                    id=item["id"],
                    type=item["type"],
                    tab_id=str(item.get("z", "")),
                    name=str(item.get(label, "")),
                    config={k: v for k, v in item.items() if k not in _NODE_KEYS and k != label},
                    wires=[list(p) for p in wires],
                    x=int(item.get("x", 0)),
                    y=int(item.get("y", 0)),
                )
            )
        else:
            doc.config_nodes.append(
                ConfigNode(
                    id=item["id"],
                    type=item["type"],
                    name=str(item.get("name", "")),
                    config={k: v for k, v in item.items() if k not in _CONFIG_KEYS},
                )
            )
    return doc


def check_document(doc: FlowDocument) -> list[str]:
    """Return every structural problem found; an empty list means valid."""
    problems: list[str] = []
    ids = [t.id for t in doc.tabs] + [n.id for n in doc.nodes] + [c.id for c in doc.config_nodes]
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            problems.append(f"duplicate id {i}")
        seen.add(i)

    tabs = {t.id for t in doc.tabs}
    by_id = {n.id: n for n in doc.nodes}
    for node in doc.nodes:
        if node.tab_id not in tabs:
            problems.append(f"node {node.id} references missing tab {node.tab_id}")
        for target in node.targets():
            other = by_id.get(target)
            if other is None:
                problems.append(f"node {node.id} wires to missing node {target}")
            elif other.tab_id != node.tab_id:
                problems.append(f"node {node.id} wires across tabs to {target}")
        if node.type in (platform.LINK_IN, platform.LINK_OUT):
            expected = platform.LINK_OUT if node.type == platform.LINK_IN else platform.LINK_IN
            for peer in node.config.get("links", []):
                partner = by_id.get(peer)
                if partner is None or partner.type != expected:
                    problems.append(f"{node.type} {node.id} links to unmatched {peer}")
                elif node.id not in partner.config.get("links", []):
                    problems.append(f"{node.type} {node.id} link to {peer} is one-sided")
    return problems
