"""Node-RED platform table.

Every node kind the templates produce maps to one platform node type, a set
of property renames, static keys and the config-node type each ``ServiceRef``
(or dashboard group) points at.  Re-targeting another flow platform means
swapping this table; the simulator reads its reverse lookups from here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from motflow.errors import UnknownNodeType
from motflow.transform.graph import Comparator

LINK_IN = "link in"
LINK_OUT = "link out"
SWITCH = "switch"
TAB = "tab"

SECRET_PREFIX = "__MOT_SECRET__"
GUARD_UNSET = "__MOT_GUARD_UNSET__"


@dataclass(frozen=True)
class NodeMapping:
    node_kind: str
    platform_type: str
    renames: dict[str, str] = field(default_factory=dict)
    statics: dict[str, Any] = field(default_factory=dict)
    config_refs: dict[str, str] = field(default_factory=dict)
    package: str | None = None
    label_key: str = "name"

    def key_for(self, slot_name: str) -> str:
        return self.renames.get(slot_name, slot_name)


@dataclass(frozen=True)
class ConfigMapping:
    platform_type: str
    value_key: str | None
    statics: dict[str, Any] = field(default_factory=dict)


_DASHBOARD = "node-red-dashboard"

NODE_MAPPINGS: tuple[NodeMapping, ...] = (
    NodeMapping("mqtt-in", "mqtt in", statics={"datatype": "auto"}, config_refs={"broker": "mqtt-broker"}),
    NodeMapping("mqtt-out", "mqtt out", config_refs={"broker": "mqtt-broker"}),
    NodeMapping("json-parse", "json", statics={"action": "obj"}),
    NodeMapping("json-serialize", "json", statics={"action": "str"}),
    NodeMapping(
        "db-write",
        "mongodb out",
        statics={"payonly": True},
        config_refs={"service": "mongodb"},
        renames={"service": "mongodb"},
        package="node-red-node-mongodb",
    ),
    NodeMapping(
        "gauge",
        "ui_gauge",
        renames={"units": "label"},
        statics={"gtype": "gage", "format": "{{value}}"},
        config_refs={"group": "ui_group"},
        package=_DASHBOARD,
    ),
    NodeMapping(
        "chart",
        "ui_chart",
        renames={"title": "label", "history_seconds": "removeOlder"},
        statics={"chartType": "line", "removeOlderUnit": "1"},
        config_refs={"group": "ui_group"},
        package=_DASHBOARD,
    ),
    NodeMapping(
        "email-send",
        "e-mail",
        renames={
            "recipient": "name",
            "sender": "userid",
            "smtp_host": "server",
            "smtp_port": "port",
            "smtp_password": "password",
        },
        statics={"secure": True, "tls": True},
        package="node-red-node-email",
        label_key="dname",
    ),
    NodeMapping(
        "twitter-post",
        "twitter out",
        renames={"account": "twitter"},
        package="node-red-node-twitter",
    ),
    NodeMapping(
        "bci-facial",
        "facial-expression",
        renames={"client_id": "clientId", "client_secret": "clientSecret"},
        package="node-red-contrib-emotiv",
    ),
    NodeMapping(
        "bci-mental",
        "mental-command",
        renames={"client_id": "clientId", "client_secret": "clientSecret"},
        package="node-red-contrib-emotiv",
    ),
    NodeMapping("function", "function", statics={"outputs": 1}),
)

CONFIG_MAPPINGS: dict[str, ConfigMapping] = {
    "mqtt-broker": ConfigMapping("mqtt-broker", "broker"),
    "mongodb": ConfigMapping("mongodb", "hostname"),
    "ui_group": ConfigMapping("ui_group", None, {"disp": True, "width": "6"}),
}

COMPARATOR_RULES: dict[Comparator, str] = {
    Comparator.GT: "gt",
    Comparator.GE: "gte",
    Comparator.LT: "lt",
    Comparator.LE: "lte",
    Comparator.EQ: "eq",
    Comparator.NE: "neq",
}
RULE_COMPARATORS: dict[str, Comparator] = {v: k for k, v in COMPARATOR_RULES.items()}

_BY_KIND = {m.node_kind: m for m in NODE_MAPPINGS}

SOURCE_TYPES = frozenset({"mqtt in", "facial-expression", "mental-command"})
SINK_TYPES = frozenset({"mongodb out", "ui_gauge", "ui_chart", "e-mail", "mqtt out", "twitter out"})
FLOW_TYPES = frozenset(m.platform_type for m in NODE_MAPPINGS) | {LINK_IN, LINK_OUT, SWITCH}


def mapping_for(node_kind: str) -> NodeMapping:
    try:
        return _BY_KIND[node_kind]
    except KeyError:
        raise UnknownNodeType(f"No platform mapping for node kind '{node_kind}'.") from None


def mappings_for_type(platform_type: str) -> list[NodeMapping]:
    return [m for m in NODE_MAPPINGS if m.platform_type == platform_type]


def label_key(platform_type: str) -> str:
    """Property holding the node label; e-mail keeps its recipient in ``name``."""
    for mapping in mappings_for_type(platform_type):
        return mapping.label_key
    return "name"


def platform_key(platform_type: str, name: str) -> str:
    """Translate a slot name to the platform property key for *platform_type*."""
    for mapping in mappings_for_type(platform_type):
        if name in mapping.renames:
            return mapping.renames[name]
    return name


def secret_placeholder(node_id: str, key: str) -> str:
    return f"{SECRET_PREFIX}{node_id}.{key}__"


def is_secret_placeholder(value: Any) -> bool:
    return isinstance(value, str) and value.startswith(SECRET_PREFIX)


def packages_for(types: set[str]) -> list[str]:
    """Contrib node packages needed by the given platform types, sorted."""
    return sorted({m.package for m in NODE_MAPPINGS if m.platform_type in types and m.package})
