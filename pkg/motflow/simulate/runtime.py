"""Desk-scale interpreter for emitted flow documents.

Virtual time only: every injection runs to completion, breadth first, before
the next one starts, and every event it causes carries the injection's time.
"""

from __future__ import annotations

import json
import logging
from collections import deque
from collections.abc import Mapping
from copy import deepcopy
from typing import Any

from motflow.emit import platform
from motflow.emit.flows import FlowDocument, FlowNode
from motflow.emit.package import build_credentials
from motflow.emit.serialize import check_document
from motflow.errors import (
    ExpressionError,
    InvalidDocument,
    SimulationError,
    TypeMismatch,
    UnknownNodeType,
    UnknownProperty,
    UnresolvedSecret,
)
from motflow.simulate.expressions import compile_expression, evaluate
from motflow.simulate.recorder import SimulationTrace, TraceRecorder
from motflow.simulate.scenario import Injection, SimulationScenario
from motflow.transform.graph import Comparator, as_number

logger = logging.getLogger(__name__)

HOP_LIMIT = 10_000
NO_SUBSCRIBER = "no-subscriber"
MALFORMED_PAYLOAD = "malformed-payload"
FUNCTION_ERROR = "function-error"
BCI_TOPICS = {"bci/facial": "facial-expression", "bci/mental": "mental-command"}


def topic_matches(topic_filter: str, topic: str) -> bool:
    """MQTT topic filter match with ``+`` (one level) and ``#`` (remaining levels)."""
    filter_levels = topic_filter.split("/")
    topic_levels = topic.split("/")
    for i, level in enumerate(filter_levels):
        if level == "#":
            return i == len(filter_levels) - 1
        if i >= len(topic_levels):
            return False
        if level != "+" and level != topic_levels[i]:
            return False
    return len(filter_levels) == len(topic_levels)


def _rule_threshold(rule: Mapping[str, Any]) -> Any:
    if rule.get("vt") == "num":
        number = as_number(rule.get("v"))
        return number if number is not None else rule.get("v")
    return rule.get("v")


class FlowSimulator:
    """Runs a scenario against a private copy of *doc*.

    Args:
        doc: A structurally valid flow document.
        scenario: Injections plus overrides and credentials.
        credentials: Extra overlay (``{node_id: {key: value}}``) applied before
            the scenario's own credentials, e.g. secrets set through a manifest.
        hop_limit: Maximum node activations per injection.
    """

    def __init__(
        self,
        doc: FlowDocument,
        scenario: SimulationScenario,
        credentials: Mapping[str, Mapping[str, Any]] | None = None,
        hop_limit: int = HOP_LIMIT,
    ) -> None:
        problems = check_document(doc)
        if problems:
            raise InvalidDocument(f"Flow document is invalid: {'; '.join(problems[:5])}")
        for node in doc.nodes:
            if node.type not in platform.FLOW_TYPES:
                raise UnknownNodeType(f"Node {node.id} has type '{node.type}', which is not simulated.")

        self.doc = deepcopy(doc)
        self.scenario = scenario
        self.hop_limit = hop_limit
        self._by_id = {n.id: n for n in self.doc.nodes}
        self._apply_overrides(scenario.overrides)
        overlay = build_credentials(self.doc, scenario.credentials, base=credentials)
        for nid, values in overlay.items():
            node = self._by_id.get(nid)
            if node is not None:
                node.config.update(values)
        for node in self.doc.nodes:
            if node.type == "function":
                compile_expression(str(node.config.get("expression", "")))

    # -- setup ----------------------------------------------------------------

    def _apply_overrides(self, overrides: Mapping[str, Mapping[str, Any]]) -> None:
        for selector, values in overrides.items():
            for node in self.doc.select(selector):
                if node.type == platform.SWITCH:
                    self._override_switch(node, values)
                    continue
                for prop, value in values.items():
                    key = platform.platform_key(node.type, prop)
                    if key not in node.config:
                        raise UnknownProperty(f"'{selector}' has no property '{prop}'.")
                    node.config[key] = value

    @staticmethod
    def _override_switch(node: FlowNode, values: Mapping[str, Any]) -> None:
        rule = node.config["rules"][0]
        for prop, value in values.items():
            if prop == "threshold":
                if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                    raise TypeMismatch(f"Guard threshold must be a number or text, got {value!r}.")
                rule["v"] = str(value)
                rule["vt"] = "num" if as_number(value) is not None else "str"
            elif prop == "comparator":
                rule["t"] = platform.COMPARATOR_RULES[Comparator.parse(str(value))]
            elif prop == "property_name":
                node.config["property"] = str(value)
            else:
                raise UnknownProperty(f"Guard '{node.name}' has no property '{prop}'.")

    # -- execution ------------------------------------------------------------

    def _sources(self, topic: str) -> list[FlowNode]:
        bci_type = BCI_TOPICS.get(topic)
        if bci_type is not None:
            return [n for n in self.doc.nodes if n.type == bci_type]
        return [
            n for n in self.doc.nodes
            if n.type == "mqtt in" and topic_matches(str(n.config.get("topic", "")), topic)
        ]

    def run(self) -> SimulationTrace:
        recorder = TraceRecorder()
        for injection in self.scenario.injections:
            self._inject(injection, recorder)
        trace = recorder.summarize()
        logger.info("Simulation finished: %s", trace.counts())
        return trace

    def _inject(self, injection: Injection, recorder: TraceRecorder) -> None:
        sources = self._sources(injection.topic)
        if not sources:
            recorder.record_dropped(injection.at, NO_SUBSCRIBER, injection.payload)
            return
        queue: deque[tuple[FlowNode, dict[str, Any]]] = deque(
            (node, {"topic": injection.topic, "payload": deepcopy(injection.payload)})
            for node in sources
        )
        hops = 0
        while queue:
            node, msg = queue.popleft()
            hops += 1
            if hops > self.hop_limit:
                raise SimulationError(
                    f"Injection at {injection.at} on '{injection.topic}' exceeded "
                    f"{self.hop_limit} node activations; the flow loops."
                )
            for target, out in self._activate(node, msg, injection.at, recorder):
                queue.append((target, out))

    def _forward(self, node: FlowNode, msg: dict[str, Any]) -> list[tuple[FlowNode, dict[str, Any]]]:
        return [(self._by_id[t], deepcopy(msg)) for t in node.targets()]

    def _activate(
        self, node: FlowNode, msg: dict[str, Any], time: int, recorder: TraceRecorder
    ) -> list[tuple[FlowNode, dict[str, Any]]]:
        kind = node.type
        if kind == platform.LINK_OUT:
            return [(self._by_id[peer], deepcopy(msg)) for peer in node.config.get("links", [])]
        if kind == "json":
            prop = str(node.config.get("property", "payload"))
            value = msg.get(prop)
            if node.config.get("action") == "str":
                if not isinstance(value, str):
                    msg[prop] = json.dumps(value, separators=(",", ":"), ensure_ascii=False)
            elif isinstance(value, str):
                try:
                    msg[prop] = json.loads(value)
                except json.JSONDecodeError:
                    recorder.record_dropped(time, MALFORMED_PAYLOAD, value)
                    return []
        elif kind == "function":
            try:
                msg["payload"] = evaluate(
                    str(node.config.get("expression", "")), msg.get("payload"), str(msg.get("topic", ""))
                )
            except ExpressionError as exc:
                logger.warning("%s", exc)
                recorder.record_dropped(time, FUNCTION_ERROR, msg.get("payload"))
                return []
        elif kind == platform.SWITCH:
            if not self._guard_passes(node, msg):
                recorder.record_dropped(time, node.name, msg.get("payload"))
                return []
            recorder.record_passed()
        elif kind in platform.SINK_TYPES:
            self._sink(node, msg, time, recorder)
        return self._forward(node, msg)

    def _guard_passes(self, node: FlowNode, msg: Mapping[str, Any]) -> bool:
        rule = node.config["rules"][0]
        if rule.get("v") == platform.GUARD_UNSET:
            logger.warning("Guard %s has no threshold; message dropped", node.name)
            return False
        comparator = platform.RULE_COMPARATORS.get(rule.get("t"))
        if comparator is None:
            raise UnknownNodeType(f"Switch {node.id} uses unsupported rule '{rule.get('t')}'.")
        value = msg.get(str(node.config.get("property", "payload")))
        return comparator.holds(value, _rule_threshold(rule))

    def _sink(self, node: FlowNode, msg: Mapping[str, Any], time: int, recorder: TraceRecorder) -> None:
        unresolved = sorted(k for k, v in node.config.items() if platform.is_secret_placeholder(v))
        if unresolved:
            raise UnresolvedSecret(
                f"{self.doc.alias(node)} needs credentials for: {', '.join(unresolved)}"
            )
        payload = msg.get("payload")
        text = payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False)
        if node.type == "mongodb out":
            recorder.record_db(time, str(node.config.get("collection", "")), deepcopy(payload))
        elif node.type in ("ui_gauge", "ui_chart"):
            recorder.record_dashboard(time, node.id, deepcopy(payload))
        elif node.type == "e-mail":
            recorder.record_email(
                time, str(node.config.get("name", "")), str(node.config.get("subject", "")), text
            )
        elif node.type == "mqtt out":
            recorder.record_published(
                time, str(node.config.get("topic") or msg.get("topic", "")), deepcopy(payload)
            )
        elif node.type == "twitter out":
            recorder.record_social(time, text)


def run_simulation(
    doc: FlowDocument,
    scenario: SimulationScenario,
    credentials: Mapping[str, Mapping[str, Any]] | None = None,
    hop_limit: int = HOP_LIMIT,
) -> SimulationTrace:
    """Execute *scenario* against *doc* and return the recorded trace.

    Raises:
        InvalidDocument: The document fails its structural checks.
        UnknownNodeType: The document contains a type the interpreter does not model.
        UnresolvedSecret: An exercised sink still holds a secret placeholder.
        SimulationError: An injection exceeds *hop_limit* activations.
    """
    return FlowSimulator(doc, scenario, credentials, hop_limit).run()
