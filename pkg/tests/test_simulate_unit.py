"""Unit tests for the flow simulator."""

from __future__ import annotations

import json
import tempfile
import unittest
from pathlib import Path

from motflow.configure.manifest import ConfigurationManifest, apply_manifest
from motflow.emit.flows import FlowNode, emit_flows
from motflow.emit.package import graph_secrets
from motflow.emit.serialize import parse_flows
from motflow.errors import (
    InvalidDocument,
    ScenarioError,
    SimulationError,
    UnknownNodeType,
    UnresolvedSecret,
)
from motflow.simulate.recorder import trace_from_dict, write_db_dump
from motflow.simulate.runtime import (
    MALFORMED_PAYLOAD,
    NO_SUBSCRIBER,
    run_simulation,
    topic_matches,
)
from motflow.simulate.scenario import Injection, SimulationScenario, load_scenario, parse_scenario
from tests._support import (
    EMAIL_ALIAS,
    GOLDEN_FLOWS,
    GUARD_KEY,
    HOSPITAL_SCENARIO,
    HOSPITAL_SCENARIO_50,
    configured_hospital,
    hospital_credentials,
    hospital_flows,
)


def _with_credentials(scenario: SimulationScenario) -> SimulationScenario:
    return SimulationScenario(scenario.injections, scenario.overrides, hospital_credentials())


class HospitalSimulationTests(unittest.TestCase):
    def setUp(self) -> None:
        self.doc = parse_flows(GOLDEN_FLOWS.read_bytes())

    def test_threshold_30_sends_one_email(self) -> None:
        trace = run_simulation(self.doc, _with_credentials(load_scenario(HOSPITAL_SCENARIO)))
        self.assertEqual(
            trace.counts(),
            {"db_records": 3, "emails": 1, "dashboard": 3, "published": 0, "social": 0, "dropped": 2},
        )
        self.assertEqual([r.document for r in trace.db_records], [22, 25, 40])
        self.assertEqual([r.collection for r in trace.db_records], ["temperatures"] * 3)
        self.assertEqual(trace.emails[0].recipient, "ward@hospital.example")
        self.assertEqual(trace.emails[0].subject, "Temperature alert")
        self.assertEqual(trace.emails[0].body, "40")
        self.assertEqual(trace.emails[0].time, 2000)
        self.assertEqual(trace.drops_by_guard(), {GUARD_KEY: 2})
        self.assertEqual(trace.passed, 1)

    def test_threshold_50_override_sends_none(self) -> None:
        trace = run_simulation(self.doc, _with_credentials(load_scenario(HOSPITAL_SCENARIO_50)))
        self.assertEqual(len(trace.emails), 0)
        self.assertEqual(len(trace.db_records), 3)
        self.assertEqual(trace.drops_by_guard(), {GUARD_KEY: 3})

    def test_simulation_does_not_touch_input_document(self) -> None:
        before = json.dumps([n.config for n in self.doc.nodes], sort_keys=True)
        run_simulation(self.doc, _with_credentials(load_scenario(HOSPITAL_SCENARIO_50)))
        self.assertEqual(json.dumps([n.config for n in self.doc.nodes], sort_keys=True), before)

    def test_missing_credentials_fail_only_when_sink_is_exercised(self) -> None:
        with self.assertRaises(UnresolvedSecret) as ctx:
            run_simulation(self.doc, load_scenario(HOSPITAL_SCENARIO))
        self.assertIn(EMAIL_ALIAS, ctx.exception.message)
        trace = run_simulation(self.doc, load_scenario(HOSPITAL_SCENARIO_50))
        self.assertEqual(len(trace.emails), 0)

    def test_credentials_from_manifest_secrets(self) -> None:
        graph = apply_manifest(
            configured_hospital(), ConfigurationManifest({EMAIL_ALIAS: {"smtp_password": "pw"}})
        )
        trace = run_simulation(
            emit_flows(graph), load_scenario(HOSPITAL_SCENARIO), credentials=graph_secrets(graph)
        )
        self.assertEqual(len(trace.emails), 1)

    def test_empty_scenario(self) -> None:
        trace = run_simulation(self.doc, SimulationScenario())
        self.assertEqual(sum(trace.counts().values()), 0)

    def test_unmatched_topic_is_dropped(self) -> None:
        scenario = SimulationScenario((Injection(5, "ward/humidity", "50"),))
        trace = run_simulation(self.doc, scenario)
        self.assertEqual(trace.drops_by_guard(), {NO_SUBSCRIBER: 1})

    def test_malformed_json_payload_is_dropped(self) -> None:
        scenario = SimulationScenario((Injection(0, "ward/temperature", "{not json"),))
        trace = run_simulation(self.doc, scenario)
        self.assertEqual(trace.drops_by_guard(), {MALFORMED_PAYLOAD: 1})
        self.assertEqual(len(trace.db_records), 0)

    def test_comparator_override(self) -> None:
        scenario = SimulationScenario(
            tuple(Injection(i, "ward/temperature", str(v)) for i, v in enumerate([22, 25, 40])),
            overrides={GUARD_KEY: {"comparator": "LT", "threshold": 24}},
            credentials=hospital_credentials(),
        )
        trace = run_simulation(self.doc, scenario)
        self.assertEqual([e.body for e in trace.emails], ["22"])

    def test_trace_round_trips_through_dict(self) -> None:
        trace = run_simulation(self.doc, _with_credentials(load_scenario(HOSPITAL_SCENARIO)))
        self.assertEqual(trace_from_dict(json.loads(json.dumps(trace.to_dict()))), trace)

    def test_db_dump_writes_json_lines(self) -> None:
        trace = run_simulation(self.doc, _with_credentials(load_scenario(HOSPITAL_SCENARIO)))
        with tempfile.TemporaryDirectory() as tmp:
            lines = write_db_dump(trace, Path(tmp) / "db.jsonl").read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 3)
        self.assertEqual(json.loads(lines[0]), {"collection": "temperatures", "document": 22})


class SimulatorGuardrailTests(unittest.TestCase):
    def test_unknown_node_type(self) -> None:
        doc = hospital_flows()
        doc.nodes.append(FlowNode("odd", "teleport", doc.tabs[0].id, "odd", {}, [[]]))
        with self.assertRaises(UnknownNodeType):
            run_simulation(doc, SimulationScenario())

    def test_invalid_document(self) -> None:
        doc = hospital_flows()
        doc.nodes[0].wires = [["ghost"]]
        with self.assertRaises(InvalidDocument):
            run_simulation(doc, SimulationScenario())

    def test_hop_limit_stops_loops(self) -> None:
        doc = hospital_flows()
        source = next(n for n in doc.nodes if n.type == "mqtt in")
        json_node = next(n for n in doc.nodes if n.type == "json")
        json_node.wires[0].append(source.id)
        scenario = SimulationScenario((Injection(0, "ward/temperature", "1"),))
        with self.assertRaises(SimulationError):
            run_simulation(doc, scenario, credentials=None, hop_limit=50)


class ScenarioParsingTests(unittest.TestCase):
    def test_injections_are_sorted_stably(self) -> None:
        scenario = parse_scenario(
            {
                "injections": [
                    {"at": 10, "topic": "t", "payload": "b"},
                    {"at": 0, "topic": "t", "payload": "a"},
                    {"at": 10, "topic": "t", "payload": "c"},
                ]
            }
        )
        self.assertEqual([i.payload for i in scenario.injections], ["a", "b", "c"])

    def test_invalid_injection(self) -> None:
        for bad in (
            {"injections": [{"topic": "t"}]},
            {"injections": [{"at": -1, "topic": "t", "payload": 1}]},
            {"injections": [{"at": True, "topic": "t", "payload": 1}]},
            {"injections": [{"topic": "", "payload": 1}]},
            {"overrides": ["x"]},
            [],
        ):
            with self.subTest(bad=bad), self.assertRaises(ScenarioError):
                parse_scenario(bad)


class TopicMatchTests(unittest.TestCase):
    def test_wildcards(self) -> None:
        self.assertTrue(topic_matches("ward/temperature", "ward/temperature"))
        self.assertTrue(topic_matches("ward/+", "ward/temperature"))
        self.assertTrue(topic_matches("ward/#", "ward/a/b"))
        self.assertTrue(topic_matches("#", "anything"))
        self.assertFalse(topic_matches("ward/+", "ward/a/b"))
        self.assertFalse(topic_matches("ward/temperature", "ward"))


if __name__ == "__main__":
    unittest.main()
