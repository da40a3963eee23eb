"""Randomized structural and behavioural checks over generated use-case models."""

from __future__ import annotations

import random
import unittest
from collections import Counter

import networkx as nx

from motflow.emit import platform
from motflow.emit.flows import FlowDocument, emit_flows
from motflow.emit.serialize import check_document, parse_flows, serialize_flows
from motflow.model.profile import builtin_profile
from motflow.model.xmi import parse_xmi
from motflow.simulate.runtime import BCI_TOPICS, run_simulation, topic_matches
from motflow.simulate.scenario import Injection, SimulationScenario
from motflow.transform.builder import transform_model
from motflow.transform.expander import expand
from motflow.transform.graph import dump_graph
from motflow.transform.templates import load_templates
from tests._support import application, fill_everything, secret_overlay, use_case, xmi_document

SEED = 20240611
MODELS = 200
MAX_INJECTIONS = 20
THRESHOLD = 1
TOPICS = ["value", "bci/facial", "bci/mental", "elsewhere/unheard"]
STEREOTYPES = [s.name for s in builtin_profile().stereotypes]


def random_model(rng: random.Random) -> tuple[bytes, dict[str, list[str]], list[tuple[str, int, int]]]:
    """Return XMI bytes, the stereotypes applied per use case and the relationships.

    Some use cases carry two stereotypes. Relationships only point from lower
    to higher indices, so the message flow stays acyclic.
    """
    count = rng.randint(1, 6)
    applied = {
        f"_uc{i}": rng.sample(STEREOTYPES, 2 if rng.random() < 0.3 else 1)
        for i in range(count)
        if i == 0 or rng.random() < 0.8
    }
    relations: list[tuple[str, int, int]] = []
    inner: dict[int, list[str]] = {i: [] for i in range(count)}
    for i in range(count):
        for j in range(i + 1, count):
            roll = rng.random()
            if roll < 0.25:
                relations.append(("include", i, j))
                inner[i].append(f'<include xmi:type="uml:Include" xmi:id="_inc{i}_{j}" addition="_uc{j}"/>')
            elif roll < 0.4:
                relations.append(("extend", i, j))
                inner[j].append(f'<extend xmi:type="uml:Extend" xmi:id="_ext{j}_{i}" extendedCase="_uc{i}"/>')
    body = "\n".join(use_case(f"_uc{i}", f"Case {i}", "".join(inner[i])) for i in range(count))
    apps = "\n".join(
        application(name, uc, f"_app{uc}_{k}")
        for uc, names in applied.items()
        for k, name in enumerate(names)
    )
    return xmi_document(body, apps, name=f"Random {count}"), applied, relations


def applied_extends(applied: dict[str, list[str]], relations: list[tuple[str, int, int]]) -> list[str]:
    """Guard keys of the extends whose use cases both expand to components."""
    return [
        f"extend:_uc{j}->_uc{i}"
        for kind, i, j in relations
        if kind == "extend" and f"_uc{i}" in applied and f"_uc{j}" in applied
    ]


def random_scenario(rng: random.Random) -> SimulationScenario:
    injections = tuple(
        Injection(rng.randrange(0, 60_000), rng.choice(TOPICS), rng.randint(0, 3))
        for _ in range(rng.randint(0, MAX_INJECTIONS))
    )
    return SimulationScenario(injections=injections)


def sources_for(doc: FlowDocument, topic: str) -> list[str]:
    bci_type = BCI_TOPICS.get(topic)
    if bci_type is not None:
        return [n.id for n in doc.nodes if n.type == bci_type]
    return [
        n.id for n in doc.nodes
        if n.type == "mqtt in" and topic_matches(str(n.config.get("topic", "")), topic)
    ]


def arrivals(doc: FlowDocument, sources: list[str]) -> tuple[Counter, Counter]:
    """Messages reaching each node from *sources*: over every path, and over switch-free paths."""
    wiring = nx.DiGraph()
    wiring.add_nodes_from(n.id for n in doc.nodes)
    for node in doc.nodes:
        targets = node.config.get("links", []) if node.type == platform.LINK_OUT else node.targets()
        wiring.add_edges_from((node.id, t) for t in targets)
    every: Counter = Counter(sources)
    unguarded: Counter = Counter(sources)
    for nid in nx.topological_sort(wiring):
        is_switch = doc.node(nid).type == platform.SWITCH
        for target in wiring.successors(nid):
            every[target] += every[nid]
            if not is_switch:
                unguarded[target] += unguarded[nid]
    return every, unguarded


class RandomModelPropertyTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        rng = random.Random(SEED)
        cls.profile = builtin_profile()
        cls.repo = load_templates()
        cls.cases = []
        for _ in range(MODELS):
            data, applied, relations = random_model(rng)
            model = parse_xmi(data)
            cls.cases.append((model, applied, relations, transform_model(model, cls.profile, cls.repo)))

    def test_models_are_distinct(self) -> None:
        self.assertEqual(len(self.cases), MODELS)
        shapes = {dump_graph(graph) for _, _, _, graph in self.cases}
        self.assertGreater(len(shapes), MODELS // 2)

    def test_transformation_is_deterministic(self) -> None:
        for index, (model, _, _, graph) in enumerate(self.cases):
            with self.subTest(index=index):
                again = transform_model(model, self.profile, self.repo)
                self.assertEqual(dump_graph(again), dump_graph(graph))

    def test_components_are_grouped_once_and_sized_by_templates(self) -> None:
        for index, (_, applied, _, graph) in enumerate(self.cases):
            with self.subTest(index=index):
                ids = [c.id for c in graph.components]
                self.assertEqual(len(ids), len(set(ids)))
                grouped = [cid for g in graph.groups for cid in g.component_ids]
                self.assertEqual(sorted(grouped), sorted(ids))
                self.assertEqual([g.use_case_id for g in graph.groups], list(applied))
                expected = sum(
                    len(expand(self.profile.lookup(name).template_id, self.repo).prototypes)
                    for names in applied.values()
                    for name in names
                )
                self.assertEqual(len(ids), expected)

    def test_relationships_become_edges(self) -> None:
        for index, (_, applied, relations, graph) in enumerate(self.cases):
            with self.subTest(index=index):
                known = {c.id for c in graph.components}
                for edge in graph.edges:
                    self.assertTrue(known.issuperset(edge.sources + edge.targets))
                extends = applied_extends(applied, relations)
                guarded = [e.guard.key for e in graph.edges if e.guard is not None]
                self.assertEqual(sorted(guarded), sorted(extends))
                origin = {c.id: c.origin_use_case for c in graph.components}
                crossing = {
                    (origin[e.source], origin[e.target])
                    for e in graph.edges
                    if e.guard is None and origin[e.source] != origin[e.target]
                }
                includes = {
                    (f"_uc{i}", f"_uc{j}")
                    for kind, i, j in relations
                    if kind == "include" and f"_uc{i}" in applied and f"_uc{j}" in applied
                }
                self.assertEqual(crossing, includes)

    def test_emitted_documents_are_valid(self) -> None:
        for index, (_, applied, relations, graph) in enumerate(self.cases):
            with self.subTest(index=index):
                configured = fill_everything(graph, THRESHOLD)
                doc = emit_flows(configured)
                self.assertEqual(check_document(doc), [])
                self.assertEqual(len(doc.tabs), len(graph.groups))
                structural = {platform.LINK_IN, platform.LINK_OUT, platform.SWITCH}
                self.assertEqual(
                    sum(1 for n in doc.nodes if n.type not in structural), len(graph.components)
                )
                switches = sum(1 for n in doc.nodes if n.type == platform.SWITCH)
                self.assertEqual(switches, len(applied_extends(applied, relations)))
                data = serialize_flows(doc)
                self.assertEqual(parse_flows(data), doc)
                self.assertEqual(serialize_flows(emit_flows(configured)), data)

    def test_messages_are_conserved_under_random_scenarios(self) -> None:
        rng = random.Random(SEED + 1)
        sink_keys = ("db_records", "emails", "dashboard", "published", "social")
        for index, (_, _, _, graph) in enumerate(self.cases):
            doc = emit_flows(fill_everything(graph, THRESHOLD))
            switches = {n.id for n in doc.nodes if n.type == platform.SWITCH}
            sinks = {n.id for n in doc.nodes if n.type in platform.SINK_TYPES}
            scenario = random_scenario(rng)
            with self.subTest(index=index, injections=len(scenario.injections)):
                trace = run_simulation(doc, scenario, credentials=secret_overlay(doc))
                evaluations = passed = fired = unheard = 0
                for injection in scenario.injections:
                    sources = sources_for(doc, injection.topic)
                    if not sources:
                        unheard += 1
                        continue
                    every, unguarded = arrivals(doc, sources)
                    reach = every if injection.payload > THRESHOLD else unguarded
                    evaluations += sum(reach[s] for s in switches)
                    if injection.payload > THRESHOLD:
                        passed += sum(every[s] for s in switches)
                    # at or below the threshold only switch-free paths reach a sink
                    fired += sum(reach[s] for s in sinks)
                counts = trace.counts()
                guard_drops = sum(n for key, n in trace.drops_by_guard().items() if key.startswith("extend:"))
                self.assertEqual(trace.passed + guard_drops, evaluations)
                self.assertEqual(trace.passed, passed)
                self.assertEqual(sum(counts[k] for k in sink_keys), fired)
                self.assertEqual(trace.drops_by_guard().get("no-subscriber", 0), unheard)


if __name__ == "__main__":
    unittest.main()
