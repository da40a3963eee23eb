"""Unit tests for the template repository and expansion."""

from __future__ import annotations

import json
import random
import tempfile
import unittest
from pathlib import Path
from typing import Any

from motflow.errors import CyclicTemplate, IoFailure, TemplateSyntax, UnresolvedChild
from motflow.transform.expander import expand
from motflow.transform.templates import (
    BUILTIN_TEMPLATE_DIR,
    PropertySpec,
    Sensitivity,
    ValueType,
    load_templates,
    value_matches,
)
from tests._support import EXTENSION_TEMPLATES

BUILTIN_COMPOSITES = {
    "sensor-subscribe": ["mqtt-in", "json-parse"],
    "sensor-publish": ["json-serialize", "mqtt-out"],
    "database-save": ["db-write"],
    "dashboard-gauge": ["gauge"],
    "dashboard-chart": ["chart"],
    "send-email": ["email-send"],
    "twitter-post": ["twitter-post"],
    "facial-expression": ["bci-facial"],
    "mental-command": ["bci-mental"],
}

CYCLIC_REPO = 17


def _write_repo(directory: Path, templates: list[dict[str, Any]]) -> None:
    for raw in templates:
        (directory / f"{raw['id']}.json").write_text(json.dumps(raw), encoding="utf-8")


def _leaf(template_id: str, node_kind: str | None = None) -> dict[str, Any]:
    return {
        "id": template_id,
        "kind": "leaf",
        "node_kind": node_kind or template_id,
        "properties": [{"name": "label", "type": "Text", "default": template_id}],
    }


def _oracle_kinds(raw: dict[str, dict[str, Any]], template_id: str) -> list[str]:
    """Leaf node kinds reached from *template_id*, depth first, straight from the JSON."""
    template = raw[template_id]
    if template["kind"] == "leaf":
        return [template["node_kind"]]
    kinds: list[str] = []
    for child in template["children"]:
        kinds.extend(_oracle_kinds(raw, child))
    return kinds


def _random_repo(rng: random.Random, cyclic: bool = False) -> list[dict[str, Any]]:
    """Leaves and composites over earlier templates; *cyclic* adds a ``loop-a``/``loop-b`` pair."""
    templates = [_leaf(f"leaf-{i}") for i in range(rng.randint(1, 5))]
    for i in range(rng.randint(1, 6)):
        pool = [t["id"] for t in templates]
        children = [rng.choice(pool) for _ in range(rng.randint(1, 4))]
        composite: dict[str, Any] = {"id": f"comp-{i}", "kind": "composite", "children": children}
        if rng.random() < 0.5:
            composite["chain"] = True
        elif len(children) > 1:
            composite["edges"] = [[0, len(children) - 1]]
        templates.append(composite)
    if cyclic:
        leaf = rng.choice([t["id"] for t in templates if t["kind"] == "leaf"])
        templates.append({"id": "loop-a", "kind": "composite", "children": [leaf, "loop-b"], "chain": True})
        templates.append({"id": "loop-b", "kind": "composite", "children": ["loop-a"]})
    return templates


class BuiltinRepositoryTests(unittest.TestCase):
    def setUp(self) -> None:
        self.repo = load_templates()

    def test_every_builtin_composite_expands_to_expected_leaves(self) -> None:
        for template_id, kinds in BUILTIN_COMPOSITES.items():
            with self.subTest(template=template_id):
                expansion = expand(template_id, self.repo)
                self.assertEqual([p.node_kind for p in expansion.prototypes], kinds)

    def test_sensor_subscribe_is_a_chain(self) -> None:
        expansion = expand("sensor-subscribe", self.repo)
        self.assertEqual(expansion.edges, ((0, 1),))
        self.assertEqual(expansion.entries, (0,))
        self.assertEqual(expansion.terminals, (1,))
        self.assertEqual(
            expansion.prototypes[0].template_path, ("sensor-subscribe", "node-mqtt-in")
        )

    def test_leaf_expands_to_itself(self) -> None:
        expansion = expand("node-gauge", self.repo)
        self.assertEqual(len(expansion.prototypes), 1)
        self.assertEqual(expansion.prototypes[0].template_path, ("node-gauge",))

    def test_email_password_is_deferred_secret(self) -> None:
        props = {p.name: p for p in self.repo.get("node-email-send").properties}
        self.assertIs(props["smtp_password"].value_type, ValueType.SECRET)
        self.assertIs(props["smtp_password"].sensitivity, Sensitivity.DEFERRED)
        self.assertTrue(props["smtp_port"].required)

    def test_extension_directory_layers_over_builtin(self) -> None:
        repo = load_templates(BUILTIN_TEMPLATE_DIR, EXTENSION_TEMPLATES)
        expansion = expand("sensor-average", repo)
        self.assertEqual(
            [p.node_kind for p in expansion.prototypes], ["mqtt-in", "json-parse", "function"]
        )
        self.assertEqual(len(repo), len(self.repo) + 1)


class TemplateLoadingTests(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_missing_child_is_unresolved(self) -> None:
        _write_repo(self.dir, [{"id": "a", "kind": "composite", "children": ["ghost"]}])
        with self.assertRaises(UnresolvedChild):
            load_templates(self.dir)

    def test_file_name_must_match_id(self) -> None:
        (self.dir / "other.json").write_text(json.dumps(_leaf("a")), encoding="utf-8")
        with self.assertRaises(TemplateSyntax):
            load_templates(self.dir)

    def test_invalid_json(self) -> None:
        (self.dir / "a.json").write_text("{", encoding="utf-8")
        with self.assertRaises(TemplateSyntax):
            load_templates(self.dir)

    def test_secret_must_be_deferred(self) -> None:
        raw = _leaf("a")
        raw["properties"] = [{"name": "pw", "type": "Secret", "sensitivity": "Plain"}]
        _write_repo(self.dir, [raw])
        with self.assertRaises(TemplateSyntax):
            load_templates(self.dir)

    def test_chain_and_edges_are_exclusive(self) -> None:
        _write_repo(
            self.dir,
            [_leaf("x"), {"id": "a", "kind": "composite", "children": ["x", "x"], "chain": True, "edges": [[0, 1]]}],
        )
        with self.assertRaises(TemplateSyntax):
            load_templates(self.dir)

    def test_duplicate_id_across_directories(self) -> None:
        second = self.dir / "second"
        second.mkdir()
        _write_repo(self.dir, [_leaf("a")])
        _write_repo(second, [_leaf("a")])
        with self.assertRaises(TemplateSyntax):
            load_templates(self.dir, second)

    def test_missing_directory(self) -> None:
        with self.assertRaises(IoFailure):
            load_templates(self.dir / "absent")

    def test_cycle_loads_but_does_not_expand(self) -> None:
        _write_repo(
            self.dir,
            [
                {"id": "a", "kind": "composite", "children": ["b"]},
                {"id": "b", "kind": "composite", "children": ["a"]},
            ],
        )
        repo = load_templates(self.dir)
        with self.assertRaises(CyclicTemplate) as ctx:
            expand("a", repo)
        self.assertIn("a -> b -> a", ctx.exception.message)

    def test_explicit_edges_fan_out(self) -> None:
        _write_repo(
            self.dir,
            [
                _leaf("src"),
                _leaf("left"),
                _leaf("right"),
                {"id": "fan", "kind": "composite", "children": ["src", "left", "right"], "edges": [[0, 1], [0, 2]]},
            ],
        )
        expansion = expand("fan", load_templates(self.dir))
        self.assertEqual(sorted(expansion.edges), [(0, 1), (0, 2)])
        self.assertEqual(expansion.entries, (0,))
        self.assertEqual(expansion.terminals, (1, 2))

    def test_random_repositories_match_oracle(self) -> None:
        rng = random.Random(20240611)
        cycles = 0
        for n in range(50):
            templates = _random_repo(rng, cyclic=n == CYCLIC_REPO)
            raw = {t["id"]: t for t in templates}
            with tempfile.TemporaryDirectory() as tmp, self.subTest(repo=n):
                _write_repo(Path(tmp), templates)
                repo = load_templates(tmp)
                for template_id in raw:
                    if template_id.startswith("loop-"):
                        with self.assertRaises(CyclicTemplate):
                            expand(template_id, repo)
                        cycles += 1
                        continue
                    expansion = expand(template_id, repo)
                    self.assertEqual(
                        [p.node_kind for p in expansion.prototypes],
                        _oracle_kinds(raw, template_id),
                    )
                    for a, b in expansion.edges:
                        self.assertLess(a, len(expansion.prototypes))
                        self.assertLess(b, len(expansion.prototypes))
        self.assertEqual(cycles, 2)


class PropertySpecTests(unittest.TestCase):
    def test_value_matches(self) -> None:
        self.assertTrue(value_matches(ValueType.INTEGER, 3))
        self.assertFalse(value_matches(ValueType.INTEGER, True))
        self.assertTrue(value_matches(ValueType.BOOLEAN, False))
        self.assertTrue(value_matches(ValueType.SERVICE_REF, "mock://x"))
        self.assertFalse(value_matches(ValueType.TEXT, 3))

    def test_default_must_match_type(self) -> None:
        with self.assertRaises(TemplateSyntax):
            PropertySpec("port", ValueType.INTEGER, default="25")

    def test_secret_defaults_to_deferred_when_read(self) -> None:
        spec = PropertySpec.from_dict({"name": "token", "type": "Secret"})
        self.assertIs(spec.sensitivity, Sensitivity.DEFERRED)
        self.assertEqual(PropertySpec.from_dict(spec.to_dict()), spec)


if __name__ == "__main__":
    unittest.main()
