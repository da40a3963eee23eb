"""Simulation scenarios: timed injections, overrides and credentials."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from motflow.errors import ScenarioError
from motflow.utils import read_json_file


@dataclass(frozen=True)
class Injection:
    at: int
    topic: str
    payload: Any


@dataclass(frozen=True)
class SimulationScenario:
    """Injections are kept sorted by time; ties keep their list order."""

    injections: tuple[Injection, ...] = ()
    overrides: dict[str, dict[str, Any]] = field(default_factory=dict)
    credentials: dict[str, dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.injections, key=lambda i: i.at))
        object.__setattr__(self, "injections", ordered)


def _selector_map(raw: Any, what: str) -> dict[str, dict[str, Any]]:
    if raw is None:
        return {}
    if not isinstance(raw, dict) or not all(isinstance(v, dict) for v in raw.values()):
        raise ScenarioError(f"'{what}' must map selectors to {{property: value}} objects.")
    return {str(k): dict(v) for k, v in raw.items()}


def parse_scenario(raw: Any) -> SimulationScenario:
    if not isinstance(raw, dict):
        raise ScenarioError("Scenario must be a JSON object.")
    items = raw.get("injections", [])
    if not isinstance(items, list):
        raise ScenarioError("'injections' must be a list.")
    injections: list[Injection] = []
    for idx, item in enumerate(items):
        if not isinstance(item, dict) or "topic" not in item or "payload" not in item:
            raise ScenarioError(f"Injection #{idx} needs 'topic' and 'payload'.")
        at = item.get("at", 0)
        if isinstance(at, bool) or not isinstance(at, int) or at < 0:
            raise ScenarioError(f"Injection #{idx}: 'at' must be a non-negative integer (ms).")
        if not isinstance(item["topic"], str) or not item["topic"]:
            raise ScenarioError(f"Injection #{idx}: 'topic' must be non-empty text.")
        injections.append(Injection(at, item["topic"], item["payload"]))
    return SimulationScenario(
        injections=tuple(injections),
        overrides=_selector_map(raw.get("overrides"), "overrides"),
        credentials=_selector_map(raw.get("credentials"), "credentials"),
    )


def load_scenario(path: str | Path) -> SimulationScenario:
    try:
        raw = read_json_file(path, what="scenario")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"Scenario '{path}' is not valid JSON: {exc}") from exc
    return parse_scenario(raw)
