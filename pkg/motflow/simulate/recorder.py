"""Trace recording for simulation runs."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from motflow.utils import write_text_file


# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class DbRecord:
    time: int
    collection: str
    document: Any


@dataclass(frozen=True)
class EmailEvent:
    time: int
    recipient: str
    subject: str
    body: str


@dataclass(frozen=True)
class DashboardEvent:
    time: int
    widget: str
    value: Any


@dataclass(frozen=True)
class PublishedEvent:
    time: int
    topic: str
    payload: Any


@dataclass(frozen=True)
class SocialEvent:
    time: int
    text: str


@dataclass(frozen=True)
class DroppedEvent:
    time: int
    guard: str
    payload: Any


@dataclass(frozen=True)
class SimulationTrace:
    db_records: tuple[DbRecord, ...] = ()
    emails: tuple[EmailEvent, ...] = ()
    dashboard: tuple[DashboardEvent, ...] = ()
    published: tuple[PublishedEvent, ...] = ()
    social: tuple[SocialEvent, ...] = ()
    dropped: tuple[DroppedEvent, ...] = ()
    passed: int = 0

    def counts(self) -> dict[str, int]:
        return {
            "db_records": len(self.db_records),
            "emails": len(self.emails),
            "dashboard": len(self.dashboard),
            "published": len(self.published),
            "social": len(self.social),
            "dropped": len(self.dropped),
        }

    def drops_by_guard(self) -> dict[str, int]:
        return dict(Counter(d.guard for d in self.dropped))

    def to_dict(self) -> dict[str, Any]:
        return {
            "db_records": [asdict(e) for e in self.db_records],
            "emails": [asdict(e) for e in self.emails],
            "dashboard": [asdict(e) for e in self.dashboard],
            "published": [asdict(e) for e in self.published],
            "social": [asdict(e) for e in self.social],
            "dropped": [asdict(e) for e in self.dropped],
            "guards_passed": self.passed,
        }


def trace_from_dict(raw: dict[str, Any]) -> SimulationTrace:
    return SimulationTrace(
        db_records=tuple(DbRecord(**e) for e in raw.get("db_records", [])),
        emails=tuple(EmailEvent(**e) for e in raw.get("emails", [])),
        dashboard=tuple(DashboardEvent(**e) for e in raw.get("dashboard", [])),
        published=tuple(PublishedEvent(**e) for e in raw.get("published", [])),
        social=tuple(SocialEvent(**e) for e in raw.get("social", [])),
        dropped=tuple(DroppedEvent(**e) for e in raw.get("dropped", [])),
        passed=int(raw.get("guards_passed", 0)),
    )


# ---------------------------------------------------------------------------
# Recorder
# ---------------------------------------------------------------------------
class TraceRecorder:
    """Collects sink events during one run; :meth:`summarize` freezes them."""

    def __init__(self) -> None:
        self._db: list[DbRecord] = []
        self._emails: list[EmailEvent] = []
        self._dashboard: list[DashboardEvent] = []
        self._published: list[PublishedEvent] = []
        self._social: list[SocialEvent] = []
        self._dropped: list[DroppedEvent] = []
        self._passed = 0
        self.collections: dict[str, list[Any]] = {}

    def record_db(self, time: int, collection: str, document: Any) -> None:
        self._db.append(DbRecord(time, collection, document))
        self.collections.setdefault(collection, []).append(document)

    def record_email(self, time: int, recipient: str, subject: str, body: str) -> None:
        self._emails.append(EmailEvent(time, recipient, subject, body))

    def record_dashboard(self, time: int, widget: str, value: Any) -> None:
        self._dashboard.append(DashboardEvent(time, widget, value))

    def record_published(self, time: int, topic: str, payload: Any) -> None:
        self._published.append(PublishedEvent(time, topic, payload))

    def record_social(self, time: int, text: str) -> None:
        self._social.append(SocialEvent(time, text))

    def record_dropped(self, time: int, guard: str, payload: Any) -> None:
        self._dropped.append(DroppedEvent(time, guard, payload))

    def record_passed(self) -> None:
        self._passed += 1

    def summarize(self) -> SimulationTrace:
        return SimulationTrace(
            db_records=tuple(self._db),
            emails=tuple(self._emails),
            dashboard=tuple(self._dashboard),
            published=tuple(self._published),
            social=tuple(self._social),
            dropped=tuple(self._dropped),
            passed=self._passed,
        )


def write_db_dump(trace: SimulationTrace, path: str | Path) -> Path:
    """Write the in-memory collection store as JSON lines, one record per line."""
    lines = [
        json.dumps({"collection": r.collection, "document": r.document}, ensure_ascii=False)
        for r in trace.db_records
    ]
    target = Path(path)
    write_text_file(target, "".join(line + "\n" for line in lines))
    return target
