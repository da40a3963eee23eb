"""MoT.Profile stereotype catalog and its extensibility contract."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from motflow.errors import DuplicateStereotype, ProfileError, UnknownStereotype
from motflow.utils import read_json_file

logger = logging.getLogger(__name__)

NAMESPACE_PREFIX = "MoT.Profile::"


class Category(str, Enum):
    """Reporting groups of the profile; they carry no behavior."""

    IOT = "IoT"
    STORAGE = "Storage"
    DASHBOARD = "Dashboard"
    EMOTIV_BCI = "EmotivBCI"
    SOCIAL = "Social"

    @classmethod
    def parse(cls, value: str) -> "Category":
        compact = value.replace(" ", "")
        for member in cls:
            if member.value == compact:
                return member
        raise ProfileError(
            f"Unknown category '{value}'. Expected one of: "
            + ", ".join(m.value for m in cls)
        )


@dataclass(frozen=True)
class Stereotype:
    """A profile stereotype bound to a template in the template repository."""

    name: str
    category: Category
    description: str
    template_id: str
    base_metaclass: str = "UseCase"

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ProfileError("Stereotype name must be non-empty.")
        if self.base_metaclass != "UseCase":
            raise ProfileError(
                f"Stereotype '{self.name}' extends '{self.base_metaclass}'; "
                "only UseCase is supported."
            )
        if not self.template_id:
            raise ProfileError(f"Stereotype '{self.name}' has no template_id.")

    def to_dict(self) -> dict[str, str]:
        return {
            "name": self.name,
            "category": self.category.value,
            "description": self.description,
            "template_id": self.template_id,
        }


@dataclass(frozen=True)
class ProfileRegistry:
    """Immutable, ordered catalog of stereotypes keyed by canonical name."""

    stereotypes: tuple[Stereotype, ...] = ()
    _index: dict[str, Stereotype] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index: dict[str, Stereotype] = {}
        for s in self.stereotypes:
            if s.name in index:
                raise DuplicateStereotype(f"Stereotype '{s.name}' is registered twice.")
            index[s.name] = s
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.stereotypes)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def names(self) -> list[str]:
        return [s.name for s in self.stereotypes]

    def categories(self) -> list[Category]:
        """Distinct categories in first-seen order."""
        seen: list[Category] = []
        for s in self.stereotypes:
            if s.category not in seen:
                seen.append(s.category)
        return seen

    def lookup(self, name: str) -> Stereotype:
        return lookup(self, name)

    def register(self, stereotype: Stereotype) -> "ProfileRegistry":
        return register(self, stereotype)


# ---------------------------------------------------------------------------
# Built-in catalog
# ---------------------------------------------------------------------------
_BUILTIN: tuple[tuple[str, Category, str, str], ...] = (
    (
        "SensorSubscribe",
        Category.IOT,
        "Monitors data from an IoT sensor by connecting to an MQTT broker "
        "and subscribing to messages from a specific topic.",
        "sensor-subscribe",
    ),
    (
        "SensorPublish",
        Category.IOT,
        "Sends data to an IoT sensor by connecting to an MQTT broker and "
        "posting messages to a specific topic.",
        "sensor-publish",
    ),
    (
        "DatabaseSave",
        Category.STORAGE,
        "Establishes a connection to a Database server to save data.",
        "database-save",
    ),
    (
        "DashboardGauge",
        Category.DASHBOARD,
        "Displays information in the form of a gauge on a Dashboard page.",
        "dashboard-gauge",
    ),
    (
        "DashboardChart",
        Category.DASHBOARD,
        "Displays information in the form of a chart on a Dashboard page.",
        "dashboard-chart",
    ),
    (
        "FacialExpression",
        Category.EMOTIV_BCI,
        "Connects an Emotiv brain-computer interface to capture a facial expression.",
        "facial-expression",
    ),
    (
        "MentalCommand",
        Category.EMOTIV_BCI,
        "Captures the value of a mental command from an Emotiv BCI profile.",
        "mental-command",
    ),
    (
        "TwitterPost",
        Category.SOCIAL,
        "Connects to a Twitter account to publish a post on the social network.",
        "twitter-post",
    ),
    (
        "SendEmail",
        Category.SOCIAL,
        "Connects to an SMTP server to send e-mail messages.",
        "send-email",
    ),
)


def builtin_profile() -> ProfileRegistry:
    """Return a fresh registry holding the nine built-in stereotypes."""
    return ProfileRegistry(
        tuple(
            Stereotype(name=name, category=cat, description=desc, template_id=tid)
            for name, cat, desc, tid in _BUILTIN
        )
    )


def normalize_stereotype_name(name: str) -> str:
    """Strip a ``MoT.Profile::`` qualifier that some tools export."""
    name = name.strip()
    if name.startswith(NAMESPACE_PREFIX):
        return name[len(NAMESPACE_PREFIX):]
    return name


def lookup(registry: ProfileRegistry, name: str) -> Stereotype:
    """Case-sensitive lookup on the canonical name."""
    try:
        return registry._index[name]
    except KeyError:
        raise UnknownStereotype(f"Stereotype '{name}' is not in the profile.") from None


def register(registry: ProfileRegistry, stereotype: Stereotype) -> ProfileRegistry:
    """Return a new registry extended with *stereotype*; the input is untouched."""
    if stereotype.name in registry:
        raise DuplicateStereotype(
            f"Stereotype '{stereotype.name}' already exists in the profile."
        )
    return ProfileRegistry(registry.stereotypes + (stereotype,))


# ---------------------------------------------------------------------------
# Extension files
# ---------------------------------------------------------------------------
def parse_profile_extension(records: object) -> list[Stereotype]:
    """Turn the decoded JSON array of an extension file into stereotypes."""
    if not isinstance(records, list):
        raise ProfileError("Profile extension must be a JSON array of stereotype records.")
    stereotypes: list[Stereotype] = []
    for idx, raw in enumerate(records):
        if not isinstance(raw, dict):
            raise ProfileError(f"Profile extension entry #{idx} is not an object.")
        missing = [k for k in ("name", "category", "template_id") if not raw.get(k)]
        if missing:
            raise ProfileError(
                f"Profile extension entry #{idx} is missing: {', '.join(missing)}"
            )
        stereotypes.append(
            Stereotype(
                name=str(raw["name"]),
                category=Category.parse(str(raw["category"])),
                description=str(raw.get("description", "")),
                template_id=str(raw["template_id"]),
                base_metaclass=str(raw.get("base_metaclass", "UseCase")),
            )
        )
    return stereotypes


def extend_from_file(registry: ProfileRegistry, path: str | Path) -> ProfileRegistry:
    """Register every stereotype listed in the extension file at *path*."""
    try:
        records = read_json_file(path, what="profile extension")
    except json.JSONDecodeError as exc:
        raise ProfileError(f"Profile extension '{path}' is not valid JSON: {exc}") from exc
    for stereotype in parse_profile_extension(records):
        registry = register(registry, stereotype)
        logger.debug("Registered stereotype %s -> %s", stereotype.name, stereotype.template_id)
    return registry
