"""Provider interface for backing services (databases, brokers, object stores).

A provider turns a :class:`ProvisionRequest` into a :class:`ServiceInstance`
whose ``connection`` text is bound into a ``ServiceRef`` slot.  Only the
in-process mock ships; a cloud adapter implements the same three methods::

    class MyCloudProvider:
        provider_id = "mycloud"

        def provision(self, request): ...
        def teardown(self, instance_name): ...
        def list_instances(self): ...
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Protocol, runtime_checkable

from motflow.errors import ManifestError


class ServiceKind(str, Enum):
    DOCUMENT_DB = "DocumentDb"
    MQTT_BROKER = "MqttBroker"
    OBJECT_STORE = "ObjectStore"

    @classmethod
    def parse(cls, value: str) -> "ServiceKind":
        try:
            return cls(value)
        except ValueError:
            raise ManifestError(
                f"Unknown service kind '{value}'. Expected one of: "
                + ", ".join(m.value for m in cls)
            ) from None


@dataclass(frozen=True)
class Binding:
    component: str
    property_name: str


@dataclass(frozen=True)
class ProvisionRequest:
    provider_id: str
    service_kind: ServiceKind
    instance_name: str
    bind_to: Binding | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "provider": self.provider_id,
            "service_kind": self.service_kind.value,
            "instance_name": self.instance_name,
            "bind_to": (
                {"component": self.bind_to.component, "property": self.bind_to.property_name}
                if self.bind_to
                else None
            ),
        }


@dataclass(frozen=True)
class ServiceInstance:
    provider_id: str
    service_kind: ServiceKind
    instance_name: str
    connection: str

    def to_dict(self) -> dict[str, str]:
        return {
            "provider": self.provider_id,
            "service_kind": self.service_kind.value,
            "instance_name": self.instance_name,
            "connection": self.connection,
        }


@runtime_checkable
class Provider(Protocol):
    provider_id: str

    def provision(self, request: ProvisionRequest) -> ServiceInstance: ...

    def teardown(self, instance_name: str) -> None: ...

    def list_instances(self) -> list[ServiceInstance]: ...
