"""In-process provider with deterministic connection strings."""

from __future__ import annotations

import logging
import threading

from motflow.errors import DuplicateInstance, ProviderUnavailable
from motflow.providers.base import ProvisionRequest, ServiceInstance

logger = logging.getLogger(__name__)


class MockProvider:
    """Records instances for one session; equal requests give equal connections.

    Args:
        provider_id: Identifier manifests use to select this provider.
        available: ``False`` simulates an unreachable provider.
    """

    def __init__(self, provider_id: str = "mock", available: bool = True) -> None:
        self.provider_id = provider_id
        self.available = available
        self._instances: dict[str, ServiceInstance] = {}
        self._lock = threading.Lock()

    def _check(self) -> None:
        if not self.available:
            raise ProviderUnavailable(f"Provider '{self.provider_id}' is unavailable.")

    def provision(self, request: ProvisionRequest) -> ServiceInstance:
        if request.provider_id != self.provider_id:
            raise ProviderUnavailable(
                f"Request targets provider '{request.provider_id}', not '{self.provider_id}'."
            )
        self._check()
        with self._lock:
            if request.instance_name in self._instances:
                raise DuplicateInstance(
                    f"Instance '{request.instance_name}' was already provisioned "
                    f"by '{self.provider_id}'."
                )
            instance = ServiceInstance(
                provider_id=self.provider_id,
                service_kind=request.service_kind,
                instance_name=request.instance_name,
                connection=(
                    f"mock://{self.provider_id}/{request.service_kind.value.lower()}/"
                    f"{request.instance_name}"
                ),
            )
            self._instances[request.instance_name] = instance
        logger.info("Provisioned %s %s", instance.service_kind.value, instance.connection)
        return instance

    def teardown(self, instance_name: str) -> None:
        self._check()
        with self._lock:
            if self._instances.pop(instance_name, None) is None:
                logger.warning("Teardown of unknown instance '%s' ignored", instance_name)

    def list_instances(self) -> list[ServiceInstance]:
        with self._lock:
            return list(self._instances.values())
