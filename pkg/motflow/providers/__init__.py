"""Backing-service providers."""

from motflow.providers.base import (
    Binding,
    Provider,
    ProvisionRequest,
    ServiceInstance,
    ServiceKind,
)
from motflow.providers.mock import MockProvider

__all__ = [
    "Binding",
    "MockProvider",
    "Provider",
    "ProvisionRequest",
    "ServiceInstance",
    "ServiceKind",
]
