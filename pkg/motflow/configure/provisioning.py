"""Service provisioning and the end-to-end configure step."""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from typing import Any

from motflow.configure.manifest import ConfigurationManifest, apply_manifest
from motflow.configure.readiness import required_properties
from motflow.errors import ManifestError, ProviderUnavailable, TypeMismatch
from motflow.providers.base import Binding, Provider, ProvisionRequest, ServiceInstance
from motflow.transform.graph import ComponentGraph
from motflow.transform.templates import Sensitivity, ValueType

logger = logging.getLogger(__name__)


def provision(request: ProvisionRequest, provider: Provider) -> ServiceInstance:
    """Create the requested service through *provider*.

    Raises:
        ProviderUnavailable: *provider* is not the one the request names, or
            cannot be reached.
        DuplicateInstance: The instance name was already used in this session.
    """
    if request.provider_id != provider.provider_id:
        raise ProviderUnavailable(
            f"Request for provider '{request.provider_id}' sent to '{provider.provider_id}'."
        )
    if not request.instance_name.strip():
        raise ManifestError("Provision request has an empty instance name.")
    return provider.provision(request)


def bind_instance(graph: ComponentGraph, instance: ServiceInstance, binding: Binding) -> ComponentGraph:
    component = graph.resolve_component(binding.component)
    spec = component.slot(binding.property_name).spec
    if spec.value_type is not ValueType.SERVICE_REF:
        raise TypeMismatch(
            f"{binding.component}.{binding.property_name} is {spec.value_type.value}, "
            "only ServiceRef slots accept a provisioned service."
        )
    return graph.with_component(component.with_value(binding.property_name, instance.connection))


def configure_graph(
    graph: ComponentGraph,
    manifest: ConfigurationManifest,
    providers: Mapping[str, Provider],
) -> tuple[ComponentGraph, list[ServiceInstance]]:
    """Run the manifest's provisions in order, bind them, then apply its entries."""
    instances: list[ServiceInstance] = []
    for request in manifest.provisions:
        provider = providers.get(request.provider_id)
        if provider is None:
            raise ProviderUnavailable(f"No provider named '{request.provider_id}' is configured.")
        instance = provision(request, provider)
        instances.append(instance)
        if request.bind_to is not None:
            graph = bind_instance(graph, instance, request.bind_to)
    return apply_manifest(graph, manifest), instances


# ---------------------------------------------------------------------------
# Interactive authoring
# ---------------------------------------------------------------------------
def _coerce(raw: str, value_type: ValueType) -> Any:
    if value_type is ValueType.INTEGER:
        return int(raw)
    if value_type is ValueType.BOOLEAN:
        lowered = raw.strip().lower()
        if lowered in {"y", "yes", "true", "1"}:
            return True
        if lowered in {"n", "no", "false", "0"}:
            return False
        raise ValueError(raw)
    return raw


def prompt_manifest(
    graph: ComponentGraph,
    ask: Callable[[str], str] = input,
    base: ConfigurationManifest | None = None,
) -> ConfigurationManifest:
    """Ask for every pending plain property and return the resulting manifest.

    An empty answer leaves the property pending.  Secrets are never asked for;
    they belong in the credentials overlay.
    """
    base = base or ConfigurationManifest()
    entries = {k: dict(v) for k, v in base.entries.items()}
    for pending in required_properties(graph):
        if pending.sensitivity is Sensitivity.DEFERRED:
            continue
        alias = graph.alias(graph.component(pending.component_id))
        while True:
            answer = ask(f"{alias}.{pending.property_name} [{pending.value_type.value}]: ").strip()
            if not answer:
                break
            try:
                entries.setdefault(alias, {})[pending.property_name] = _coerce(answer, pending.value_type)
                break
            except ValueError:
                logger.warning("'%s' is not a valid %s", answer, pending.value_type.value)
    for key in graph.guard_keys():
        if key in entries:
            continue
        answer = ask(f"{key}.threshold [number]: ").strip()
        if answer:
            try:
                entries[key] = {"threshold": _coerce(answer, ValueType.INTEGER)}
            except ValueError:
                entries[key] = {"threshold": answer}
    return ConfigurationManifest(entries, base.provisions)
