"""Configuration: manifests, provisioning and readiness."""

from motflow.configure.manifest import ConfigurationManifest, apply_manifest, load_manifest, parse_manifest
from motflow.configure.provisioning import bind_instance, configure_graph, prompt_manifest, provision
from motflow.configure.readiness import PendingProperty, ReadinessReport, readiness, required_properties

__all__ = [
    "ConfigurationManifest",
    "PendingProperty",
    "ReadinessReport",
    "apply_manifest",
    "bind_instance",
    "configure_graph",
    "load_manifest",
    "parse_manifest",
    "prompt_manifest",
    "provision",
    "readiness",
    "required_properties",
]
