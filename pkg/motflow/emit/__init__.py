"""Flow emission and deployment packaging."""

from motflow.emit.flows import ConfigNode, FlowDocument, FlowNode, Tab, emit_flows
from motflow.emit.package import (
    DeploymentPackage,
    PackageOptions,
    WriteManifest,
    build_credentials,
    build_package,
    write_credentials,
    write_package,
)
from motflow.emit.serialize import check_document, parse_flows, serialize_flows

__all__ = [
    "ConfigNode",
    "DeploymentPackage",
    "FlowDocument",
    "FlowNode",
    "PackageOptions",
    "Tab",
    "WriteManifest",
    "build_credentials",
    "build_package",
    "check_document",
    "emit_flows",
    "parse_flows",
    "serialize_flows",
    "write_credentials",
    "write_package",
]
