"""Deployment package: flows file plus the scaffolding to run or deploy it."""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from motflow import __version__
from motflow.emit import platform
from motflow.emit.flows import FlowDocument, node_id
from motflow.emit.serialize import serialize_flows
from motflow.errors import IoFailure, UnknownProperty
from motflow.transform.graph import ComponentGraph
from motflow.utils import canonical_json, file_digest, slugify, write_text_file

logger = logging.getLogger(__name__)

FLOWS_FILE = "flows.json"
CREDENTIALS_FILE = "flows_cred.json"
RUN_COMMAND = "node ./node_modules/nodered/red.js -s ./settings.js"

_TEMPLATES = Path(__file__).resolve().parent / "templates"
_env = Environment(
    loader=FileSystemLoader(str(_TEMPLATES)),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=False,
)


@dataclass(frozen=True)
class PackageOptions:
    application: str = "mot-application"
    local_only: bool = False
    runtime_version: str = "3.1.9"
    serverless_version: str = "3.38.0"
    region: str = "us-east-1"
    port: int = 1880


@dataclass(frozen=True)
class DeploymentPackage:
    """Relative path → file content, in the order the files are written."""

    files: dict[str, bytes] = field(default_factory=dict)

    def paths(self) -> list[str]:
        return list(self.files)


@dataclass(frozen=True)
class WriteManifest:
    entries: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> list[dict[str, str]]:
        return [{"path": p, "sha256": d} for p, d in self.entries]


# Versions are placeholders pinned for reproducible installs.
_CONTRIB_VERSIONS = {
    "node-red-dashboard": "3.6.5",
    "node-red-node-mongodb": "0.2.5",
    "node-red-node-email": "2.2.1",
    "node-red-node-twitter": "1.2.0",
    "node-red-contrib-emotiv": "1.0.0",
}


def _package_json(doc: FlowDocument, options: PackageOptions, name: str) -> str:
    scripts = {"setup": "sh ./setup.sh", "start": RUN_COMMAND}
    dependencies = {"nodered": f"npm:node-red@{options.runtime_version}"}
    for package in platform.packages_for({n.type for n in doc.nodes}):
        dependencies[package] = _CONTRIB_VERSIONS.get(package, "*")
    manifest: dict[str, Any] = {
        "name": name,
        "version": "0.1.0",
        "private": True,
        "description": f"Node-RED application generated by motflow from the {name} model",
        "scripts": scripts,
        "dependencies": dependencies,
    }
    if not options.local_only:
        scripts["deploy"] = "serverless deploy"
        dependencies["express"] = "4.19.2"
        dependencies["serverless-http"] = "3.2.0"
        manifest["devDependencies"] = {"serverless": options.serverless_version}
    return canonical_json(manifest, indent=2) + "\n"


def _serverless_yml(options: PackageOptions, name: str) -> str:
    descriptor = {
        "service": name,
        "frameworkVersion": "3",
        "provider": {
            "name": "aws",
            "runtime": "nodejs18.x",
            "region": options.region,
            "environment": {"FLOWS_BUCKET": {"Ref": "FlowsBucket"}, "FLOWS_KEY": FLOWS_FILE},
            "iam": {
                "role": {
                    "statements": [
                        {
                            "Effect": "Allow",
                            "Action": ["s3:GetObject"],
                            "Resource": {
                                "Fn::Join": ["", ["arn:aws:s3:::", {"Ref": "FlowsBucket"}, "/*"]]
                            },
                        }
                    ]
                }
            },
        },
        "functions": {
            "nodered": {
                "handler": "handler.run",
                "timeout": 29,
                "events": [
                    {"http": {"path": "/", "method": "any"}},
                    {"http": {"path": "/{proxy+}", "method": "any"}},
                ],
            }
        },
        "resources": {"Resources": {"FlowsBucket": {"Type": "AWS::S3::Bucket"}}},
        "custom": {"flowsArtifact": f"./{FLOWS_FILE}"},
        "package": {"patterns": [f"!{CREDENTIALS_FILE}"]},
    }
    return yaml.safe_dump(descriptor, sort_keys=False, default_flow_style=False)


def build_package(doc: FlowDocument, options: PackageOptions | None = None) -> DeploymentPackage:
    """Assemble the package files; ``local_only`` drops the serverless descriptor."""
    options = options or PackageOptions()
    name = slugify(options.application)
    context = {
        "application": name,
        "version": __version__,
        "flow_file": FLOWS_FILE,
        "credentials_file": CREDENTIALS_FILE,
        "port": options.port,
        "local_only": options.local_only,
        "run_command": RUN_COMMAND,
    }
    files: dict[str, bytes] = {
        FLOWS_FILE: serialize_flows(doc),
        "package.json": _package_json(doc, options, name).encode("utf-8"),
        "settings.js": _env.get_template("settings.js.j2").render(context).encode("utf-8"),
        "setup.sh": _env.get_template("setup.sh.j2").render(context).encode("utf-8"),
    }
    if not options.local_only:
        files["serverless.yml"] = _serverless_yml(options, name).encode("utf-8")
    return DeploymentPackage(files)


def write_package(pkg: DeploymentPackage, path: str | Path) -> WriteManifest:
    """Write every file under *path* and return (relative path, sha256) pairs.

    Raises:
        IoFailure: The directory or a file cannot be written.
    """
    root = Path(path)
    entries: list[tuple[str, str]] = []
    for relative, content in pkg.files.items():
        target = root / relative
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(content)
            if relative.endswith(".sh"):
                os.chmod(target, 0o755)
        except OSError as exc:
            raise IoFailure(f"Cannot write '{target}': {exc.strerror or exc}") from exc
        entries.append((relative, file_digest(content)))
    logger.info("Wrote %d package files to %s", len(entries), root)
    return WriteManifest(tuple(sorted(entries)))


# ---------------------------------------------------------------------------
# Credentials overlay
# ---------------------------------------------------------------------------
def graph_secrets(graph: ComponentGraph) -> dict[str, dict[str, Any]]:
    """Deferred values already supplied through a manifest, keyed like the overlay."""
    overlay: dict[str, dict[str, Any]] = {}
    for component in graph.components:
        mapping = platform.mapping_for(component.node_kind)
        for slot in component.slots:
            if slot.is_deferred and slot.is_filled:
                overlay.setdefault(node_id(component.id), {})[mapping.key_for(slot.name)] = slot.value
    return overlay


def build_credentials(
    doc: FlowDocument,
    credentials: Mapping[str, Mapping[str, Any]],
    base: Mapping[str, Mapping[str, Any]] | None = None,
) -> dict[str, dict[str, Any]]:
    """Merge user credentials into ``{node_id: {property: value}}``.

    Selectors are node ids or ``<tab label>/<node name>`` aliases; property
    names may be slot names or platform keys.

    Raises:
        UnknownComponent: A selector matches no flow node.
        UnknownProperty: The property is not a deferred secret of that node.
    """
    overlay = {k: dict(v) for k, v in (base or {}).items()}
    for selector, values in credentials.items():
        for node in doc.select(selector):
            for prop, value in values.items():
                key = platform.platform_key(node.type, prop)
                if not platform.is_secret_placeholder(node.config.get(key)):
                    raise UnknownProperty(f"'{selector}' has no deferred secret '{prop}'.")
                overlay.setdefault(node.id, {})[key] = value
    return overlay


def write_credentials(overlay: Mapping[str, Mapping[str, Any]], path: str | Path) -> Path:
    target = Path(path)
    write_text_file(target, canonical_json({k: dict(v) for k, v in overlay.items()}) + "\n")
    return target
