"""Validation 1: hospital pipeline end to end.

Parses the hospital model, transforms, configures with the fixture manifest,
emits the flows and writes the deployment package to a temporary directory.
Validates the structure against the golden flows file.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from motflow.configure.readiness import readiness
from motflow.emit.flows import emit_flows
from motflow.emit.package import PackageOptions, build_package, write_package
from motflow.emit.serialize import check_document, serialize_flows
from tests._support import GOLDEN_FLOWS, SMTP_PASSWORD, configured_hospital, hospital_graph


def run() -> list[str]:
    """Run the pipeline validation. Returns a list of failure messages (empty = pass)."""
    failures: list[str] = []

    graph = hospital_graph()

    # 1. Five components in four use-case groups
    if len(graph.components) != 5 or len(graph.groups) != 4:
        failures.append(
            f"Expected 5 components in 4 groups, got {len(graph.components)} in {len(graph.groups)}"
        )

    # 2. Exactly one guarded edge
    guarded = [e for e in graph.edges if e.guard is not None]
    if len(guarded) != 1:
        failures.append(f"Expected 1 guarded edge, got {len(guarded)}")

    # 3. The manifest makes the graph ready
    configured = configured_hospital()
    report = readiness(configured)
    if not report.ready:
        failures.append(f"Configured graph still pending: {report.to_dict()['pending_required']}")

    # 4. Emission matches the golden file and is structurally valid
    doc = emit_flows(configured)
    data = serialize_flows(doc)
    if data != GOLDEN_FLOWS.read_bytes():
        failures.append("Emitted flows differ from the golden file")
    problems = check_document(doc)
    if problems:
        failures.append(f"Flow document problems: {problems}")

    # 5. Package lands on disk with one digest per file and no secrets
    with tempfile.TemporaryDirectory() as tmp:
        manifest = write_package(build_package(doc, PackageOptions(application=graph.application)), tmp)
        written = sorted(p.name for p in Path(tmp).iterdir())
        if written != sorted(path for path, _ in manifest.entries):
            failures.append(f"Package files {written} do not match the manifest")
        for path in Path(tmp).iterdir():
            if SMTP_PASSWORD in path.read_text(encoding="utf-8"):
                failures.append(f"Secret leaked into {path.name}")
        package_json = json.loads((Path(tmp) / "package.json").read_text(encoding="utf-8"))
        if "node-red-node-email" not in package_json.get("dependencies", {}):
            failures.append("package.json lacks the e-mail node package")

    return failures
