"""CLI entry point for motflow."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path
from typing import Any

from motflow import __version__
from motflow.config import (
    DEFAULT_OUTPUT_DIR,
    MANIFEST_FILE,
    SERVICES_FILE,
    TRACE_FILE,
    PipelineConfig,
    configure_logging,
    default_template_paths,
)
from motflow.errors import ManifestError, MotError, NotReady
from motflow.utils import canonical_json, read_json_file, write_text_file

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------
def _emit(data: Any, pretty: bool = False) -> None:
    """Write a report to stdout: canonical JSON, or a ``rich`` rendering."""
    if pretty:
        try:
            from rich.console import Console
        except ImportError:
            print(
                "--pretty needs the optional 'rich' package: pip install 'motflow[rich]'",
                file=sys.stderr,
            )
        else:
            Console().print_json(data=data)
            return
    print(canonical_json(data, indent=2))


def _load_json_map(path: Path | None, what: str) -> dict[str, dict[str, Any]]:
    if path is None:
        return {}
    try:
        raw = read_json_file(path, what=what)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{what.capitalize()} '{path}' is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not all(isinstance(v, dict) for v in raw.values()):
        raise ManifestError(f"{what.capitalize()} must map selectors to {{property: value}} objects.")
    return raw


# ---------------------------------------------------------------------------
# Stages (shared by the subcommands and `pipeline`)
# ---------------------------------------------------------------------------
def _profile(config: PipelineConfig):
    from motflow.model.profile import builtin_profile, extend_from_file

    registry = builtin_profile()
    if config.profile_extension_path is not None:
        registry = extend_from_file(registry, config.profile_extension_path)
    return registry


def _mode(config: PipelineConfig):
    from motflow.model.validation import ValidationMode

    return ValidationMode.STRICT if config.strict else ValidationMode.LENIENT


def stage_validate(config: PipelineConfig) -> dict[str, Any]:
    from motflow.model.validation import validate_model
    from motflow.model.xmi import parse_xmi_file

    registry = _profile(config)
    model = parse_xmi_file(str(config.model_path), stereotype_names=registry.names())
    report = validate_model(model, registry, _mode(config))
    result = report.to_dict()
    result["model"] = {
        "name": model.name,
        "source_tool": model.source_tool,
        "actors": len(model.actors),
        "use_cases": len(model.use_cases),
        "relationships": len(model.relationships),
        "applications": len(model.applications),
    }
    return result


def stage_transform(config: PipelineConfig) -> dict[str, Any]:
    from motflow.configure.readiness import readiness
    from motflow.model.xmi import parse_xmi_file
    from motflow.transform.builder import transform_model
    from motflow.transform.graph import dump_graph
    from motflow.transform.templates import load_templates

    registry = _profile(config)
    repo = load_templates(*config.template_paths)
    model = parse_xmi_file(str(config.model_path), stereotype_names=registry.names())
    graph = transform_model(model, registry, repo, _mode(config))
    write_text_file(config.graph_file, dump_graph(graph) + "\n")
    return {
        "graph": str(config.graph_file),
        "application": graph.application,
        "groups": [
            {"use_case": g.label, "components": [graph.component(c).node_kind for c in g.component_ids]}
            for g in graph.groups
        ],
        "components": len(graph.components),
        "edges": len(graph.edges),
        "guarded_edges": sum(1 for e in graph.edges if e.guard is not None),
        "readiness": readiness(graph).to_dict(),
    }


def stage_configure(
    config: PipelineConfig,
    graph_path: Path | None = None,
    interactive: bool = False,
    ask: Callable[[str], str] | None = None,
) -> dict[str, Any]:
    from motflow.configure.manifest import ConfigurationManifest, load_manifest
    from motflow.configure.provisioning import configure_graph, prompt_manifest
    from motflow.configure.readiness import readiness
    from motflow.providers.mock import MockProvider
    from motflow.transform.graph import dump_graph, load_graph

    graph = load_graph(graph_path or config.graph_file)
    manifest = load_manifest(config.manifest_path) if config.manifest_path else ConfigurationManifest()
    if interactive:
        manifest = prompt_manifest(graph, ask=ask or input, base=manifest)
        manifest_path = (graph_path or config.graph_file).parent / MANIFEST_FILE
        write_text_file(manifest_path, canonical_json(manifest.to_dict()) + "\n")
        logger.info("Wrote manifest to %s", manifest_path)

    configured, instances = configure_graph(graph, manifest, {"mock": MockProvider()})
    write_text_file(config.configured_graph_file, dump_graph(configured) + "\n")
    write_text_file(
        config.output_dir / SERVICES_FILE,
        canonical_json([i.to_dict() for i in instances]) + "\n",
    )
    result = readiness(configured).to_dict()
    result["graph"] = str(config.configured_graph_file)
    if interactive:
        result["manifest"] = str(manifest_path)
    result["services"] = [i.to_dict() for i in instances]
    return result


def stage_build(config: PipelineConfig, graph_path: Path | None = None) -> dict[str, Any]:
    from motflow.configure.readiness import readiness
    from motflow.emit.flows import emit_flows
    from motflow.emit.package import (
        CREDENTIALS_FILE,
        FLOWS_FILE,
        PackageOptions,
        build_credentials,
        build_package,
        graph_secrets,
        write_credentials,
        write_package,
    )
    from motflow.transform.graph import load_graph

    graph = load_graph(graph_path or config.configured_graph_file)
    doc = emit_flows(graph)
    pkg = build_package(doc, PackageOptions(application=graph.application, local_only=config.local_only))
    manifest = write_package(pkg, config.package_dir)

    overlay = build_credentials(
        doc, _load_json_map(config.credentials_path, "credentials"), base=graph_secrets(graph)
    )
    credentials_path = None
    if overlay:
        credentials_path = write_credentials(overlay, config.package_dir / CREDENTIALS_FILE)
    return {
        "package": str(config.package_dir),
        "flows": str(config.package_dir / FLOWS_FILE),
        "files": manifest.to_dict(),
        "credentials": str(credentials_path) if credentials_path else None,
        "tabs": [t.label for t in doc.tabs],
        "warnings": [f"guard {k} has no threshold" for k in readiness(graph).unset_guards],
    }


def stage_simulate(
    config: PipelineConfig,
    flows_path: Path | None = None,
    trace_out: Path | None = None,
    db_dump: Path | None = None,
) -> dict[str, Any]:
    from motflow.emit.package import CREDENTIALS_FILE, FLOWS_FILE
    from motflow.emit.serialize import parse_flows
    from motflow.errors import IoFailure, ScenarioError
    from motflow.simulate.recorder import write_db_dump
    from motflow.simulate.runtime import run_simulation
    from motflow.simulate.scenario import SimulationScenario, load_scenario

    flows_path = flows_path or config.package_dir / FLOWS_FILE
    try:
        doc = parse_flows(flows_path.read_bytes())
    except OSError as exc:
        raise IoFailure(f"Cannot read flows file '{flows_path}': {exc.strerror or exc}") from exc
    if config.scenario_path is None:
        raise ScenarioError("simulate needs --scenario.")
    scenario: SimulationScenario = load_scenario(config.scenario_path)

    overlay = _load_json_map(
        flows_path.with_name(CREDENTIALS_FILE) if flows_path.with_name(CREDENTIALS_FILE).is_file() else None,
        "credentials overlay",
    )
    extra = _load_json_map(config.credentials_path, "credentials")
    if extra:
        scenario = replace(scenario, credentials={**extra, **scenario.credentials})

    trace = run_simulation(doc, scenario, credentials=overlay)
    trace_path = trace_out or config.output_dir / TRACE_FILE
    write_text_file(trace_path, canonical_json(trace.to_dict()) + "\n")
    if db_dump is not None:
        write_db_dump(trace, db_dump)
    result = trace.to_dict()
    result["counts"] = trace.counts()
    result["trace"] = str(trace_path)
    return result


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------
def _build_parser() -> argparse.ArgumentParser:
    """Build the top-level argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out",
        type=Path,
        default=Path(DEFAULT_OUTPUT_DIR),
        help=f"Output directory for stage artifacts (default: {DEFAULT_OUTPUT_DIR}).",
    )
    common.add_argument("--pretty", action="store_true", help="Render reports with rich.")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr.")

    model_args = argparse.ArgumentParser(add_help=False)
    model_args.add_argument("--model", type=Path, required=True, help="UML use-case model (XMI).")
    model_args.add_argument(
        "--profile-ext", type=Path, default=None, help="JSON file of extra stereotypes."
    )
    model_args.add_argument(
        "--strict",
        action="store_true",
        help="Treat unknown stereotypes as errors instead of skipping them.",
    )

    template_args = argparse.ArgumentParser(add_help=False)
    template_args.add_argument(
        "--templates",
        type=Path,
        action="append",
        default=None,
        help="Extra template directory layered over the base repository "
        "($MOT_TEMPLATE_DIR or the built-in one); repeatable.",
    )

    parser = argparse.ArgumentParser(
        prog="motflow",
        description="Turn UML use-case models into Node-RED flows, packages and simulations.",
    )
    parser.add_argument("--version", action="version", version=f"motflow {__version__}")
    subparsers = parser.add_subparsers(dest="command")

    # --- `validate` ----------------------------------------------------------
    subparsers.add_parser(
        "validate", parents=[common, model_args], help="Check a model against the MoT profile."
    )

    # --- `transform` ---------------------------------------------------------
    subparsers.add_parser(
        "transform",
        parents=[common, model_args, template_args],
        help="Expand stereotypes into the component graph (graph.json).",
    )

    # --- `configure` ---------------------------------------------------------
    configure_parser = subparsers.add_parser(
        "configure", parents=[common], help="Apply a manifest and provision services."
    )
    configure_parser.add_argument(
        "--graph", type=Path, default=None, help="Component graph (default: <out>/graph.json)."
    )
    configure_parser.add_argument("--manifest", type=Path, default=None, help="Manifest JSON file.")
    configure_parser.add_argument(
        "--interactive",
        action="store_true",
        help="Prompt for pending properties and write manifest.json beside the graph.",
    )

    # --- `build` -------------------------------------------------------------
    build_parser = subparsers.add_parser(
        "build", parents=[common], help="Emit flows.json and the deployment package."
    )
    build_parser.add_argument(
        "--graph",
        type=Path,
        default=None,
        help="Configured graph (default: <out>/configured_graph.json).",
    )
    build_parser.add_argument("--credentials", type=Path, default=None, help="Credentials JSON.")
    build_parser.add_argument(
        "--local-only", action="store_true", help="Omit the serverless descriptor."
    )

    # --- `simulate` ----------------------------------------------------------
    simulate_parser = subparsers.add_parser(
        "simulate", parents=[common], help="Run a scenario against a flows file."
    )
    simulate_parser.add_argument(
        "--flows", type=Path, default=None, help="Flows file (default: <out>/package/flows.json)."
    )
    simulate_parser.add_argument("--scenario", type=Path, required=True, help="Scenario JSON.")
    simulate_parser.add_argument("--credentials", type=Path, default=None, help="Credentials JSON.")
    simulate_parser.add_argument(
        "--trace-out", type=Path, default=None, help="Trace file (default: <out>/trace.json)."
    )
    simulate_parser.add_argument(
        "--db-dump", type=Path, default=None, help="Write stored records as JSON lines."
    )

    # --- `pipeline` ----------------------------------------------------------
    pipeline_parser = subparsers.add_parser(
        "pipeline",
        parents=[common, model_args, template_args],
        help="validate → transform → configure → build (→ simulate).",
    )
    pipeline_parser.add_argument("--manifest", type=Path, default=None, help="Manifest JSON file.")
    pipeline_parser.add_argument("--credentials", type=Path, default=None, help="Credentials JSON.")
    pipeline_parser.add_argument("--scenario", type=Path, default=None, help="Scenario JSON.")
    pipeline_parser.add_argument(
        "--local-only", action="store_true", help="Omit the serverless descriptor."
    )
    pipeline_parser.add_argument(
        "--skip-simulate", action="store_true", help="Stop after the build stage."
    )

    # --- `report` ------------------------------------------------------------
    report_parser = subparsers.add_parser(
        "report", help="Write a markdown brief of a component graph."
    )
    report_parser.add_argument("graph_file", type=str, help="Path to graph.json.")
    report_parser.add_argument(
        "--output", type=str, default=None, help="Output path (default: <graph_stem>_brief.md)."
    )

    # --- `analyze` -----------------------------------------------------------
    analyze_parser = subparsers.add_parser(
        "analyze", help="Plot dashboard values and sink counts from a trace."
    )
    analyze_parser.add_argument("trace_file", type=str, help="Path to trace.json.")
    analyze_parser.add_argument(
        "--output-dir", type=str, default=None, help="Plot directory (default: beside the trace)."
    )

    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    templates = default_template_paths() + tuple(getattr(args, "templates", None) or ())
    config = PipelineConfig(
        model_path=getattr(args, "model", None),
        template_paths=templates,
        profile_extension_path=getattr(args, "profile_ext", None),
        manifest_path=getattr(args, "manifest", None),
        credentials_path=getattr(args, "credentials", None),
        scenario_path=getattr(args, "scenario", None),
        output_dir=getattr(args, "out", Path(DEFAULT_OUTPUT_DIR)),
        strict=getattr(args, "strict", False),
        local_only=getattr(args, "local_only", False),
    )
    config.check_paths()
    return config


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------
def _handle_validate(args: argparse.Namespace) -> int:
    report = stage_validate(_config_from_args(args))
    _emit(report, args.pretty)
    return 0 if report["ok"] else 1


def _handle_transform(args: argparse.Namespace) -> int:
    _emit(stage_transform(_config_from_args(args)), args.pretty)
    return 0


def _handle_configure(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _emit(stage_configure(config, args.graph, args.interactive), args.pretty)
    return 0


def _handle_build(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _emit(stage_build(config, args.graph), args.pretty)
    return 0


def _handle_simulate(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _emit(stage_simulate(config, args.flows, args.trace_out, args.db_dump), args.pretty)
    return 0


def _handle_pipeline(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    stages: list[dict[str, Any]] = []
    current = "validate"

    def run(name: str, fn: Callable[[], dict[str, Any]]) -> dict[str, Any]:
        nonlocal current
        current = name
        result = fn()
        stages.append({"stage": name, "status": "ok", "result": result})
        return result

    exit_code = 0
    try:
        report = run("validate", lambda: stage_validate(config))
        if not report["ok"]:
            stages[-1]["status"] = "failed"
            exit_code = 1
        else:
            run("transform", lambda: stage_transform(config))
            configured = run("configure", lambda: stage_configure(config))
            if not configured["ready"]:
                stages.pop()
                pending = ", ".join(
                    f"{p['component']}.{p['property']}" for p in configured["pending_required"][:5]
                )
                raise NotReady(f"Configuration incomplete; pending: {pending}")
            run("build", lambda: stage_build(config))
            if not args.skip_simulate and config.scenario_path is not None:
                run("simulate", lambda: stage_simulate(config))
    except MotError as exc:
        stages.append({"stage": current, "status": "failed", "error": exc.to_dict()})
        exit_code = exc.exit_code

    _emit({"ok": exit_code == 0, "stages": stages}, args.pretty)
    return exit_code


def _handle_report(args: argparse.Namespace) -> int:
    from motflow.reporter import default_report_path, generate_report_markdown
    from motflow.transform.graph import load_graph

    graph = load_graph(args.graph_file)
    out_path = args.output or default_report_path(args.graph_file)
    write_text_file(out_path, generate_report_markdown(graph, source_path=args.graph_file))
    _emit({"report": out_path})
    return 0


def _handle_analyze(args: argparse.Namespace) -> int:
    from motflow.analyzer import load_trace, plot_dashboard, plot_sink_counts

    data = load_trace(args.trace_file)
    output_dir = Path(args.output_dir or Path(args.trace_file).resolve().parent)
    output_dir.mkdir(parents=True, exist_ok=True)
    plots = [p for p in (plot_dashboard(data, str(output_dir)), plot_sink_counts(data, str(output_dir))) if p]
    _emit({"plots": plots})
    return 0


_HANDLERS: dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": _handle_validate,
    "transform": _handle_transform,
    "configure": _handle_configure,
    "build": _handle_build,
    "simulate": _handle_simulate,
    "pipeline": _handle_pipeline,
    "report": _handle_report,
    "analyze": _handle_analyze,
}


def run_cli(argv: list[str] | None = None) -> int:
    """Parse *argv*, run the subcommand and return its exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 1

    configure_logging(getattr(args, "verbose", False))
    try:
        return _HANDLERS[args.command](args)
    except MotError as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        _emit(exc.to_dict())
        return exc.exit_code


def main(argv: list[str] | None = None) -> None:
    """Entry point invoked by the ``motflow`` console script."""
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
