"""Shared fixture loaders for the unit tests and validation modules."""

from __future__ import annotations

from pathlib import Path

from motflow.configure.manifest import load_manifest
from motflow.configure.provisioning import configure_graph
from motflow.configure.readiness import readiness
from motflow.emit.flows import FlowDocument, emit_flows
from motflow.emit.platform import is_secret_placeholder
from motflow.model.profile import builtin_profile
from motflow.model.xmi import UmlModel, parse_xmi, parse_xmi_file
from motflow.providers.mock import MockProvider
from motflow.transform.builder import transform_model
from motflow.transform.graph import ComponentGraph
from motflow.transform.templates import ValueType, load_templates

TESTS_DIR = Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"
GOLDEN_FLOWS = TESTS_DIR / "golden" / "hospital.flows.json"

HOSPITAL_XMI = FIXTURES / "hospital.xmi"
HOSPITAL_MANIFEST = FIXTURES / "hospital.manifest.json"
HOSPITAL_CREDENTIALS = FIXTURES / "hospital.credentials.json"
HOSPITAL_SCENARIO = FIXTURES / "hospital.scenario.json"
HOSPITAL_SCENARIO_50 = FIXTURES / "hospital.scenario.threshold50.json"
PROFILE_EXTENSION = FIXTURES / "profile_extension.json"
EXTENSION_TEMPLATES = FIXTURES / "extension_templates"

GUARD_KEY = "extend:_uc_notify->_uc_monitor"
EMAIL_ALIAS = "Send Notification/email-send"
SMTP_PASSWORD = "not-a-real-password"


def hospital_model() -> UmlModel:
    return parse_xmi_file(str(HOSPITAL_XMI))


def hospital_graph() -> ComponentGraph:
    return transform_model(hospital_model(), builtin_profile(), load_templates())


def configured_hospital() -> ComponentGraph:
    graph, _ = configure_graph(
        hospital_graph(), load_manifest(HOSPITAL_MANIFEST), {"mock": MockProvider()}
    )
    return graph


def hospital_flows() -> FlowDocument:
    return emit_flows(configured_hospital())


def hospital_credentials() -> dict[str, dict[str, str]]:
    return {EMAIL_ALIAS: {"smtp_password": SMTP_PASSWORD}}


UML_NS = "http://www.eclipse.org/uml2/5.0.0/UML"
XMI_NS = "http://www.omg.org/spec/XMI/20131001"
PROFILE_NS = "http:///schemas/MoT.Profile/_mot_profile/1"


def xmi_document(body: str, applications: str = "", name: str = "Sample") -> bytes:
    """Wrap model elements and stereotype applications in an XMI envelope."""
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<xmi:XMI xmi:version="20131001" xmlns:xmi="{XMI_NS}" xmlns:uml="{UML_NS}" '
        f'xmlns:MoT.Profile="{PROFILE_NS}">\n'
        f'  <uml:Model xmi:id="_m" name="{name}">\n{body}\n  </uml:Model>\n'
        f"{applications}\n"
        "</xmi:XMI>\n"
    ).encode("utf-8")


def use_case(uc_id: str, name: str, inner: str = "") -> str:
    return f'<packagedElement xmi:type="uml:UseCase" xmi:id="{uc_id}" name="{name}">{inner}</packagedElement>'


def application(stereotype: str, base_id: str, app_id: str | None = None) -> str:
    return f'<MoT.Profile:{stereotype} xmi:id="{app_id or "_app" + base_id}" base_UseCase="{base_id}"/>'


def fill_everything(graph: ComponentGraph, threshold: int = 1) -> ComponentGraph:
    """Give every pending required property a typed sample value and every guard *threshold*."""
    samples = {ValueType.TEXT: "value", ValueType.INTEGER: 1, ValueType.BOOLEAN: True}
    for pending in readiness(graph).pending_required:
        component = graph.component(pending.component_id)
        value = samples.get(pending.value_type, f"mock://mock/service/{component.id}")
        graph = graph.with_component(component.with_value(pending.property_name, value))
    for key in graph.guard_keys():
        graph = graph.with_guard(key, threshold=threshold)
    return graph


def secret_overlay(doc: FlowDocument, value: str = "sample-secret") -> dict[str, dict[str, str]]:
    """Resolve every secret placeholder in *doc* to *value*."""
    return {
        node.id: {key: value for key, v in node.config.items() if is_secret_placeholder(v)}
        for node in doc.nodes
        if any(is_secret_placeholder(v) for v in node.config.values())
    }


def two_stereotype_model() -> UmlModel:
    """``_a`` carries SensorSubscribe and FacialExpression; ``_b`` (SendEmail) extends it."""
    body = use_case("_a", "Sense") + use_case(
        "_b", "Alert", '<extend xmi:type="uml:Extend" xmi:id="_x1" extendedCase="_a"/>'
    )
    apps = "\n".join(
        (
            application("SensorSubscribe", "_a", "_app_a1"),
            application("FacialExpression", "_a", "_app_a2"),
            application("SendEmail", "_b"),
        )
    )
    return parse_xmi(xmi_document(body, apps))
