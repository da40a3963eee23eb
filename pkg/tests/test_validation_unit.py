"""Unit tests for model validation."""

from __future__ import annotations

import unittest

from motflow.model.profile import builtin_profile
from motflow.model.validation import ValidationMode, validate_model
from motflow.model.xmi import parse_xmi
from tests._support import application, hospital_model, use_case, xmi_document


def _codes(findings) -> list[str]:
    return [f.code for f in findings]


class ValidationUnitTests(unittest.TestCase):
    def test_hospital_is_clean_in_strict_mode(self) -> None:
        report = validate_model(hospital_model(), builtin_profile(), ValidationMode.STRICT)
        self.assertTrue(report.ok)
        self.assertEqual(report.errors, [])
        self.assertEqual(report.warnings, [])

    def test_unknown_stereotype_depends_on_mode(self) -> None:
        model = parse_xmi(xmi_document(use_case("_a", "A"), application("Teleport", "_a")))
        strict = validate_model(model, builtin_profile(), ValidationMode.STRICT)
        lenient = validate_model(model, builtin_profile(), ValidationMode.LENIENT)
        self.assertEqual(_codes(strict.errors), ["UnknownStereotype"])
        self.assertTrue(lenient.ok)
        self.assertEqual(_codes(lenient.warnings), ["UnknownStereotype"])

    def test_stereotype_on_actor_is_an_error(self) -> None:
        body = '<packagedElement xmi:type="uml:Actor" xmi:id="_act" name="Nurse"/>' + use_case("_a", "A")
        model = parse_xmi(xmi_document(body, application("SendEmail", "_act")))
        report = validate_model(model, builtin_profile())
        self.assertEqual(_codes(report.errors), ["StereotypeTarget"])
        self.assertEqual(report.errors[0].element_id, "_act")

    def test_empty_use_case_name(self) -> None:
        model = parse_xmi(xmi_document(use_case("_a", " "), application("SendEmail", "_a")))
        report = validate_model(model, builtin_profile())
        self.assertIn("EmptyName", _codes(report.errors))

    def test_include_cycle_is_reported(self) -> None:
        body = (
            use_case("_a", "A", '<include xmi:type="uml:Include" xmi:id="_i1" addition="_b"/>')
            + use_case("_b", "B", '<include xmi:type="uml:Include" xmi:id="_i2" addition="_a"/>')
        )
        model = parse_xmi(xmi_document(body, application("SensorSubscribe", "_a")))
        report = validate_model(model, builtin_profile())
        self.assertIn("CyclicRelationship", _codes(report.errors))

    def test_include_between_actor_and_use_case_is_invalid(self) -> None:
        body = (
            '<packagedElement xmi:type="uml:Actor" xmi:id="_act" name="Nurse"/>'
            + use_case("_a", "A", '<include xmi:type="uml:Include" xmi:id="_i" addition="_act"/>')
        )
        model = parse_xmi(xmi_document(body))
        report = validate_model(model, builtin_profile())
        self.assertEqual(_codes(report.errors), ["InvalidRelationship"])

    def test_duplicate_application_is_an_error(self) -> None:
        apps = application("SendEmail", "_a", "_x1") + application("SendEmail", "_a", "_x2")
        model = parse_xmi(xmi_document(use_case("_a", "A"), apps))
        report = validate_model(model, builtin_profile())
        self.assertEqual(_codes(report.errors), ["DuplicateApplication"])

    def test_multiple_stereotypes_warn(self) -> None:
        apps = application("SensorSubscribe", "_a", "_x1") + application("DashboardGauge", "_a", "_x2")
        model = parse_xmi(xmi_document(use_case("_a", "A"), apps))
        report = validate_model(model, builtin_profile())
        self.assertTrue(report.ok)
        self.assertEqual(_codes(report.warnings), ["MultipleStereotypes"])

    def test_unused_use_case_warns(self) -> None:
        body = use_case("_a", "A") + use_case("_b", "Lonely")
        model = parse_xmi(xmi_document(body, application("SendEmail", "_a")))
        report = validate_model(model, builtin_profile())
        self.assertEqual(_codes(report.warnings), ["UnusedUseCase"])
        self.assertEqual(report.warnings[0].element_id, "_b")

    def test_report_serializes(self) -> None:
        model = parse_xmi(xmi_document(use_case("_a", "A"), application("Teleport", "_a")))
        data = validate_model(model, builtin_profile()).to_dict()
        self.assertFalse(data["ok"])
        self.assertEqual(data["errors"][0]["code"], "UnknownStereotype")


if __name__ == "__main__":
    unittest.main()
