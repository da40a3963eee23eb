"""Unit tests for the function-node expression language."""

from __future__ import annotations

import unittest

from motflow.errors import ExpressionError, SimulationError
from motflow.simulate.expressions import compile_expression, evaluate


class EvaluateTests(unittest.TestCase):
    def test_arithmetic_on_payload_fields(self) -> None:
        self.assertAlmostEqual(evaluate('(payload["temp"] - 32) * 5 / 9', {"temp": 212}), 100.0)

    def test_conditional_and_comparison(self) -> None:
        expr = '"hot" if payload > 30 and topic == "ward/temperature" else "ok"'
        self.assertEqual(evaluate(expr, 40, "ward/temperature"), "hot")
        self.assertEqual(evaluate(expr, 40, "ward/humidity"), "ok")

    def test_whitelisted_builtins(self) -> None:
        self.assertEqual(evaluate("max(payload)", [3, 9, 4]), 9)
        self.assertEqual(evaluate("round(payload, 1)", 2.345), 2.3)
        self.assertEqual(evaluate("len(topic)", None, "a/b"), 3)
        self.assertEqual(evaluate("[payload, -payload]", 2), [2, -2])

    def test_runtime_failure_is_expression_error(self) -> None:
        with self.assertRaises(ExpressionError):
            evaluate("payload / 0", 1)
        with self.assertRaises(ExpressionError):
            evaluate('payload["missing"]', {})

    def test_expression_error_is_a_simulation_error(self) -> None:
        self.assertTrue(issubclass(ExpressionError, SimulationError))


class CompileTests(unittest.TestCase):
    def test_rejects_disallowed_constructs(self) -> None:
        for source in (
            "__import__('os')",
            "payload.__class__",
            "open('x')",
            "payload[1:2]",
            "round(payload, ndigits=2)",
            "secret",
            "[x for x in payload]",
            "lambda: 1",
            "payload ** 2",
            "payload in [1, 2]",
        ):
            with self.subTest(source=source), self.assertRaises(ExpressionError):
                compile_expression(source)

    def test_syntax_error(self) -> None:
        with self.assertRaises(ExpressionError):
            compile_expression("payload +")

    def test_compilation_is_cached(self) -> None:
        self.assertIs(compile_expression("payload + 1"), compile_expression("payload + 1"))


if __name__ == "__main__":
    unittest.main()
