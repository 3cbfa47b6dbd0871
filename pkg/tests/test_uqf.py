"""
tests/test_uqf.py

To run, open a terminal in the root project folder.
Activate your virtual environment if needed, and run one of the following commands:

    py tests\test_uqf.py
    python3 tests\test_uqf.py

This test suite runs the command line entry point in-process and checks the
JSON output and the exit codes.
"""

import unittest
import contextlib
import io
import json
import pathlib
import sys
import tempfile

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from scripts.uqf import (  # noqa: E402
    EXIT_BAD_INPUT,
    EXIT_NUMERIC,
    EXIT_OK,
    main,
)


def run(argv):
    """Exit code and captured stdout of one command."""
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


class TestContinuedFractionCommand(unittest.TestCase):

    def test_json_for_D15(self):
        code, out = run(["cf", "--d", "15", "--json"])
        self.assertEqual(code, EXIT_OK, "cf succeeds for D=15")
        data = json.loads(out)
        self.assertEqual((data["u0"], data["period"], data["s"]), (3, "1-6", 2), "sqrt15 = [3; 1, 6]")
        self.assertEqual(data["eps0"], [4, 1], "eps0 = 4 + sqrt15")
        self.assertFalse(data["negative_norm_unit"], "No unit of norm -1")

    def test_text_output(self):
        code, out = run(["cf", "--d", "2"])
        self.assertEqual(code, EXIT_OK, "cf succeeds for D=2")
        self.assertIn("w = [1; 2], s = 1", out, "Text output names the expansion")

    def test_bad_D(self):
        self.assertEqual(run(["cf", "--d", "12"])[0], EXIT_BAD_INPUT, "12 is not squarefree")
        self.assertEqual(run(["cf", "--d", "1"])[0], EXIT_BAD_INPUT, "D must exceed 1")


class TestFieldCommands(unittest.TestCase):

    def test_indec(self):
        code, out = run(["indec", "--d", "2", "--verify-trace", "10", "--box", "4", "--json"])
        self.assertEqual(code, EXIT_OK, "indec succeeds for D=2")
        data = json.loads(out)
        self.assertEqual((data["M_D"], data["kappa"]), (2, 2), "M_D and kappa for D=2")
        self.assertEqual(data["oracle_disagreements"], [], "Both tests agree")

    def test_form(self):
        code, out = run(["form", "--d", "5", "--verify-trace", "6", "--json"])
        self.assertEqual(code, EXIT_OK, "form succeeds for D=5")
        data = json.loads(out)
        self.assertEqual(data["arity"], 8, "8 * M_D variables")
        self.assertEqual(data["failures"], [], "Every target is represented")

    def test_form_rejects_small_trace(self):
        self.assertEqual(run(["form", "--d", "5", "--verify-trace", "1"])[0], EXIT_BAD_INPUT, "--verify-trace below 2")

    def test_lvals(self):
        code, out = run(["lvals", "--d", "5", "--cutoff", "2000", "--bound", "4000", "--json"])
        self.assertEqual(code, EXIT_OK, "lvals succeeds for D=5")
        data = json.loads(out)
        self.assertEqual(data["h"], 1, "h = 1 for D=5")
        self.assertIn("sum_minus", data, "Bounds on M_D are reported")

    def test_sieve(self):
        code, out = run(["sieve", "--d", "19", "--json"])
        self.assertEqual(code, EXIT_OK, "sieve succeeds for D=19")
        data = json.loads(out)
        self.assertEqual(data["D"], 19, "D is echoed")
        self.assertEqual(data["hensel_failures"], [], "Every Hensel check holds")
        for entry in data["polynomials"]:
            counts = entry["power_free"]
            self.assertEqual(counts["X"], entry["u"], "Counts run over [1, u]")
            self.assertAlmostEqual(counts["density"], counts["count"] / counts["X"], msg="Density is count/X")

    def test_lvals_small_cutoff(self):
        self.assertEqual(run(["lvals", "--d", "5", "--cutoff", "10"])[0], EXIT_NUMERIC, "Cutoff below 1000")


class TestSurveyCommand(unittest.TestCase):

    def test_survey(self):
        with tempfile.TemporaryDirectory() as folder:
            path = pathlib.Path(folder).joinpath("survey.csv")
            code, out = run(["survey", "--range", "2:6", "--csv", str(path), "--cutoff", "1000", "--bound", "4000", "--json"])
            self.assertEqual(code, EXIT_OK, "Survey of 2..6 succeeds")
            data = json.loads(out)
            self.assertEqual((data["rows"], data["failed"]), (4, []), "Rows for D = 2, 3, 5, 6")
            self.assertTrue(path.exists(), "CSV written")

    def test_every_command_prints_json(self):
        with tempfile.TemporaryDirectory() as folder:
            commands = {
                "cf": ["cf", "--d", "19"],
                "indec": ["indec", "--d", "19", "--verify-trace", "8", "--box", "3"],
                "form": ["form", "--d", "2", "--verify-trace", "6"],
                "sieve": ["sieve", "--d", "2"],
                "lvals": ["lvals", "--d", "19", "--cutoff", "2000", "--bound", "4000"],
                "survey": ["survey", "--range", "2:3", "--csv", str(pathlib.Path(folder).joinpath("s.csv")), "--cutoff", "1000", "--bound", "4000"],
            }
            for name, argv in commands.items():
                code, out = run(argv + ["--json"])
                self.assertEqual(code, EXIT_OK, f"{name} succeeds")
                data = json.loads(out)
                self.assertIsInstance(data, dict, f"{name} prints one JSON object")
                self.assertEqual(json.loads(json.dumps(data)), data, f"{name} output survives a JSON round trip")

    def test_bad_arguments(self):
        self.assertEqual(run(["survey", "--range", "9:3"])[0], EXIT_BAD_INPUT, "Empty range")
        self.assertEqual(run(["survey", "--range", "2:3", "--eps", "abc"])[0], EXIT_BAD_INPUT, "eps must be P/Q")


if __name__ == "__main__":
    unittest.main(verbosity=2)
