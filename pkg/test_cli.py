#!/usr/bin/env python3
"""
Command-line surface: output formats, exit codes, grid references and
settings overrides.
"""

import json
import os
import tempfile
import unittest
from pathlib import Path

from click.testing import CliRunner
from pydantic import ValidationError

from app.core.config import Settings
from app.core.exceptions import GridReferenceError, UnsupportedRegime
from app.core.grid_resolver import load_grid, resolve_grid_path
from app.main import cli


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner(mix_stderr=False)

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args), catch_exceptions=False)


class TableCommandTest(CliTestCase):
    def test_degenerate_stirling_row(self):
        result = self.invoke("table", "--kind", "stirling1-deg", "--lambda", "1/2", "--n-max", "2", "--format", "csv")
        self.assertEqual(result.exit_code, 0)
        lines = result.stdout.splitlines()
        self.assertEqual(lines[0], "n,k,value")
        self.assertIn("2,1,-1/2", lines)

    def test_lah_and_classical_limit(self):
        self.assertIn("3,2,6", self.invoke("table", "--kind", "lah", "--n-max", "3").stdout.splitlines())
        result = self.invoke("table", "--kind", "stirling2-deg", "--lambda", "0", "--n-max", "3")
        self.assertIn("3,1,1", result.stdout.splitlines())
        result = self.invoke("table", "--kind", "stirling1-unsigned", "--n-max", "4")
        self.assertIn("4,2,11", result.stdout.splitlines())

    def test_json(self):
        result = self.invoke("table", "--kind", "lah", "--n-max", "2", "--format", "json")
        data = json.loads(result.stdout)
        self.assertEqual(data["kind"], "lah")
        self.assertEqual(data["rows"][-1], {"n": 2, "k": 2, "value": "1"})

    def test_missing_flag(self):
        result = self.invoke("table", "--kind", "lah")
        self.assertEqual(result.exit_code, 2)


class LawCommandTest(CliTestCase):
    def test_pmf(self):
        result = self.invoke("pmf", "--lambda", "1/2", "--alpha", "1", "--upto", "3")
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.stdout.splitlines(), ["i,pmf,cdf", "0,4/9,4/9", "1,4/9,8/9", "2,1/9,1", "3,0,1"])

    def test_malformed_rational(self):
        result = self.invoke("pmf", "--lambda", "0.5", "--alpha", "1", "--upto", "3")
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(result.stdout, "")

    def test_sample_is_reproducible(self):
        args = ("sample", "--lambda", "-1/2", "--alpha", "1", "--count", "5", "--seed", "7")
        first, second = self.invoke(*args), self.invoke(*args)
        self.assertEqual(first.exit_code, 0)
        self.assertEqual(first.stdout, second.stdout)
        lines = first.stdout.splitlines()
        self.assertEqual(len(lines), 6)
        self.assertEqual(json.loads(lines[-1])["count"], 5)

    def test_sample_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "draws.txt")
            result = self.invoke("sample", "--lambda", "1/2", "--alpha", "1", "--count", "3", "--output", target)
            self.assertEqual(result.exit_code, 0)
            self.assertEqual(result.stdout, "")
            self.assertEqual(len(Path(target).read_text().splitlines()), 4)


class PolyCommandTest(CliTestCase):
    def test_zero_truncated_lah_bell(self):
        result = self.invoke("poly", "--family", "lah-bell-zt", "--lambda", "1/2", "--x", "1", "--n", "2")
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.stdout.strip(), "14/5")

    def test_lah_bell_needs_no_lambda(self):
        result = self.invoke("poly", "--family", "lah-bell", "--x", "1", "--n", "3")
        self.assertEqual(result.stdout.strip(), "13")

    def test_lambda_required(self):
        result = self.invoke("poly", "--family", "bell-deg", "--x", "1", "--n", "2")
        self.assertEqual(result.exit_code, 2)

    def test_certified_interval_output(self):
        result = self.invoke("poly", "--family", "bell-deg", "--lambda", "-1/2", "--x", "1", "--n", "1",
                             "--format", "json", "--tail-bound", "1/1000000")
        value = json.loads(result.stdout)["value"]
        self.assertEqual(set(value), {"lo", "hi"})

    def test_regime_error(self):
        result = self.invoke("poly", "--family", "bell-deg", "--lambda", "-1/2", "--x", "3", "--n", "1")
        self.assertEqual(result.exit_code, 2)
        self.assertIn("Error:", result.stderr)

    def test_origin_in_truncated_regime(self):
        result = self.invoke("poly", "--family", "bell-deg", "--lambda", "-1/2", "--x", "0", "--n", "0")
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.stdout.strip(), "1")


class SeriesCommandTest(CliTestCase):
    def test_degen_log(self):
        result = self.invoke("series", "--kind", "degen-log", "--lambda", "1/2", "--order", "2")
        self.assertEqual(result.stdout.splitlines(), ["n,coefficient", "0,0", "1,1", "2,-1/4"])


class VerifyCommandTest(CliTestCase):
    def test_exact_default_suite(self):
        result = self.invoke("verify", "--suite", "exact-default", "--n-max", "4")
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.stdout)
        self.assertEqual(report["summary"]["failed"], 0)
        self.assertEqual(report["verdict"], "pass")

    def test_unsupported_regime(self):
        result = self.invoke("verify", "--lambda", "-1/2", "--alpha", "3")
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(len(result.stderr.strip().splitlines()), 1)
        self.assertIn(UnsupportedRegime.__name__, result.stderr)

    def test_custom_suite_needs_points(self):
        self.assertEqual(self.invoke("verify").exit_code, 2)
        self.assertEqual(self.invoke("verify", "--lambda", "1/2").exit_code, 2)

    def test_identity_filter(self):
        result = self.invoke("verify", "--lambda", "1/2", "--alpha", "1", "--identity", "T4", "--n-max", "2")
        checks = json.loads(result.stdout)["checks"]
        self.assertEqual({c["id"] for c in checks}, {"T4"})
        self.assertEqual(checks[-1]["lhs"], "2/9")

    def test_monte_carlo_suite(self):
        result = self.invoke("verify", "--suite", "mc", "--seed", "42", "--count", "100000", "--n-max", "2")
        self.assertEqual(result.exit_code, 0)
        methods = {c["method"] for c in json.loads(result.stdout)["checks"]}
        self.assertEqual(methods, {"MonteCarlo"})


class GridResolverTest(unittest.TestCase):
    def test_bundled_grids(self):
        self.assertEqual(len(load_grid("@grids/exact-default.yaml").points), 20)
        grid = load_grid("@grids/infinite-support.yaml")
        self.assertEqual(grid.n_max, 6)
        self.assertTrue(all(not p.is_finite for p in grid.points))

    def test_bad_references(self):
        with self.assertRaises(GridReferenceError):
            resolve_grid_path("@templates/exact-default.yaml")
        with self.assertRaises(GridReferenceError):
            resolve_grid_path("@grids/missing.yaml")

    def test_json_grid_with_unsupported_point(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "grid.json"
            path.write_text(json.dumps({"points": [{"lambda": "-1/2", "alpha": "3"}]}))
            with self.assertRaises(UnsupportedRegime):
                load_grid(str(path))


class SettingsTest(unittest.TestCase):
    def test_defaults(self):
        s = Settings()
        budget = s.default_budget()
        self.assertEqual(budget.max_terms, s.DEFAULT_MAX_TERMS)
        self.assertEqual(budget.tail_bound_target * 10 ** s.DEFAULT_TAIL_BOUND_EXPONENT, 1)

    def test_rejects_non_positive_budget(self):
        with self.assertRaises(ValidationError):
            Settings(DEFAULT_MAX_TERMS=0)


if __name__ == "__main__":
    unittest.main()
