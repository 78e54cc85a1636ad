#!/usr/bin/env python

"""Tests for the `trlearn` command line interface."""

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd
from click.testing import CliRunner

from trlearn.app.cli import main
from .utils import random_problem


class TestRun(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        x, y = random_problem(n=10, p=4, seed=21)
        np.savetxt(self.tmp / "x.csv", x, delimiter=",", fmt="%.17g")
        np.savetxt(self.tmp / "y.csv", y, delimiter=",", fmt="%.17g")
        self.runner = CliRunner()

    def tearDown(self):
        self._tmp.cleanup()

    def invoke(self, *args, out="out"):
        argv = ["run", "--x", str(self.tmp / "x.csv"), "--y", str(self.tmp / "y.csv")]
        argv += ["--out", str(self.tmp / out), *args]
        return self.runner.invoke(main, argv)

    def write_segments(self, labels):
        path = self.tmp / "segments.csv"
        path.write_text("".join(f"{k}\n" for k in labels))
        return str(path)

    def test_loocv(self):
        result = self.invoke("--lambda-count", "50")
        self.assertEqual(result.exit_code, 0, result.output)
        out = self.tmp / "out"
        lines = (out / "curve.csv").read_text().splitlines()
        self.assertEqual(len(lines), 51)
        self.assertEqual(lines[0], "lambda,press_r1,gcv_r1,df")
        records = json.loads((out / "selection.json").read_text())
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0]["rule"], "min_press")
        self.assertIsNone(records[0]["alpha"])
        curve = pd.read_csv(out / "curve.csv")
        self.assertAlmostEqual(
            records[0]["lambda"] / curve["lambda"][records[0]["index"]], 1.0, places=12
        )
        coefficients = pd.read_csv(out / "coefficients.csv", index_col="term")
        self.assertEqual(list(coefficients.index), ["intercept", "x1", "x2", "x3", "x4"])
        residuals = pd.read_csv(out / "residuals.csv")
        self.assertEqual(residuals.shape, (10, 1))

    def test_rules(self):
        result = self.invoke("--rules", "min,one-se,chi2", "--alpha", "0.3")
        self.assertEqual(result.exit_code, 0, result.output)
        records = json.loads((self.tmp / "out" / "selection.json").read_text())
        self.assertEqual([r["rule"] for r in records], ["min_press", "one_se", "chi_square"])
        self.assertEqual(records[2]["alpha"], 0.3)
        self.assertGreaterEqual(records[1]["index"], records[0]["index"])
        coefficients = pd.read_csv(self.tmp / "out" / "coefficients.csv", index_col="term")
        self.assertEqual(coefficients.shape, (5, 3))

    def test_segcv_needs_segments(self):
        self.assertEqual(self.invoke("--strategy", "segcv").exit_code, 4)

    def test_unknown_rule(self):
        self.assertEqual(self.invoke("--rules", "median").exit_code, 4)

    def test_deterministic(self):
        segments = self.write_segments(np.arange(10) % 3 + 1)
        args = ("--segments", segments, "--strategy", "vircv", "--reg", "d1")
        self.assertEqual(self.invoke(*args, out="a").exit_code, 0)
        self.assertEqual(self.invoke(*args, out="b").exit_code, 0)
        for name in ("curve.csv", "selection.json", "coefficients.csv", "residuals.csv"):
            self.assertEqual(
                (self.tmp / "a" / name).read_bytes(), (self.tmp / "b" / name).read_bytes()
            )

    def test_singleton_segments_equal_loocv(self):
        segments = self.write_segments(range(1, 11))
        self.assertEqual(self.invoke(out="loocv").exit_code, 0)
        result = self.invoke("--segments", segments, "--strategy", "segcv", out="segcv")
        self.assertEqual(result.exit_code, 0, result.output)
        loocv = pd.read_csv(self.tmp / "loocv" / "curve.csv")
        segcv = pd.read_csv(self.tmp / "segcv" / "curve.csv")
        np.testing.assert_allclose(segcv["press_r1"], loocv["press_r1"], rtol=1e-10)

    def test_no_intercept(self):
        self.assertEqual(self.invoke("--no-intercept").exit_code, 0)
        coefficients = pd.read_csv(self.tmp / "out" / "coefficients.csv", index_col="term")
        self.assertEqual(coefficients.loc["intercept"].iloc[0], 0.0)

    def test_numeric_header(self):
        x, y = random_problem(n=10, p=4, seed=21)
        header = "1100,1102,1104,1106\n"
        with open(self.tmp / "x.csv", "w") as f:
            f.write(header)
            np.savetxt(f, x, delimiter=",", fmt="%.17g")
        self.assertEqual(self.invoke().exit_code, 2)
        self.assertEqual(self.invoke("--header").exit_code, 2)
        with open(self.tmp / "y.csv", "w") as f:
            f.write("1000\n")
            np.savetxt(f, y, delimiter=",", fmt="%.17g")
        result = self.invoke("--header", "--reg", "d2")
        self.assertEqual(result.exit_code, 0, result.output)
        terms = [
            line.split(",")[0]
            for line in (self.tmp / "out" / "coefficients.csv").read_text().splitlines()
        ]
        self.assertEqual(terms, ["term", "intercept", "1100", "1102", "1104", "1106"])

    def test_non_numeric_input(self):
        (self.tmp / "x.csv").write_text("1,2\n3,abc\n5,6\n")
        (self.tmp / "y.csv").write_text("1\n2\n3\n")
        self.assertEqual(self.invoke().exit_code, 2)

    def test_row_mismatch(self):
        (self.tmp / "y.csv").write_text("1\n2\n3\n")
        self.assertEqual(self.invoke().exit_code, 2)

    def test_missing_file(self):
        (self.tmp / "y.csv").unlink()
        self.assertEqual(self.invoke().exit_code, 2)

    def test_numeric_failure(self):
        x, y = random_problem(n=5, p=4, seed=22)
        np.savetxt(self.tmp / "x.csv", x, delimiter=",", fmt="%.17g")
        np.savetxt(self.tmp / "y.csv", y, delimiter=",", fmt="%.17g")
        result = self.invoke(
            "--linear-grid", "--allow-zero", "--lambda-min", "0", "--lambda-max", "1"
        )
        self.assertEqual(result.exit_code, 3)


class TestVersions(unittest.TestCase):
    def test_versions(self):
        result = CliRunner().invoke(main, ["versions"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("trlearn==", result.output)
        self.assertIn("numpy==", result.output)

    def test_version_option(self):
        result = CliRunner().invoke(main, ["--version"])
        self.assertIn("[trlearn] Version", result.output)
