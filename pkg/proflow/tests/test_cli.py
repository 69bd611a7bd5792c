# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest
import sys
import os
import io
import json
import tempfile
from contextlib import redirect_stdout
from pathlib import Path

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow.src.cli import run

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = run(list(argv))
        return code, out.getvalue()

    def golden(self, name):
        return (GOLDEN / name).read_text(encoding="utf-8")

    # 1. Exit codes
    def test_001_version(self): self.assertEqual(self.invoke("--version")[0], 0)
    def test_002_unknown_command(self): self.assertEqual(self.invoke("bogus")[0], 2)
    def test_003_bad_choice(self): self.assertEqual(self.invoke("tables", "z")[0], 2)

    def test_004_domain_error(self):
        code, out = self.invoke("curve", "torsion", "--c", "0")
        self.assertEqual(code, 1)
        self.assertTrue(out.startswith("[!]"), out)

    def test_005_undefined_flow(self):
        code, _ = self.invoke("flow", "eval", "--kind", "phi_N", "--N", "3", "--x", "0.5", "--y", "-1")
        self.assertEqual(code, 1)

    def test_006_unwritable_output(self):
        code, out = self.invoke("plot", "sign-grid", "--res", "2", "--out", str(self.dir / "missing" / "s.csv"))
        self.assertEqual(code, 1)
        self.assertIn("I/O failure", out)

    # 2. Tables
    def test_007_table1(self):
        code, out = self.invoke("tables", "w", "--max", "15")
        self.assertEqual(code, 0)
        self.assertEqual(out, self.golden("table1.txt"))

    def test_008_table3(self): self.assertEqual(self.invoke("tables", "ff")[1], self.golden("table3.txt"))
    def test_009_skew(self): self.assertEqual(self.invoke("tables", "skew")[1], self.golden("skew.csv"))

    def test_010_torsion(self):
        lines = self.invoke("tables", "torsion")[1].splitlines()
        self.assertEqual(lines[1], "name order point")
        self.assertIn("Q3 3 (0 : 1 : 0)", lines)

    def test_011_sphere_table(self): self.assertEqual(self.invoke("ff", "table", "--p", "3")[0], 1)

    # 3. Evaluation
    def test_012_series(self):
        lines = self.invoke("series", "--depth", "2")[1].splitlines()
        self.assertEqual(lines, ["u1(x,y) = 1*x", "u2(x,y) = 1*x^2 + -2*x*y"])

    def test_013_flow_eval(self):
        code, out = self.invoke("flow", "eval", "--kind", "exp", "--x", "0.7", "--y", "0")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "u = 0.7 err 1e-15")

    def test_014_constants(self):
        values = dict(line.split(" = ") for line in self.invoke("specialfn", "constants")[1].splitlines())
        self.assertAlmostEqual(float(values["pi3"]), 5.299916250856, places=11)
        self.assertAlmostEqual(float(values["Pi"]), 5.513701576710, places=11)

    def test_015_sm_origin(self): self.assertTrue(self.invoke("specialfn", "eval")[1].startswith("sm(0) = 0 err"))

    def test_016_enum_json(self):
        code, out = self.invoke("ff", "enum1d", "--p", "3", "--json")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["count"], 5)

    def test_017_cardinality(self): self.assertEqual(self.invoke("ff", "cardinality", "--p", "5")[0], 0)

    # 4. Plot files
    def test_018_single_cell(self):
        out = self.dir / "one.csv"
        code, printed = self.invoke("plot", "sign-grid", "--res", "1", "--out", str(out))
        self.assertEqual(code, 0)
        self.assertEqual(out.read_text().splitlines(), ["x,y,sign", "0,0,0"])
        self.assertTrue((self.dir / "one.overlay.csv").exists())
        self.assertIn(f"[>] Wrote {out}", printed)

    def test_019_vector_rows(self):
        out = self.dir / "vf.csv"
        self.assertEqual(self.invoke("plot", "vector-field", "--n", "40", "--out", str(out))[0], 0)
        self.assertEqual(len(out.read_text().splitlines()), 1601)

    def test_020_flow_grid(self):
        out = self.dir / "grid.csv"
        self.assertEqual(self.invoke("flow", "grid", "--kind", "exp", "--res", "3", "--out", str(out))[0], 0)
        self.assertEqual(len(out.read_text().splitlines()), 10)

    def test_020a_grid_needs_closed_form(self):
        for argv in (("flow", "grid", "--kind", "level4"), ("plot", "sign-grid", "--kind", "level6")):
            out = self.dir / "level.csv"
            self.assertEqual(self.invoke(*argv, "--res", "2", "--out", str(out))[0], 2, argv)
            self.assertFalse(out.exists())

    def test_020b_level_vector_field(self):
        out = self.dir / "level4.csv"
        self.assertEqual(self.invoke("plot", "vector-field", "--kind", "level4", "--n", "3", "--out", str(out))[0], 0)
        self.assertEqual(len(out.read_text().splitlines()), 10)

    # 5. JSON output
    def test_021_torsion_json(self):
        code, out = self.invoke("curve", "torsion", "--json")
        self.assertEqual(code, 0)
        rows = {row["name"]: row for row in json.loads(out)}
        self.assertEqual(rows["Q3"]["order"], 3)
        self.assertEqual(set(rows["Q3"]["point"]), {"X", "Y", "Z"})


if __name__ == "__main__":
    unittest.main()
