'''
Tests for the command-line front end.

'''
from contextlib import redirect_stderr, redirect_stdout
import io
import json
import os
import shutil
import tempfile
import unittest

import matplotlib
matplotlib.use("Agg")

from src.sedf.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from src.sedf.tests.test_utils import TEST_FOLDER_DATA


def data_file(name):
    return TEST_FOLDER_DATA + os.path.sep + name


class TestCli(unittest.TestCase):

    def setUp(self):
        self.workdir = tempfile.mkdtemp(prefix="sedf-cli-")

    def tearDown(self):
        shutil.rmtree(self.workdir, ignore_errors=True)

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def run_json(self, *argv):
        code, out, _ = self.run_cli("--format", "json", *argv)
        return code, json.loads(out)

    def assert_usage_error(self, *argv):
        with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as raised:
                main(list(argv))
        self.assertEqual(raised.exception.code, EXIT_USAGE)

    def test_verify_sedf(self):
        code, out, _ = self.run_cli("verify", "--family", "Z5: {0,1},{2,4}", "--kind", "sedf", "--lam", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("is a SEDF", out)

    def test_verify_failure_shows_counts(self):
        code, out, _ = self.run_cli("verify", "--family", "Z5: {0,1},{2,3}", "--kind", "sedf", "--lam", "1")
        self.assertEqual(code, EXIT_INVALID)
        self.assertIn("is not a SEDF", out)
        self.assertIn("A1: 0:0 1:0 2:1 3:2 4:1", out)
        self.assertIn("A2: 0:0 1:1 2:2 3:1 4:0", out)

    def test_verify_json(self):
        code, report = self.run_json("verify", "--family", "Z17: {0,1,4,5},{6,8,14,16}", "--lam", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["command"], ["verify", "sedf"])
        self.assertEqual(report["group"], "Z17")
        self.assertTrue(report["payload"]["verdict"])
        self.assertEqual(report["payload"]["counts"][0], [0] + [1] * 16)
        self.assertNotIn("wall_time", report)

    def test_verify_other_kinds(self):
        code, _, _ = self.run_cli("verify", "--input", data_file("d10_sedf.txt"), "--kind", "cosedf", "--lam", "1")
        self.assertEqual(code, EXIT_OK, 'the dihedral SEDF is also a coSEDF')
        code, _, _ = self.run_cli("verify", "--input", data_file("z7_gsedf_base.txt"), "--kind", "gsedf",
                                  "--lambdas", "1,1")
        self.assertEqual(code, EXIT_OK)
        code, _, _ = self.run_cli("verify", "--family", "Z13: {1,3,4,9,10,12},{2,5,6,7,8,11}", "--kind", "pds",
                                  "--pds", "6,2,3")
        self.assertEqual(code, EXIT_OK)
        code, _, _ = self.run_cli("verify", "--family", "Z5: {0,1},{2,4}", "--kind", "edf", "--lam", "1")
        self.assertEqual(code, EXIT_INVALID)
        code, _, _ = self.run_cli("verify", "--family", "Z5: {0,1},{2,4}", "--kind", "edf", "--lam", "2")
        self.assertEqual(code, EXIT_OK, 'both directions together give lambda 2')

    def test_verify_tables_and_plot(self):
        plot = os.path.join(self.workdir, "counts.png")
        code, out, _ = self.run_cli("verify", "--input", data_file("z10_pa_st.txt"), "--lam", "1",
                                    "--table", "--plot", plot)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("A1 - A2", out)
        self.assertIn("A2 - A1", out)
        self.assertTrue(os.path.exists(plot))

    def test_verify_bad_input(self):
        code, _, err = self.run_cli("verify", "--family", "Z5: {0,1},{1,2}", "--lam", "1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("error", err)
        code, _, _ = self.run_cli("verify", "--input", data_file("bad_family.json"), "--lam", "1")
        self.assertEqual(code, EXIT_USAGE)
        code, _, _ = self.run_cli("verify", "--input", data_file("missing.txt"), "--lam", "1")
        self.assertEqual(code, EXIT_USAGE)
        code, _, _ = self.run_cli("verify", "--input", data_file("z7_gsedf_base.txt"), "--kind", "gsedf")
        self.assertEqual(code, EXIT_USAGE, 'gsedf needs lambdas')
        code, _, _ = self.run_cli("verify", "--family", "Q8: {e},{i}", "--lam", "1")
        self.assertEqual(code, EXIT_USAGE)

    def test_usage_errors(self):
        self.assert_usage_error("search", "--group", "Z5")
        self.assert_usage_error("verify", "--lam", "1")
        self.assert_usage_error("tables", "--which", "2")
        self.assert_usage_error("frobnicate")

    def test_params(self):
        code, report = self.run_json("params", "enumerate", "--max-n", "24")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["payload"]["count"], 18)
        code, report = self.run_json("params", "enumerate", "--max-n", "24", "--group-class", "cyclic",
                                     "--surviving")
        self.assertEqual(report["payload"]["count"], 8)
        code, out, _ = self.run_cli("params", "check", "7", "2", "2", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("not admissible", out)
        code, out, _ = self.run_cli("params", "check", "21", "6", "2", "1", "--group-class", "abelian")
        self.assertIn("abelian-lambda-1", out)

    def test_groups_list(self):
        code, out, _ = self.run_cli("groups", "list", "--max-order", "10", "--nonabelian-only")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([line.split()[1] for line in out.splitlines()], ["D6", "D8", "D10"])
        code, report = self.run_json("groups", "list", "--max-order", "4", "--abelian-only")
        self.assertEqual([row["spec"] for row in report["payload"]["groups"]], ["Z1", "Z2", "Z3", "Z4", "Z2xZ2"])

    def test_search_then_classify(self):
        output = os.path.join(self.workdir, "z5.json")
        code, out, _ = self.run_cli("search", "--group", "Z5", "--m", "2", "--k", "2", "--lam", "1",
                                    "--output", output)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("4 SEDFs", out)
        with open(output) as f:
            report = json.load(f)
        self.assertEqual(report["payload"]["count"], 4)
        self.assertIn("nodes", report["payload"]["stats"])
        code, out, _ = self.run_cli("classify", "--input", output)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("1 classes among 4 families", out)

    def test_search_options(self):
        code, report = self.run_json("search", "--group", "D10", "--m", "2", "--k", "3", "--lam", "1", "--first")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["payload"]["count"], 1)
        code, _, _ = self.run_cli("search", "--group", "Z7", "--m", "2", "--k", "2", "--lam", "1")
        self.assertEqual(code, EXIT_USAGE, 'inadmissible parameters')
        code, report = self.run_json("search", "--group", "Z9", "--m", "2", "--k", "4", "--lam", "2", "--naive")
        self.assertEqual(code, EXIT_OK, 'an empty result is a success')
        self.assertEqual(report["payload"]["families"], [])

    def test_classify(self):
        code, out, _ = self.run_cli("classify", "--input", data_file("z17_pair.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("2 classes among 3 families", out)
        code, report = self.run_json("classify", "--input", data_file("z17_pair.json"), "--strict")
        self.assertEqual(report["payload"]["count"], 2)
        self.assertEqual(sorted(c["size"] for c in report["payload"]["classes"]), [1, 2])

    def test_construct(self):
        code, out, _ = self.run_cli("construct", "pa-st", "--k", "3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "Z10: {0,1,2},{3,6,9}")
        code, out, _ = self.run_cli("construct", "dihedral", "--k", "3")
        self.assertEqual(out.strip(), "D10: {e,r,s},{r^3,sr,sr^4}")
        code, out, _ = self.run_cli("construct", "composite-pair", "--r", "2", "--a", "2")
        self.assertEqual(out.strip().splitlines(), ["Z17: {0,1,2,3},{4,8,12,16}", "Z17: {0,1,4,5},{6,8,14,16}"])
        code, report = self.run_json("construct", "recursive", "--base", data_file("z10_pa_st.txt"), "--a", "2")
        self.assertEqual(report["group"], "Z37")
        self.assertEqual(report["parameters"]["a"], 2)
        code, out, _ = self.run_cli("construct", "gsedf-recursive", "--base", data_file("z7_gsedf_base.txt"),
                                    "--a", "3", "--b", "2")
        self.assertEqual(out.strip(), "Z37: {0,1,2,9,10,11},{12,15,18,30,33,36}")
        code, _, _ = self.run_cli("construct", "paley", "--q", "7")
        self.assertEqual(code, EXIT_USAGE)

    def test_tables(self):
        code, out, _ = self.run_cli("tables", "--which", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(out.strip().splitlines()), 19)
        code, report = self.run_json("tables", "--which", "1")
        self.assertEqual(len(report["payload"]["rows"]), 117)
        self.assertEqual(report["command"], ["tables", "admissible"])
        code, out, _ = self.run_cli("tables", "--which", "searchable")
        self.assertEqual(len(out.strip().splitlines()), 19, 'table names work as well as table ids')

    def test_options_after_the_subcommand(self):
        code, out, _ = self.run_cli("params", "enumerate", "--max-order", "24", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        after = json.loads(out)
        code, before = self.run_json("params", "enumerate", "--max-n", "24")
        self.assertEqual(after["payload"], before["payload"])
        self.assertEqual(after["payload"]["count"], 18)
        code, out, _ = self.run_cli("tables", "--which", "1", "--format", "json")
        self.assertEqual(len(json.loads(out)["payload"]["rows"]), 117)
        code, out, _ = self.run_cli("--format", "json", "construct", "pa-st", "--k", "3")
        self.assertEqual(json.loads(out)["group"], "Z10", 'a format given before the subcommand is kept')
        code, out, _ = self.run_cli("construct", "pa-st", "--k", "3", "--format", "text")
        self.assertEqual(out.strip(), "Z10: {0,1,2},{3,6,9}")
        code, out, _ = self.run_cli("construct", "pa-st", "--k", "3", "--format", "json")
        self.assertEqual(json.loads(out)["payload"]["families"][0]["group"], "Z10")

    def test_search_flag_spellings(self):
        code, out, _ = self.run_cli("search", "--group", "Z5", "--m", "2", "--k", "2", "--lambda", "1", "--all")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("4 SEDFs", out)
        code, out, _ = self.run_cli("search", "--group", "Z5", "--m", "2", "--k", "2", "--lambda", "1",
                                    "--naive-check", "--jobs", "2", "--seed", "3", "--format", "json")
        report = json.loads(out)
        self.assertEqual(report["payload"]["count"], 4)
        self.assertFalse(report["parameters"]["first_only"])
        code, report = self.run_json("search", "--group", "Z5", "--m", "2", "--k", "2", "--lambda", "1", "--first")
        self.assertEqual(report["payload"]["count"], 1)
        self.assert_usage_error("search", "--group", "Z5", "--m", "2", "--k", "2", "--lambda", "1",
                                "--all", "--first")
        code, _, _ = self.run_cli("verify", "--family", "Z5: {0,1},{2,4}", "--lambda", "1")
        self.assertEqual(code, EXIT_OK)


if __name__ == "__main__":
    unittest.main()
