import contextlib
import io
import json
import os
import tempfile
import unittest

from PySide6.QtCore import QSettings

from src.cli.app import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, run
from src.cli.formatters import to_json
from src.core.bernoulli_cache import CACHE_FILENAME
from src.core.settings import AppSettings
from src.version import get_version


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.cache_dir = os.path.join(self.tmp.name, "cache")
        self.qsettings = QSettings(
            os.path.join(self.tmp.name, "kosweep.ini"), QSettings.IniFormat
        )

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *argv, environ=None):
        """Run the CLI; returns (exit code, stdout, stderr)."""
        settings = AppSettings(self.qsettings, environ or {})
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = run([*argv, "--cache-dir", self.cache_dir], settings)
        return code, out.getvalue(), err.getvalue()

    def invoke_json(self, *argv):
        code, out, err = self.invoke(*argv)
        self.assertEqual(code, EXIT_OK, err)
        return json.loads(out)


class TestCommands(CliTestCase):
    def test_tconst(self):
        code, out, _ = self.invoke("tconst", "6", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, '{"m":6,"value":"1414477","factors":["2047","691"]}\n')

    def test_aconst(self):
        self.assertEqual(self.invoke_json("aconst", "6", "2")["value"], "1")

    def test_bernoulli(self):
        self.assertEqual(self.invoke_json("bernoulli", "6"), {"m": 6, "value": "691/2730"})
        values = self.invoke_json("bernoulli", "4", "--upto")
        self.assertEqual([v["value"] for v in values], ["1/6", "1/30", "1/42", "1/30"])
        self.assertTrue(os.path.exists(os.path.join(self.cache_dir, CACHE_FILENAME)))

    def test_sweep(self):
        data = self.invoke_json("sweep", "--max", "10", "--strategy", "cross_check")
        self.assertEqual(data["failures"], [])
        self.assertEqual(data["m_max"], 10)
        code, out, _ = self.invoke("sweep", "--max", "10", "--format", "csv")
        lines = out.splitlines()
        self.assertEqual(lines[0], "m,gcd")
        self.assertEqual(lines[1:], [f"{m},1" for m in range(2, 11)])

    def test_sweep_with_workers(self):
        data = self.invoke_json("sweep", "--max", "30", "--workers", "2")
        self.assertEqual(data["failures"], [])

    def test_primes(self):
        data = self.invoke_json("primes", "--very-regular", "--below", "100")
        self.assertEqual(
            [r["p"] for r in data["primes"]],
            [3, 5, 11, 13, 17, 19, 29, 41, 43, 53, 61, 83, 97],
        )
        full = self.invoke_json("primes", "--below", "40")
        by_prime = {r["p"]: r for r in full["primes"]}
        self.assertEqual(by_prime[37]["irregular_indices"], [16])
        self.assertFalse(by_prime[7]["very_regular"])

    def test_genus_builtin(self):
        data = self.invoke_json("genus", "--builtin", "k3")
        self.assertEqual((data["ahat"], data["signature"], data["ko_ahat"]), ("2", "-16", "κ"))
        self.assertTrue(data["bundle_certificate"]["holds"])
        data = self.invoke_json("genus", "--builtin", "plumbing8")
        self.assertEqual((data["ahat"], data["signature"], data["ko_ahat"]), ("1", "-224", "β"))
        self.assertEqual(data["intersection_form"], {"rank": 224, "signature": -224})

    def test_genus_manifold_file(self):
        path = os.path.join(self.tmp.name, "k3.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"name": "K3", "dimension": 4, "pontrjagin": {"p1": -48}}, f)
        data = self.invoke_json("genus", "--manifold", path)
        self.assertEqual(data["signature"], "-16")

    def test_genus_polynomials_table(self):
        code, out, _ = self.invoke("genus", "--polynomials", "2", "--format", "table")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("| 1 | (-1/24)*p1 | (1/3)*p1 |", out)

    def test_lattice(self):
        data = self.invoke_json("lattice", "--form", "k3", "--represent", "-12")
        self.assertEqual(data["signature"], -16)
        self.assertEqual(data["represent"]["value"], "-12")
        data = self.invoke_json(
            "lattice", "--form", "h", "--represent", "40", "--even", "--bound", "12"
        )
        self.assertEqual(data["represent"]["vector"], [2, 10])
        data = self.invoke_json("lattice", "--form", "e8neg", "--represent", "1")
        self.assertIsNone(data["represent"]["vector"])

    def test_lattice_gram_file(self):
        path = os.path.join(self.tmp.name, "h.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write("[[0, 1], [1, 0]]")
        data = self.invoke_json("lattice", "--gram", path)
        self.assertEqual((data["rank"], data["signature"], data["gram"]), (2, 0, [[0, 1], [1, 0]]))

    def test_ko(self):
        self.assertEqual(self.invoke_json("ko", "--group", "3")["kind"], "zero")
        self.assertEqual(self.invoke_json("ko", "--group", "9")["generator"], "η·β")
        report = self.invoke_json("ko", "--report", "6", "1")
        self.assertTrue(report["rational_surjective"])
        self.assertTrue(report["integrally_surjective"])
        code, out, _ = self.invoke("ko", "--report", "6", "1", "--format", "table")
        self.assertEqual(len(out.splitlines()), 3)

    def test_report(self):
        data = self.invoke_json("report", "--max", "20")
        self.assertEqual(
            [t["value"] for t in data["t_table"]],
            ["1", "1", "7", "31", "127", "511", "1414477", "8191"],
        )
        self.assertEqual(data["primes"]["regular_not_very_regular"], [7, 23, 31, 47, 71, 73, 79, 89])
        self.assertEqual(data["genus_polynomials"][0]["ahat"], "(-1/24)*p1")
        self.assertEqual(data["certificates"]["k3"]["signature"], "-16")
        self.assertEqual(len(data["ko_table"]), 16)
        self.assertEqual(data["sweep"]["failures"], [])


class TestExitCodes(CliTestCase):
    def test_domain_error(self):
        code, out, err = self.invoke("bernoulli", "0")
        self.assertEqual(code, EXIT_DOMAIN)
        self.assertEqual(out, "")
        self.assertEqual(
            json.loads(err.strip().splitlines()[-1]),
            {"error": "domain", "message": "index starts at 1"},
        )
        code, _, err = self.invoke("ko", "--report", "5", "0")
        self.assertEqual(code, EXIT_DOMAIN)
        self.assertIn("outside theorem hypotheses", err)

    def test_bad_environment(self):
        code, _, err = self.invoke("tconst", "2", environ={"KOSWEEP_WORKERS": "x"})
        self.assertEqual(code, EXIT_DOMAIN)

    def test_usage_errors(self):
        self.assertEqual(self.invoke("frobnicate")[0], EXIT_USAGE)
        self.assertEqual(self.invoke("tconst", "6", "--colour")[0], EXIT_USAGE)
        self.assertEqual(self.invoke("ko")[0], EXIT_USAGE)

    def test_version(self):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = run(["--version"], AppSettings(self.qsettings, {}))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.getvalue().strip(), get_version())


class TestOutputProperties(CliTestCase):
    def test_json_round_trips(self):
        for argv in (
            ("tconst", "7"),
            ("ko", "--report", "7", "4"),
            ("genus", "--builtin", "k3"),
            ("lattice", "--form", "h"),
        ):
            code, out, _ = self.invoke(*argv)
            self.assertEqual(to_json(json.loads(out)), out.rstrip("\n"), argv)

    def test_deterministic_output(self):
        for argv in (("aconst", "12", "3"), ("primes", "--below", "60"), ("ko", "--table", "20")):
            self.assertEqual(self.invoke(*argv)[1], self.invoke(*argv)[1], argv)
        first = self.invoke_json("sweep", "--max", "25", "--workers", "1")
        second = self.invoke_json("sweep", "--max", "25", "--workers", "3")
        first.pop("seconds")
        second.pop("seconds")
        self.assertEqual(first, second)


if __name__ == "__main__":
    unittest.main()
