"""End-to-end checks of the wphorder command line."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = os.environ.get("WPHORDER", "wphorder")
SCHEMA = os.environ.get("WPH_SCHEMA", "schema/report.schema.json")


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("WPH_SEED", None)
    full_env.update(env or {})
    return subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env,
                          timeout=600)


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        with open(SCHEMA) as f:
            cls.validator = jsonschema.Draft202012Validator(json.load(f))

    def valid(self, doc):
        errors = [e.message for e in self.validator.iter_errors(doc)]
        self.assertEqual(errors, [])
        return doc

    def report(self, *args, code=0):
        r = run(*args)
        self.assertEqual(r.returncode, code, r.stderr)
        return self.valid(json.loads(r.stdout))

    def test_orders_counterexample(self):
        doc = self.report("orders", "--weights", "3,7,2,4,5", "--degree", "37", "--max-order", "37")
        q23 = [v for v in doc["verdicts"] if v["q"] == 23][0]
        self.assertEqual(q23["status"], "refuted")
        self.assertEqual(q23["provenance"], "oracle")
        self.assertEqual(q23["chain"]["exponents"], [10, 5, 17])

    def test_orders_campana_flenner(self):
        doc = self.report("orders", "--family", "1,1,1,2,3 d=6")
        primes = [q for q in doc["certified"] if q in (2, 3, 5, 7, 11, 13, 17, 19, 23)]
        self.assertEqual(primes, [2, 3, 5, 7])

    def test_orders_rejects_curve_of_two_variables(self):
        r = run("orders", "--weights", "1,1", "--degree", "3")
        self.assertEqual(r.returncode, 1)

    def test_hypothesis_violation_exit(self):
        self.report("orders", "--weights", "1,1,1,1", "--degree", "4", code=1)

    def test_budget_exit(self):
        doc = self.report("check", "--weights", "3,7,2,4,5", "--degree", "37", "--order", "23",
                          "--oracle-budget", "4", code=2)
        self.assertEqual(doc["verdicts"][0]["status"], "unresolved")

    def test_usage_exits(self):
        self.assertEqual(run().returncode, 64)
        self.assertEqual(run("orders").returncode, 64)
        self.assertEqual(run("check", "--weights", "1,1,1", "--degree", "4").returncode, 64)
        self.assertEqual(run("check", "--weights", "1,1,1", "--degree", "4", "--order", "12")
                         .returncode, 64)
        self.assertEqual(run("orders", "--family", "1,1,x d=3").returncode, 64)
        self.assertEqual(run("bogus").returncode, 64)

    def test_check_explain(self):
        doc = self.report("check", "--weights", "3,7,2,4,5", "--degree", "37", "--order", "23",
                          "--explain")
        ex = doc["explain"]
        self.assertEqual(ex["signature_prefix"], [1, 13, 4, "*", "*"])
        eqs = {c["equation"]: c["solutions"] for c in ex["off_chain_constraints"]}
        self.assertEqual(eqs["6*s4 + s1 = 0 (mod 23)"], [17])
        self.assertEqual(eqs["7*s4 + s2 = 0 (mod 23)"], [6])

    def test_check_klein_cubic(self):
        doc = self.report("check", "--weights", "1,1,1,1,1", "--degree", "3", "--order", "11")
        v = doc["verdicts"][0]
        self.assertEqual(v["status"], "certified")
        self.assertEqual(len(v["witness_monomials"]), 5)
        for run_ in doc["falsifier"]["runs"]:
            self.assertIsNone(run_["singular_point"])

    def test_check_prime_power(self):
        doc = self.report("check", "--weights", "1,1,1", "--degree", "4", "--order", "8")
        v = doc["verdicts"][0]
        self.assertEqual((v["p"], v["r"]), (2, 3))
        self.assertEqual(v["provenance"], "oracle")

    def test_klein(self):
        k = self.report("klein", "--weights", "1,1,1", "--degree", "4")["klein"]
        self.assertTrue(k["exists"] and k["quasismooth"])
        self.assertEqual(k["max_prime"], 7)
        self.assertTrue(k["eigenspace"]["equals_klein_set"])
        self.assertFalse(self.report("klein", "--weights", "1,1,1,2", "--degree", "4")
                         ["klein"]["exists"])
        q = self.report("klein", "--weights", "1,1,1,1", "--degree", "2")["klein"]
        self.assertTrue(q["exists"])
        self.assertFalse(q["quasismooth"])

    def test_seed_from_environment(self):
        r = run("klein", "--weights", "1,1,1", "--degree", "4", env={"WPH_SEED": "5"})
        self.assertEqual(json.loads(r.stdout)["seed"], 5)
        r = run("klein", "--weights", "1,1,1", "--degree", "4", "--seed", "6",
                env={"WPH_SEED": "5"})
        self.assertEqual(json.loads(r.stdout)["seed"], 6)

    def test_determinism(self):
        args = ("check", "--weights", "1,1,1,2,3", "--degree", "6", "--order", "7", "--all")
        self.assertEqual(run(*args).stdout, run(*args).stdout)

    def test_scan_single_record(self):
        r = run("scan", "--dim", "1", "--max-weight", "1", "--degree", "4..4")
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = r.stdout.splitlines()
        self.assertEqual(len(lines), 1)
        doc = self.valid(json.loads(lines[0]))
        self.assertEqual((doc["weights"], doc["degree"]), ([1, 1, 1], 4))
        self.assertEqual(doc["klein"]["max_prime"], 7)

    def test_scan_empty_range(self):
        r = run("scan", "--dim", "1", "--max-weight", "1", "--degree", "5..4")
        self.assertEqual((r.returncode, r.stdout), (0, ""))

    def test_scan_divides_d_respects_bound(self):
        r = run("scan", "--dim", "3", "--max-weight", "3", "--max-degree", "12", "--divides-d",
                "--jobs", "4")
        records = [json.loads(line) for line in r.stdout.splitlines()]
        self.assertGreater(len(records), 0)
        # Large prime powers may exhaust the oracle budget; exit 2 says so.
        unresolved = any(v["status"] == "unresolved" for doc in records for v in doc["verdicts"])
        self.assertEqual(r.returncode, 2 if unresolved else 0, r.stderr)
        for doc in records:
            self.valid(doc)
            bound = doc["bounds"]["divides_d"]
            self.assertIsNotNone(bound)
            for v in doc["verdicts"]:
                if v["status"] == "certified" and v["r"] == 1:
                    self.assertLessEqual(v["q"], int(bound))

    def test_scan_jobs_and_chunks_do_not_change_output(self):
        base = ("scan", "--dim", "1..2", "--max-weight", "3", "--max-degree", "9")
        one = run(*base, "--jobs", "1")
        self.assertEqual(one.returncode, 0, one.stderr)
        for extra in (("--jobs", "4"), ("--jobs", "3", "--chunk", "2")):
            self.assertEqual(run(*base, *extra).stdout, one.stdout)
        for line in one.stdout.splitlines():
            self.valid(json.loads(line))

    def test_scan_cursor_resume(self):
        base = ("scan", "--dim", "1..2", "--max-weight", "2", "--max-degree", "8")
        full = run(*base).stdout
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out.jsonl")
            cursor = os.path.join(tmp, "cursor.json")
            first = run(*base, "--output", out, "--cursor", cursor, "--chunk", "3")
            self.assertEqual(first.returncode, 0, first.stderr)
            with open(out) as f:
                self.assertEqual(f.read(), full)
            with open(cursor) as f:
                state = json.load(f)
            self.assertEqual(state["records"], state["total"])
            # Simulate an interruption after the first chunk plus a torn line.
            lines = full.splitlines(keepends=True)
            with open(out, "w") as f:
                f.write("".join(lines[:3]) + lines[3][:10])
            with open(cursor, "w") as f:
                json.dump({"records": 3, "offset": len("".join(lines[:3]).encode()),
                           "total": state["total"]}, f)
            again = run(*base, "--output", out, "--cursor", cursor, "--chunk", "3")
            self.assertEqual(again.returncode, 0, again.stderr)
            with open(out) as f:
                self.assertEqual(f.read(), full)

    def test_paper_examples_list(self):
        r = run("paper-examples", "--list")
        self.assertEqual(r.returncode, 0)
        names = [line.split()[0] for line in r.stdout.splitlines() if line.strip()]
        self.assertEqual(names[:7], ["counterexample", "campana-flenner", "klein-extremal",
                                     "klein-classification", "oracle-equivalence",
                                     "bound-properties", "falsifier-soundness"])

    def test_paper_examples_inject(self):
        r = run("paper-examples", "--only", "klein-extremal", "--inject", "klein-extremal")
        self.assertEqual(r.returncode, 3, r.stdout + r.stderr)
        self.assertIn("FAIL", r.stdout)
        r = run("paper-examples", "--only", "klein-extremal")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        r = run("paper-examples", "--only", "no-such-check")
        self.assertEqual(r.returncode, 64)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0], "-v"])
