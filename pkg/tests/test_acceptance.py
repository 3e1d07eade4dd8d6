"""Acceptance criteria 1-8, each exact (zero tolerance).

Every test records one "criterion N: PASS|FAIL ..." line; conftest prints them
in the terminal summary.  ``python tests/test_acceptance.py`` runs them directly.
"""

import os
import subprocess
import sys

import pytest

from necklace_bv import graphs as GR
from necklace_bv import suites
from oracles import graph_bruteforce

HERE = os.path.dirname(os.path.abspath(__file__))
FIX = os.path.join(HERE, "fixtures")
SEED = 7
RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def _suite_summary(rep, need):
    ids = rep["identities"]
    short = sorted(k for k, v in ids.items() if v["instances"] < need)
    bad = sorted(k for k, v in ids.items() if v["failures"])
    ok = rep["status"] == "pass" and not bad and not short
    n = min(v["instances"] for v in ids.values())
    return ok, f"{len(ids)} identities, min {n} instances, failing={bad}, under-sampled={short}"


def _cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "necklace_bv.cli", *args],
                          capture_output=True, env=env, cwd=HERE)


def test_criterion_1_lie_bialgebra():
    rep = suites.lie_bialgebra_suite(SEED, count=100, max_dim=4, max_len=5)
    ok, detail = _suite_summary(rep, 100)
    cov = rep["coverage"]
    ok = ok and all(v > 0 for v in cov.values())
    record(1, ok, f"{detail}, coverage={cov}")


def test_criterion_2_wedge():
    rep = suites.wedge_suite(SEED, 100)
    ok, detail = _suite_summary(rep, 100)
    record(2, ok and all(v > 0 for v in rep["coverage"].values()), f"{detail}, coverage={rep['coverage']}")


def test_criterion_3_master_equation():
    rep = suites.master_suite(SEED, gmax=3)
    bad = [c["check"] for c in rep["checks"] if c["status"] != "pass"]
    codes = {}
    for name in ("group-algebra-z2.json", "frobenius-s3.json", "group-algebra-z2-corrupted.json"):
        for cmd in ("master-check", "exp-check"):
            codes[(cmd, name)] = _cli(cmd, os.path.join(FIX, name), "--gmax", "3").returncode
    want = {k: (1 if "corrupted" in k[1] else 0) for k in codes}
    ok = not bad and codes == want
    record(3, ok, f"{len(rep['checks'])} suite checks, failing={bad}, cli exit codes="
                  f"{sorted((c, n, v) for (c, n), v in codes.items())}")


def test_criterion_4_lemmas():
    rep = suites.lemma_suite(SEED, count=20, nmax=6, lt_max=10)
    ok, detail = _suite_summary(rep, 1)
    record(4, ok, detail)


def test_criterion_5_bv():
    rep = suites.bv_suite(SEED, 50, N=4)
    ids = dict(rep["identities"])
    ids.pop("twisted-open-unit-fails", None)      # only drawn when ∂z ≠ 0
    ok, detail = _suite_summary(dict(rep, identities=ids), 50)
    open_ = rep["identities"].get("twisted-open-unit-fails", {"instances": 0, "failures": 0})
    ok = ok and open_["instances"] > 0 and not open_["failures"]
    record(5, ok, f"{detail}, open-unit negative control {open_}, modulo t^{rep['truncation'] + 1}")


def test_criterion_6_cyclic_oracle():
    rep = suites.cyclic_suite(SEED, qmax=3)
    summary = {c["check"]: (c["necklace"], c["connes"]) for c in rep["checks"]}
    record(6, rep["status"] == "pass", f"necklace vs Connes ranks q<=3: {summary}")


def test_criterion_7_graph_complex():
    rep = suites.graph_suite(kmax=4, jmax=4)
    bad = [c["check"] for c in rep["checks"] if c["status"] != "pass"]
    mismatched = []
    for colored in (False, True):
        for j in range(4):
            for k in range(2 * j + 1):
                b = GR.enumerate_graphs(k, j, colored)
                got = (len(b.basis), len(b.killed))
                want = graph_bruteforce.counts(k, j, colored)
                if got != want:
                    mismatched.append((colored, k, j, got, want))
    record(7, not bad and not mismatched,
           f"{len(rep['checks'])} checks failing={bad}, enumeration vs brute force (j<=3) mismatches={mismatched}")


def test_criterion_8_determinism():
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, NECKLACE_THREADS=threads)
        p = _cli("selftest", "--seed", "7", env=env)
        outs.append((p.returncode, p.stdout))
    same = outs[0][1] == outs[1][1]
    record(8, same and all(code == 0 for code, _ in outs),
           f"exit codes {[c for c, _ in outs]}, byte-identical={same}, {len(outs[0][1])} bytes")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
