"""The full invariant suite behind ``necklace-bv selftest``.

The report depends only on the seed and the counts: no timings, no thread
counts, canonical key order on output.
"""

from __future__ import annotations

from . import bv as BV
from . import graded as G
from . import stringy as ST
from . import suites
from .reports import status_of

DEFAULT_COUNTS = {"lie": 40, "wedge": 40, "lemma": 10, "bv": 20}


def stringy_checks():
    checks = []
    algebras = {"k": G.ground_field(), "dual-numbers": G.dual_numbers(3), "Z2": G.cyclic_group_algebra(2),
                "Z3": G.cyclic_group_algebra(3), "k[x]/x^3": G.truncated_polynomial(2, 0),
                "k[x]/x^3,deg2": G.truncated_polynomial(2, 2)}
    for name, alg in algebras.items():
        rep = ST.validate_stringy(ST.category_from_frobenius(alg), 3)
        checks.append({"check": f"one-object/{name}", "status": rep["status"]})
    base = ST.category_from_frobenius(G.dual_numbers(3))
    doubled = ST.direct_sum_extension(base, "S", ("L", "L"))
    checks.append({"check": "doubled/additivity", "status": ST.additivity_check(doubled)["status"]})
    checks.append({"check": "doubled/master", "status": ST.validate_stringy(doubled, 2)["status"]})
    return checks


def deformation_checks():
    alg = G.dual_numbers(3)
    c = suites.frobenius_series(alg)[0]
    lam = c.lam
    weights = range(-3, 3)
    plain = BV.deformation_complex(lam, c, weights, 2)
    scaled = BV.deformation_complex(lam, BV.scale_by_length(lam, c, 3), weights, 2)
    same = [r["rank"] for r in plain] == [r["rank"] for r in scaled]
    return [{"check": "deformation-complex/equivalent-solutions", "status": "pass" if same else "fail",
             "ranks": [[r["weight"], r["dim"], r["rank"]] for r in plain]}]


def run_selftest(seed, counts=None):
    counts = dict(DEFAULT_COUNTS, **(counts or {}))
    parts = [
        suites.lie_bialgebra_suite(seed, counts["lie"]),
        suites.wedge_suite(seed, counts["wedge"]),
        suites.master_suite(seed),
        suites.lemma_suite(seed, counts["lemma"]),
        suites.bv_suite(seed, counts["bv"]),
        suites.cyclic_suite(seed),
        suites.graph_suite(kmax=3, jmax=3, homology_jmax=3, seed=seed),
    ]
    extra = stringy_checks() + deformation_checks()
    parts.append({"check": "stringy-and-deformations", "status": status_of(extra), "checks": extra,
                  "seed": seed, "truncation": None, "residual_terms": []})
    return {"check": "selftest", "status": status_of(parts), "seed": seed, "truncation": None,
            "residual_terms": [], "counts": counts, "suites": parts}
