import json
import os

import pytest

from necklace_bv import graded as G
from necklace_bv import suites
from necklace_bv.cyclic_oracle import cyclic_cohomology

FIX = os.path.join(os.path.dirname(__file__), "fixtures")

with open(os.path.join(FIX, "cyclic_ranks.json")) as fh:
    FROZEN = json.load(fh)

ALGEBRAS = {"k": G.ground_field(), "dual-numbers": G.dual_numbers(3),
            "dual-numbers-deg0": G.dual_numbers(0), "group-algebra-Z2": G.cyclic_group_algebra(2)}


def test_textbook_values():
    # HC^q(k) = k in even degrees, 0 in odd ones; k[ℤ/2] ≅ k × k doubles it
    assert cyclic_cohomology(G.ground_field(), 4) == [1, 0, 1, 0, 1]
    assert cyclic_cohomology(G.cyclic_group_algebra(2), 4) == [2, 0, 2, 0, 2]


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_connes_ranks_frozen(name):
    assert cyclic_cohomology(ALGEBRAS[name], 4) == FROZEN[name]


@pytest.mark.parametrize("name", ["k", "dual-numbers", "dual-numbers-deg0", "group-algebra-Z2"])
def test_necklace_side_agrees(name):
    rep = suites.cyclic_comparison(ALGEBRAS[name], 3)
    assert rep["status"] == "pass", rep
    assert rep["connes"] == FROZEN[name][:4]
