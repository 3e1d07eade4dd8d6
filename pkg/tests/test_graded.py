import json
import os
from fractions import Fraction

import pytest

from necklace_bv import graded as G

FIX = os.path.join(os.path.dirname(__file__), "fixtures")


def test_spaces():
    sp = G.make_graded_space([("e", 0)])
    assert sp.dim == 1 and sp.degree(0) == 0
    s3 = G.make_graded_space([("1", 0), ("x", 3)])
    assert s3.dim == 2 and s3.degrees == (0, 3)
    assert s3.shifted(1).degree(1) == 2
    xy = G.make_graded_space([("x", 0), ("y", 0)])
    assert xy.index("y") == 1
    with pytest.raises(G.StructureError):
        xy.index("z")
    with pytest.raises(G.StructureError):
        G.make_graded_space([("x", 0), ("x", 1)])


def test_zero_form_is_valid_and_degenerate():
    sp = G.make_graded_space([("x", 0), ("y", 1)])
    f = G.make_form(sp, 5, {})
    assert not f.is_nondegenerate()


def test_s3_form_nondegenerate():
    sp = G.make_graded_space([("1", 0), ("x", 3)])
    f = G.make_form(sp, 3, {(0, 1): 1})
    assert f.value(1, 0) == 1          # (x, 1) = (-1)^{0·3} (1, x)
    assert f.is_nondegenerate()


def test_form_errors():
    sp = G.make_graded_space([("1", 0), ("x", 3)])
    with pytest.raises(G.StructureError):
        G.make_form(G.make_graded_space([("x", 0)]), 3, {(0, 0): 1})
    with pytest.raises(G.StructureError):
        G.make_form(sp, 3, {(0, 1): 1, (1, 0): 2})
    with pytest.raises(G.StructureError):
        G.make_form(sp, 3, {(0, 5): 1})


def test_odd_form_is_antisymmetric():
    sp = G.make_graded_space([("x", 1), ("y", 1)])
    f = G.make_form(sp, 2, {(0, 1): 1})
    assert f.value(1, 0) == -1


def test_dual_numbers_accepted_and_square_rejected():
    alg = G.dual_numbers(3)
    assert alg.product({1: 1}, {1: 1}) == {}
    sp, form = alg.space, alg.form
    with pytest.raises(G.StructureError):
        G.frobenius_from_table(sp, form, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}})


def test_group_algebra_accepted():
    alg = G.cyclic_group_algebra(2)
    assert alg.product({1: 1}, {1: 1}) == {0: 1}
    G.cyclic_group_algebra(3)


def test_associativity_and_invariance_failures():
    sp = G.make_graded_space([("1", 0), ("g", 0)])
    form = G.make_form(sp, 0, {(0, 0): 1, (1, 1): 1})
    base = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    with pytest.raises(G.StructureError, match="invariance"):
        G.frobenius_from_table(sp, form, {**base, (1, 1): {1: 1}})
    with pytest.raises(G.StructureError, match="associativity"):
        G.frobenius_from_table(sp, form, {(0, 0): {1: 1}, (0, 1): {0: 1}})


@pytest.mark.parametrize("alg", [G.ground_field(), G.dual_numbers(3), G.dual_numbers(0),
                                 G.cyclic_group_algebra(2), G.cyclic_group_algebra(3),
                                 G.truncated_polynomial(2), G.truncated_polynomial(2, 2)])
def test_invariance_holds_on_all_triples(alg):
    d = alg.space.dim
    for a in range(d):
        for b in range(d):
            for c in range(d):
                ab = alg.product({a: 1}, {b: 1})
                bc = alg.product({b: 1}, {c: 1})
                assert alg.pairing(ab, {c: 1}) == alg.pairing({a: 1}, bc)


def test_raised_tensor_examples():
    assert G.raised_structure_tensor(G.ground_field()) == {(0, 0, 0): 1}
    c = G.raised_structure_tensor(G.dual_numbers(3))
    # supported on permutations of (1, 1, x̂); with Ω the raised index of 1 is x and vice versa
    assert set(c) <= {(0, 1, 1), (1, 0, 1), (1, 1, 0)}
    assert c and {abs(v) for v in c.values()} == {1}


def test_raised_tensor_matches_index_raising_by_hand():
    alg = G.dual_numbers(3)
    inv = [[Fraction(0)] * 2 for _ in range(2)]
    om = alg.form.omega()
    det = om[0][0] * om[1][1] - om[0][1] * om[1][0]
    inv = [[om[1][1] / det, -om[0][1] / det], [-om[1][0] / det, om[0][0] / det]]
    deg, n = alg.space.degrees, alg.form.n
    expect = {}
    for i in range(2):
        for j in range(2):
            for k in range(2):
                v = Fraction(0)
                for a in range(2):
                    for b in range(2):
                        for cc in range(2):
                            p = alg.pairing(alg.product({a: 1}, {b: 1}), {cc: 1})
                            v += inv[i][a] * inv[j][b] * inv[k][cc] * (-1) ** ((deg[a] * deg[cc] + n * deg[b]) % 2) * p
                if v:
                    expect[(i, j, k)] = v
    assert G.raised_structure_tensor(alg) == expect


def test_zero_multiplication_and_degenerate_form():
    sp = G.make_graded_space([("1", 0), ("x", 3)])
    alg = G.frobenius_from_table(sp, G.make_form(sp, 3, {(0, 1): 1}), {})
    assert G.raised_structure_tensor(alg) == {}
    deg = G.frobenius_from_table(sp, G.make_form(sp, 3, {}), {})
    with pytest.raises(G.StructureError):
        G.raised_structure_tensor(deg)


def test_json_round_trip():
    for alg in (G.dual_numbers(3), G.cyclic_group_algebra(2), G.truncated_polynomial(3)):
        again = G.algebra_from_json(json.loads(json.dumps(G.algebra_to_json(alg))))
        assert again.mult == alg.mult and again.form == alg.form


def test_fixture_files_load():
    with open(os.path.join(FIX, "frobenius-s3.json")) as fh:
        G.algebra_from_json(json.load(fh))
    with open(os.path.join(FIX, "group-algebra-z2-corrupted.json")) as fh:
        doc = json.load(fh)
    with pytest.raises(G.StructureError):
        G.algebra_from_json(doc)
    G.algebra_from_json(doc, check=False)


@pytest.mark.parametrize("doc", [
    {},
    {"generators": []},
    {"generators": [{"name": "x"}], "form": {"degree": 0}},
    {"generators": [{"name": "x", "degree": 0}]},
    {"generators": [{"name": "x", "degree": 0}], "form": {"degree": 0, "entries": [[0, 0]]}},
    {"generators": [{"name": "x", "degree": 0}], "form": {"degree": 0, "entries": [[0, 0, "0.5"]]}},
    {"generators": [{"name": "x", "degree": 0}], "form": {"degree": 0}, "mult": [[0, 0, [[3, 1]]]]},
    {"generators": [{"name": "x", "degree": 0}], "form": {"degree": 0}, "mult": [[0, 0]]},
])
def test_malformed_json(doc):
    with pytest.raises(G.StructureError):
        G.algebra_from_json(doc)
