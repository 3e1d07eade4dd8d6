"""Seeded property suites over the whole stack.

Each suite draws instance ``i`` from ``random.Random(f"{seed}:{name}:{i}")``,
so results do not depend on how instances are scheduled; the summaries count
instances and failures per identity.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import bv as BV
from . import graded as G
from . import graphs as GR
from . import master as MS
from . import necklace as NK
from . import sampling as S
from .cyclic_oracle import cyclic_cohomology
from .util import acc, parallel_map
from .wedge import Lambda, NecklaceBialgebra, Series, book_bialgebra, sl2_bialgebra


def _sg(e):
    return -1 if e & 1 else 1


def _rng(seed, name, i):
    return random.Random(f"{seed}:{name}:{i}")


def _tally(name, results, seed, **extra):
    """Count failures per identity; keys starting with "nontrivial-" only count hits."""
    counts, coverage = {}, {}
    for res in results:
        for key, ok in res:
            if key.startswith("nontrivial-"):
                coverage[key] = coverage.get(key, 0) + (1 if ok else 0)
                continue
            c = counts.setdefault(key, {"instances": 0, "failures": 0})
            c["instances"] += 1
            c["failures"] += 0 if ok else 1
    status = "pass" if all(c["failures"] == 0 for c in counts.values()) else "fail"
    out = {"check": name, "status": status, "identities": counts, "coverage": coverage,
           "seed": seed, "residual_terms": [], "truncation": None}
    out.update(extra)
    return out


# -- Lie bialgebra of necklaces ---------------------------------------------------

ATTEMPTS = 30   # redraws spent looking for an instance where the operations do not vanish


def _lie_instance(seed, i, max_dim, max_len):
    rng = _rng(seed, "lie", i)
    for _ in range(ATTEMPTS):
        neck = NK.Necklaces(S.random_form(rng, max_dim, 3))
        A = S.random_homogeneous(rng, neck, max_len, count=4)
        B = S.random_homogeneous(rng, neck, max_len, count=4)
        C = S.random_homogeneous(rng, neck, max_len - 1)
        if NK.bracket(A, B) and NK.cobracket(A, False) and NK.cobracket(B, False):
            break
    pa, pb = A.parity(), B.parity()
    AB = NK.bracket(A, B)
    out = [("nontrivial-bracket", bool(AB)), ("nontrivial-cobracket", bool(NK.cobracket(A, False))),
           ("antisymmetry", not (AB + _sg(pa * pb) * NK.bracket(B, A))),
           ("bracket-derivative-oracle", NK.bracket_via_derivatives(A, B) == AB),
           ("jacobi", NK.bracket(A, NK.bracket(B, C))
            == NK.bracket(AB, C) + _sg(pa * pb) * NK.bracket(B, NK.bracket(A, C)))]
    for keep in (True, False):
        tag = "" if keep else "/reduced"
        L = NK.cobracket(A, keep)
        out.append(("cobracket-in-wedge2" + tag, NK.wedge2_is_antisymmetric(neck, L)))
        out.append(("bracket-of-cobracket" + tag, not NK.bracket_of_wedge2(neck, L, keep)))
        out.append(("co-jacobi" + tag, not NK.cojacobi_tensor(A, keep)))
        diff = dict(NK.act_on_wedge2(A, NK.cobracket(B, keep), keep))
        for k, v in NK.act_on_wedge2(B, L, keep).items():
            acc(diff, k, -_sg(pa * pb) * v)
        for k, v in NK.cobracket(AB, keep).items():
            acc(diff, k, -v)
        out.append(("cocycle" + tag, not diff))
    return out


def lie_bialgebra_suite(seed, count=100, max_dim=4, max_len=5):
    res = parallel_map(lambda i: _lie_instance(seed, i, max_dim, max_len), range(count))
    return _tally("lie-bialgebra", res, seed, count=count, max_dim=max_dim, max_len=max_len)


# -- Λ(𝔤) ------------------------------------------------------------------------

def _wedge_identities(lam, A, B, C, necklace_backend):
    a, b = A.parity(), B.parity()
    bd, cb, br, mul, psi = lam.boundary, lam.coboundary, lam.bracket, lam.mul, lam.psi
    out = [("nontrivial-boundary", bool(bd(mul(A, B)))), ("nontrivial-coboundary", bool(cb(A))),
           ("boundary-squared", not bd(bd(A))),
           ("coboundary-squared", not cb(cb(A))),
           ("bv-identity", _sg(a) * br(A, B) == mul(bd(A), B) - bd(mul(A, B)) + _sg(a) * mul(A, bd(B))),
           ("bracket-antisymmetry", br(A, B) == -_sg((a + 1) * (b + 1)) * br(B, A)),
           ("bracket-jacobi", br(A, br(B, C)) == br(br(A, B), C) + _sg((a + 1) * (b + 1)) * br(B, br(A, C))),
           ("poisson-leibniz", br(A, mul(B, C)) == mul(br(A, B), C) + _sg((a + 1) * b) * mul(B, br(A, C))),
           ("coboundary-leibniz", cb(mul(A, B)) == mul(cb(A), B) + _sg(a) * mul(A, cb(B))),
           ("coboundary-derivation-of-bracket", cb(br(A, B)) == br(cb(A), B) + _sg(a + 1) * br(A, cb(B))),
           ("psi-derivation-of-product", psi(mul(A, B)) == mul(psi(A), B) + mul(A, psi(B))),
           ("psi-derivation-of-bracket", psi(br(A, B)) == br(psi(A), B) + br(A, psi(B)))]
    if necklace_backend:
        out.append(("psi-vanishes", not psi(A) and not psi(mul(A, B))))
    return out


def _random_table_element(rng, lam, d):
    for _ in range(200):
        t = {}
        for _ in range(2):
            k = rng.randint(0, 3)
            t[tuple(rng.randrange(d) for _ in range(k))] = rng.randint(1, 3)
        parts = lam.element(t).split_parity()
        nz = [p for p in parts if p]
        if nz:
            return rng.choice(nz)
    raise RuntimeError("could not sample a table element")


def _wedge_instance(seed, i):
    rng = _rng(seed, "wedge", i)
    if i < 0:
        g = book_bialgebra() if i % 2 else sl2_bialgebra()
        lam = Lambda(g)
        A, B, C = (_random_table_element(rng, lam, len(g.parities)) for _ in range(3))
        return _wedge_identities(lam, A, B, C, False)
    kw = dict(max_len=4, max_factors=2, count=3)
    for _ in range(ATTEMPTS):
        lam = S.random_lambda(rng, 3, 3)
        A = S.random_wedge_homogeneous(rng, lam, **kw)
        B = S.random_wedge_homogeneous(rng, lam, **kw)
        C = S.random_wedge_homogeneous(rng, lam, **kw)
        if lam.coboundary(A) and lam.boundary(lam.mul(A, B)):
            break
    return _wedge_identities(lam, A, B, C, True)


def wedge_suite(seed, count=100):
    """Identities of Λ(𝒜/k) on ``count`` random instances, plus count // 4 on tabulated bialgebras."""
    res = parallel_map(lambda i: _wedge_instance(seed, i), range(-(count // 4), count))
    return _tally("wedge", res, seed, count=count)


# -- master equation -----------------------------------------------------------

def frobenius_series(alg):
    """R = raised structure tensor of ``alg`` as an α-independent series over Λ(𝒜/k)."""
    c = NK.mu_tensor(alg)
    lam = Lambda(NecklaceBialgebra(c.alg))
    return Series({0: lam.element({(w,): v for w, v in c.terms.items()})}, lam)


def corrupted_group_algebra():
    """k[ℤ/2] with g·g = 2·1: associative tables break invariance, so c fails the equation."""
    alg = G.cyclic_group_algebra(2)
    mult = {k: dict(v) for k, v in alg.mult.items()}
    mult[(1, 1)] = {0: Fraction(2)}
    return G.FrobeniusAlgebra(alg.space, alg.form, mult)


def master_suite(seed=None, gmax=3):
    checks = []
    for label, alg in (("dual-numbers", G.dual_numbers(3)), ("group-algebra-Z2", G.cyclic_group_algebra(2))):
        R = frobenius_series(alg)
        lam = R.lam
        c = R[0]
        parts = {"boundary": lam.boundary(c), "coboundary": lam.coboundary(c), "bracket": lam.bracket(c, c)}
        for name, X in parts.items():
            checks.append({"check": f"{label}/{name}-of-c", "status": "pass" if not X else "fail"})
        checks.append(dict(MS.check_master_full(R, gmax), check=f"{label}/master-full"))
        checks.append(dict(MS.exp_closedness_check(R, gmax), check=f"{label}/exp-closedness"))
    bad = MS.check_master_full(frobenius_series(corrupted_group_algebra()), gmax)
    ok = bad["status"] == "fail" and bool(bad["residual_terms"])
    checks.append({"check": "corrupted-table-fails", "status": "pass" if ok else "fail",
                   "residual_count": sum(len(b["terms"]) for b in bad["residual_terms"])})
    for chk in checks:
        chk.pop("parities", None)
    return {"check": "master", "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
            "checks": checks, "seed": seed, "truncation": None, "gmax": gmax, "residual_terms": []}


def _lemma_instance(seed, i, nmax):
    rng = _rng(seed, "lemma", i)
    lam = S.random_lambda(rng, 3, 3)
    A = S.random_wedge_homogeneous(rng, lam, parity=0, max_len=3, max_factors=2, count=2)
    return [(f"power-identity-n{n}", MS.lemma_power_identity(A, n)) for n in range(nmax + 1)]


def lemma_suite(seed, count=20, nmax=6, lt_max=10):
    res = parallel_map(lambda i: _lemma_instance(seed, i, nmax), range(count))
    fact = [[("factorial-identity", MS.factorial_identity(l, t)[0] == MS.factorial_identity(l, t)[1])]
            for l in range(lt_max + 1) for t in range(lt_max + 1)]
    return _tally("lemmas", res + fact, seed, count=count, nmax=nmax, lt_max=lt_max)


# -- BV layer ----------------------------------------------------------------------

def _twisted_bv_defect(car, a, x, y, N):
    """BV identity for d_a = a^{-1}∂a with the original product and bracket."""
    dA = lambda z: BV.twisted_boundary(car, a, z, N)
    X, Y = car.series(x), car.series(y)
    s = _sg(x.parity())
    return (X.bracket(Y, N).scale(s) + dA(X.mul(Y, N)) - dA(X).mul(Y, N) - X.mul(dA(Y), N).scale(s)).truncate(N)


def _bv_instance(seed, i, N):
    rng = _rng(seed, "bv", i)
    kw = dict(max_len=3, max_factors=2, count=2)
    found = None
    for attempt in range(10 * ATTEMPTS):
        lam = S.random_lambda(rng, 3, 3)
        try:
            r = S.random_wedge_homogeneous(rng, lam, parity=1, **kw)
            a = S.random_wedge_homogeneous(rng, lam, **kw)
            b = S.random_wedge_homogeneous(rng, lam, **kw)
            y = S.random_wedge_homogeneous(rng, lam, parity=1, **kw)
            z = S.random_wedge_homogeneous(rng, lam, parity=0, **kw)
        except RuntimeError:
            continue        # this Λ lacks one of the parities; draw another
        found = (lam, r, a, b, y, z)
        if attempt >= ATTEMPTS or (lam.boundary(r) and lam.bracket(r, lam.boundary(r))):
            break
    lam, r, a, b, y, z = found
    car = BV.Carrier(lam)
    out = [("bv-identity", not BV.bv_identity_defect(car, a, b))]
    lhs, rhs = BV.conjugation_sides(car, r, a, N)
    out.append(("conjugation-identity", lhs == rhs))
    lhs, rhs = BV.maurer_cartan_sides(car, r, N)
    out.append(("cocycle-maurer-cartan", lhs == rhs))
    T = lambda x: BV.twisted_action(car, r, x, N)
    out.append(("twisted-action-commutes", car.bd(T(a)) == T(car.bd(a))))
    lhs, rhs = BV.multiplicative_cocycle_sides(car, r, a, N)
    out.append(("multiplicative-cocycle", lhs == rhs))
    # twisting by a = 1 + t·X: a BV operator again iff ∂a = 0
    one = car.series(car.one())
    closed = one + car.series(lam.boundary(y), 1)
    out.append(("twisted-closed-unit", not BV.twisted_boundary(car, closed, car.one(), N)))
    out.append(("twisted-closed-bv", not _twisted_bv_defect(car, closed, a, b, N)))
    out.append(("twisted-expansion", BV.twisted_boundary(car, closed, a, N)
                == BV.twisted_boundary_expanded(car, closed, a, N)))
    out.append(("nontrivial-cocycle", bool(BV.group_cocycle(car, r, N))))
    if lam.boundary(z):
        open_ = one + car.series(z, 1)
        out.append(("twisted-open-unit-fails", bool(BV.twisted_boundary(car, open_, car.one(), N))))
    return out


def bv_suite(seed, count=50, N=4):
    res = parallel_map(lambda i: _bv_instance(seed, i, N), range(count))
    out = _tally("bv", res, seed, count=count)
    out["truncation"] = N
    return out


# -- cyclic oracle -----------------------------------------------------------------

def cyclic_comparison(alg, qmax=3):
    """deformation_cohomology at word length q+1 against HC^q from the Connes complex."""
    M = NK.AInfinityStructure(NK.Necklaces(alg.form), {2: NK.mu_tensor(alg)})
    rows = NK.deformation_cohomology(M.M, qmax + 2)
    oracle = cyclic_cohomology(alg, qmax)
    neck = [r["rank"] for r in rows[1:qmax + 2]]
    assert not any(r["truncated"] for r in rows[1:qmax + 2])
    return {"necklace": neck, "connes": oracle, "status": "pass" if neck == oracle else "fail"}


def cyclic_suite(seed=None, qmax=3):
    checks = []
    for label, alg in (("k", G.ground_field()), ("dual-numbers", G.dual_numbers(3)),
                       ("dual-numbers-deg0", G.dual_numbers(0))):
        checks.append(dict(cyclic_comparison(alg, qmax), check=label))
    return {"check": "cyclic-oracle", "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
            "checks": checks, "seed": seed, "truncation": qmax, "residual_terms": []}


# -- graph complex -----------------------------------------------------------------

def graph_suite(kmax=4, jmax=4, homology_jmax=3, seed=None):
    checks = []
    for colored in (False, True):
        tag = "colored" if colored else "plain"
        ids = GR.bicomplex_identities(kmax, jmax, colored)
        bad = [list(x[:3]) for x in ids if not x[3]]
        checks.append({"check": f"{tag}/bicomplex-identities", "status": "pass" if not bad else "fail",
                       "failures": bad, "count": len(ids)})
        for parity in (0, 1):
            t1 = GR.diagonal_homology(parity, homology_jmax, 1, colored)
            t2 = GR.diagonal_homology(parity, homology_jmax, 2, colored)
            same = [r["rank"] for r in t1["ranks"]] == [r["rank"] for r in t2["ranks"]]
            checks.append({"check": f"{tag}/diagonal-homology-parity{parity}",
                           "status": "pass" if same else "fail",
                           "ranks": [[r["degree"], r["dim"], r["rank"], r["truncated"]] for r in t1["ranks"]]})
    return {"check": "graph-complex", "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
            "checks": checks, "seed": seed, "truncation": jmax, "residual_terms": []}
