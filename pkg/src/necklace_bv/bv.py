"""BV-algebra layer on Λ(𝔤): twisted differentials, the group cocycle, the twisted action.

Exponentials are formal in a weight t: elements are :class:`Series` in t,
truncated at t^N.  ``r`` always enters as t·r.  Parities are the sign
parities Σπ of :mod:`wedge`.  ``r`` is taken odd in Λ, i.e. even for the Lie
algebra Λ[1] carrying {.,.}; then ∂r and the cocycle c(exp r) are even.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import SparseExactMatrix, homology_rank
from .wedge import Series


class BVError(ValueError):
    pass


def _sg(e):
    return -1 if e & 1 else 1


class Carrier:
    """Product, bracket and ∂ of a BV algebra; ``boundary`` may be replaced for controls."""

    def __init__(self, lam, boundary=None):
        self.lam = lam
        self._boundary = boundary or lam.boundary

    def bd(self, X):
        if isinstance(X, Series):
            return X.map(self._boundary)
        return self._boundary(X)

    def br(self, X, Y, N=None):
        if isinstance(X, Series):
            return X.bracket(Y, N)
        return self.lam.bracket(X, Y)

    def mul(self, X, Y, N=None):
        if isinstance(X, Series):
            return X.mul(Y, N)
        return self.lam.mul(X, Y)

    def one(self):
        return self.lam.one()

    def series(self, X, order=0):
        return Series({order: X}, self.lam)


def bv_identity_defect(carrier, A, B):
    """(-1)^{|A|}{A,B} + ∂(AB) - (∂A)B - (-1)^{|A|}A(∂B) for homogeneous A."""
    a = A.parity()
    s = _sg(a)
    return (s * carrier.br(A, B) + carrier.bd(carrier.mul(A, B))
            - carrier.mul(carrier.bd(A), B) - s * carrier.mul(A, carrier.bd(B)))


def bv_axioms_check(carrier, samples):
    """Check the BV identity on sample pairs, ∂² = 0 on samples and ∂(1) = 0."""
    failures = []
    if carrier.bd(carrier.one()):
        failures.append({"kind": "unit"})
    for i, (A, B) in enumerate(samples):
        if bv_identity_defect(carrier, A, B):
            failures.append({"kind": "bv-identity", "pair": i})
        if carrier.bd(carrier.bd(A)):
            failures.append({"kind": "nilpotency", "pair": i})
    return {"check": "bv-axioms", "status": "pass" if not failures else "fail",
            "failures": failures, "samples": len(samples)}


# -- t-series helpers ---------------------------------------------------------

def ad_power(carrier, r, X, k, N):
    """ad(t r)^k X for a series X, truncated at t^N."""
    R = carrier.series(r, 1)
    out = X
    for _ in range(k):
        out = R.bracket(out, N)
    return out


def exp_ad(carrier, r, X, N):
    """exp(r)·X := Σ_k ad(t r)^k X / k! mod t^{N+1}."""
    if not isinstance(X, Series):
        X = carrier.series(X)
    R = carrier.series(r, 1)
    term, total = X, X
    for k in range(1, N + 1):
        term = R.bracket(term, N).scale(Fraction(1, k))
        if not term:
            break
        total = total + term
    return total.truncate(N)


def group_cocycle(carrier, r, N):
    """c(exp(t r)) = Σ_{n=0}^{N-1} t^{n+1} ad(r)^n (∂r) / (n+1)!  (mod t^{N+1})."""
    lam = carrier.lam
    term = carrier.bd(r)
    out = {}
    for n in range(N):
        if not term:
            break
        out[n + 1] = Fraction(1, _fact(n + 1)) * term
        term = lam.bracket(r, term)
    return Series(out, lam)


def _fact(n):
    f = 1
    for i in range(2, n + 1):
        f *= i
    return f


def series_exp(carrier, X, N):
    """exp(X) for a series X with no t^0 part, mod t^{N+1}."""
    if X[0]:
        raise BVError("exp needs a series without a t^0 part")
    one = carrier.series(carrier.one())
    term, total = one, one
    for k in range(1, N + 1):
        term = term.mul(X, N).scale(Fraction(1, k))
        if not term:
            break
        total = total + term
    return total


def inverse(carrier, a, N, max_steps=64):
    """a^{-1} mod t^{N+1} for a = u + X with scalar u = const part at t^0, u ≠ 0."""
    if not isinstance(a, Series):
        a = carrier.series(a)
    u = a[0].constant()
    if not u:
        raise BVError("element is not invertible: zero unit part")
    one = carrier.series(carrier.one())
    X = (a - one.scale(u)).scale(-1 / u)        # a = u (1 - X)
    term, total = one, one
    for _ in range(max_steps):
        term = term.mul(X, N)
        if not term:
            return total.scale(1 / u)
        total = total + term
    raise BVError("geometric series does not terminate in the truncation")


def twisted_boundary(carrier, a, x, N):
    """d_a(x) = a^{-1} ∂(a x) mod t^{N+1}."""
    if not isinstance(x, Series):
        x = carrier.series(x)
    if not isinstance(a, Series):
        a = carrier.series(a)
    ainv = inverse(carrier, a, N)
    return ainv.mul(carrier.bd(a.mul(x, N)), N)


def twisted_boundary_expanded(carrier, a, x, N):
    """∂x - a^{-1}{a, x} + a^{-1}∂(a) x for even a."""
    if not isinstance(x, Series):
        x = carrier.series(x)
    if not isinstance(a, Series):
        a = carrier.series(a)
    ainv = inverse(carrier, a, N)
    return (carrier.bd(x) - ainv.mul(a.bracket(x, N), N)
            + ainv.mul(carrier.bd(a), N).mul(x, N))


def lie_action(carrier, r, a):
    """A(r)a = {r, a} + (-1)^{|r|+1} (∂r) a."""
    return carrier.br(r, a) + _sg(r.parity() + 1) * carrier.mul(carrier.bd(r), a)


def conjugation_sides(carrier, r, a, N):
    """Both sides of ∂(exp(r)a) = exp(r)∂a + {c(exp r), exp(r)a} mod t^{N+1}."""
    ea = exp_ad(carrier, r, a, N)
    lhs = carrier.bd(ea)
    c = group_cocycle(carrier, r, N)
    rhs = exp_ad(carrier, r, carrier.bd(a), N) + c.bracket(ea, N)
    return lhs, rhs


def conjugation_identity_check(carrier, r, a, N):
    lhs, rhs = conjugation_sides(carrier, r, a, N)
    diff = lhs - rhs
    return {"check": "conjugation-identity", "status": "pass" if not diff else "fail",
            "truncation": N, "residual_terms": diff.to_json()}


def maurer_cartan_sides(carrier, r, N):
    """(∂c, ½{c, c}) for c = c(exp(t r)) mod t^{N+1}."""
    c = group_cocycle(carrier, r, N)
    return carrier.bd(c), c.bracket(c, N).scale(Fraction(1, 2))


def twisted_action(carrier, r, a, N):
    """T(exp r)a = exp(c)·exp(r)a mod t^{N+1}."""
    c = group_cocycle(carrier, r, N)
    return series_exp(carrier, c, N).mul(exp_ad(carrier, r, a, N), N)


def multiplicative_cocycle_sides(carrier, r, a, N):
    """(exp(-c) ∂(exp(c) a), ∂a - {c, a}) mod t^{N+1}."""
    c = group_cocycle(carrier, r, N)
    if not isinstance(a, Series):
        a = carrier.series(a)
    lhs = series_exp(carrier, -c, N).mul(carrier.bd(series_exp(carrier, c, N).mul(a, N)), N)
    return lhs, carrier.bd(a) - c.bracket(a, N)


def equivalence_check(carrier, a1, a2, r, N):
    """True iff T(exp r) a1 = a2 mod t^{N+1}; both must be ∂-closed."""
    for a in (a1, a2):
        s = a if isinstance(a, Series) else carrier.series(a)
        if carrier.bd(s):
            raise BVError("equivalence is defined for ∂-closed elements")
    lhs = twisted_action(carrier, r, a1, N)
    a2 = a2 if isinstance(a2, Series) else carrier.series(a2)
    return lhs == a2.truncate(N)


# -- deformation complex ----------------------------------------------------------

def _weight_step(S):
    """k with ℓ(m) = k·f(m) on every monomial of S (3 for S = 0)."""
    ks = set()
    for m in S.terms:
        if len(m) != 1:
            raise BVError("the twisting element must be a combination of single necklaces")
        ks.add(len(m[0]))
    if len(ks) > 1:
        raise BVError("the twisting element must be homogeneous in word length")
    return ks.pop() if ks else 3


def window_basis(lam, weight, k, max_factors):
    """Monomials with f ≤ max_factors factors and ℓ - k f = weight letters in total."""
    neck = lam.g.neck
    out = []
    for f in range(0, max_factors + 1):
        total = weight + k * f
        if f == 0:
            if total == 0:
                out.append(())
            continue
        if total < f:
            continue
        words = {}

        def rec(left, parts_left, minimum, chosen):
            if parts_left == 0:
                if left == 0:
                    yield tuple(chosen)
                return
            for m in range(minimum, left - parts_left + 2):
                yield from rec(left - m, parts_left - 1, m, chosen + [m])

        for lens in rec(total, f, 1, []):
            pools = []
            for m in lens:
                if m not in words:
                    words[m] = neck.words_of_length(m)
                pools.append(words[m])
            seen = set()

            def pick(i, chosen):
                if i == len(pools):
                    nm, s = lam.normalize(chosen)
                    if nm is not None and nm not in seen:
                        seen.add(nm)
                        out.append(nm)
                    return
                for w in pools[i]:
                    pick(i + 1, chosen + [w])

            pick(0, [])
    return sorted(set(out), key=lambda m: (len(m), m))


def deformation_complex(lam, S, weights, max_factors):
    """Ranks of (Λ, ∂ - {S, ·}) (a = exp S) on the window f ≤ max_factors.

    Monomials are graded by the weight ℓ - k f (ℓ letters, f factors, k the
    word length of S); both ∂ and {S, ·} raise it by k - 2, and f ≤ max_factors
    is a subcomplex.  Requires ∂S = ½{S, S}, which makes ∂ exp(S) = 0.
    Returns rows {"weight", "dim", "rank"}; the nilpotency of the windowed
    differential is verified.
    """
    if lam.boundary(S) != Fraction(1, 2) * lam.bracket(S, S):
        raise BVError("∂S != ½{S, S}: exp(S) is not ∂-closed")
    k = _weight_step(S)
    step = k - 2

    bases = {}

    def basis(w):
        if w not in bases:
            bases[w] = window_basis(lam, w, k, max_factors)
        return bases[w]

    def D(X):
        return lam.boundary(X) - lam.bracket(S, X)

    mats = {}

    def matrix(w):
        if w in mats:
            return mats[w]
        src, tgt = basis(w), basis(w + step)
        idx = {m: i for i, m in enumerate(tgt)}
        out = SparseExactMatrix(len(tgt), len(src))
        for c, m in enumerate(src):
            for mm, v in D(lam.element({m: 1})).terms.items():
                if mm not in idx:
                    raise BVError("differential leaves the window")
                out.add(idx[mm], c, v)
        mats[w] = out
        return out

    rows = []
    for w in weights:
        if step == 0:
            d = matrix(w)
            if not (d @ d).is_zero():
                raise BVError("windowed differential is not square-zero")
            rows.append({"weight": w, "dim": len(basis(w)), "rank": homology_rank(d, d)})
        else:
            rows.append({"weight": w, "dim": len(basis(w)),
                         "rank": homology_rank(matrix(w - step), matrix(w))})
    return rows


def scale_by_length(lam, X, s):
    """The automorphism word ↦ s^{ℓ-2} word of 𝒜, extended multiplicatively to Λ."""
    s = Fraction(s)
    out = {}
    for m, c in X.terms.items():
        e = sum(len(w) - 2 for w in m)
        out[m] = c * s ** e
    return lam.element(out)
