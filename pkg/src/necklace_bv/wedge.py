"""Λ(𝔤) = S(𝔤[1]) over a graded Lie bialgebra: product, {.,.}, ∂, d, ψ, δ_α.

A factor x of Lie parity |x| sits in 𝔤[1] with parity π(x) = |x| + 1; a
monomial is a sorted tuple of factors and sorting costs the Koszul sign of
the π-parities (an odd factor may not repeat).  The parity of a monomial is
Σ π; it plays the role of Deg in every sign below.

  {x, y} = [x, y] on generators, extended by
  {A, BC} = {A, B} C + (-1)^{(|A|-1)|B|} B {A, C},   {xR, B} = x{R, B} + (-1)^{|R|(|B|-1)} {x, B} R
  ∂(1) = ∂(x) = 0,   ∂(xR) = (-1)^{π(x)} (x ∂R - {x, R})
  d(x) = Σ (-1)^{|y|} y·z for λ(x) = Σ y ⊗ z, extended as an odd derivation
"""

from __future__ import annotations

from fractions import Fraction

from .necklace import Necklaces
from .rationals import format_q
from .util import acc


class BialgebraError(ValueError):
    pass


class NecklaceBialgebra:
    """𝒜 as a Lie bialgebra; ``reduced`` drops constants (𝒜/k), the default for Λ."""

    def __init__(self, necklaces: Necklaces, reduced=True):
        self.neck = necklaces
        self.reduced = reduced

    def check(self, x):
        if self.reduced and not x:
            raise BialgebraError("the constant word is zero in the reduced algebra")

    def canon(self, x):
        """Canonical rotation of a word and its sign; (None, 0) for a killed word."""
        return self.neck.canon(x)

    def parity(self, x):
        return self.neck.parity(x)

    def grading(self, x):
        return self.neck.grading(x)

    def bracket(self, x, y):
        out = self.neck.bracket_words(x, y)
        if self.reduced and () in out:
            out = {w: c for w, c in out.items() if w}
        return out

    def cobracket(self, x):
        out = self.neck.cobracket_word(x)
        if self.reduced:
            out = {k: c for k, c in out.items() if k[0] and k[1]}
        return out

    def describe(self, x):
        return list(x)


class TableBialgebra:
    """Finite-dimensional bialgebra from tables; generators are 0..dim-1."""

    def __init__(self, parities, bracket, cobracket, degrees=None, names=None):
        self.parities = tuple(int(p) % 2 for p in parities)
        self.degrees = tuple(degrees) if degrees is not None else self.parities
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(len(self.parities)))
        self.br = {}
        for (i, j), vec in dict(bracket).items():
            self.br[(i, j)] = {k: Fraction(v) for k, v in vec.items() if v}
            s = -1 if self.parities[i] * self.parities[j] else 1
            mirror = {k: -s * Fraction(v) for k, v in vec.items() if v}
            if (j, i) in bracket:
                given = {k: Fraction(v) for k, v in bracket[(j, i)].items() if v}
                if given != mirror:
                    raise BialgebraError(f"bracket table not antisymmetric at ({i}, {j})")
            self.br[(j, i)] = mirror
        self.cob = {i: {(a, b): Fraction(v) for (a, b), v in vec.items() if v} for i, vec in dict(cobracket).items()}
        for i, vec in self.cob.items():
            for (a, b) in vec:
                if (self.parities[a] + self.parities[b]) % 2 != self.parities[i]:
                    raise BialgebraError("the cobracket must preserve parity")

    def check(self, x):
        if not 0 <= x < len(self.parities):
            raise BialgebraError(f"no generator {x}")

    def parity(self, x):
        return self.parities[x]

    def grading(self, x):
        return self.degrees[x]

    def bracket(self, x, y):
        return self.br.get((x, y), {})

    def cobracket(self, x):
        return self.cob.get(x, {})

    def describe(self, x):
        return self.names[x]


def abelian_bialgebra(parities):
    return TableBialgebra(parities, {}, {})


def book_bialgebra():
    """[x, y] = y, λ(y) = x ∧ y: the two-dimensional non-abelian Lie bialgebra."""
    return TableBialgebra((0, 0), {(0, 1): {1: 1}}, {1: {(0, 1): 1, (1, 0): -1}}, names=("x", "y"))


def sl2_bialgebra():
    """sl2 with the standard cobracket λ(e) = e ∧ h, λ(f) = f ∧ h, λ(h) = 0."""
    h, e, f = 0, 1, 2
    return TableBialgebra(
        (0, 0, 0),
        {(h, e): {e: 2}, (h, f): {f: -2}, (e, f): {h: 1}},
        {e: {(e, h): 1, (h, e): -1}, f: {(f, h): 1, (h, f): -1}},
        names=("h", "e", "f"))


class Lambda:
    """The algebra Λ(𝔤) = S(𝔤[1]) with its operations; caches monomial-level results."""

    def __init__(self, g):
        self.g = g
        self._br = {}
        self._bd = {}
        self._cb = {}

    # -- monomials ------------------------------------------------------------

    def pi(self, x):
        return (self.g.parity(x) + 1) & 1

    def mono_parity(self, m):
        return sum(self.pi(x) for x in m) & 1

    def Deg(self, m):
        """Σ (deg x + 1) over the factors."""
        return sum(self.g.grading(x) + 1 for x in m)

    def normalize(self, factors):
        """Sort factors with the Koszul sign; returns (monomial, sign) or (None, 0)."""
        f = list(factors)
        sign = 1
        for i in range(1, len(f)):
            j = i
            while j > 0 and f[j - 1] > f[j]:
                if self.pi(f[j - 1]) and self.pi(f[j]):
                    sign = -sign
                f[j - 1], f[j] = f[j], f[j - 1]
                j -= 1
        for a, b in zip(f, f[1:]):
            if a == b and self.pi(a):
                return None, 0
        return tuple(f), sign

    def element(self, terms=None):
        canon = getattr(self.g, "canon", None)
        out = {}
        for m, c in dict(terms or {}).items():
            sign = 1
            if canon is not None:
                pairs = [canon(tuple(x)) for x in m]
                if any(cx is None for cx, _ in pairs):
                    continue        # a factor killed by its own rotation symmetry
                m = tuple(cx for cx, _ in pairs)
                for _, sx in pairs:
                    sign *= sx
            for x in m:
                self.g.check(x)
            nm, s = self.normalize(m)
            if nm is not None and c:
                acc(out, nm, sign * s * Fraction(c))
        return Wedge(self, out)

    def one(self):
        return Wedge(self, {(): Fraction(1)})

    def gen(self, x, coeff=1):
        return self.element({(x,): coeff})

    def from_lie(self, vec):
        """Embed a 𝔤-vector {generator: coeff} as one-factor monomials."""
        return self.element({(x,): c for x, c in vec.items()})

    # -- monomial-level operations -------------------------------------------

    def _mul_mono(self, a, b, c, out):
        nm, s = self.normalize(a + b)
        if nm is not None:
            acc(out, nm, s * c)

    def _bracket_gen(self, x, B):
        """{x, B} for a generator x and a monomial B."""
        out = {}
        px1 = (self.pi(x) + 1) & 1
        run = 0
        for j, y in enumerate(B):
            s = -1 if (px1 * run) & 1 else 1
            for z, c in self.g.bracket(x, y).items():
                self._mul_mono(B[:j] + (z,), B[j + 1:], s * c, out)
            run += self.pi(y)
        return out

    def bracket_mono(self, A, B):
        key = (A, B)
        hit = self._br.get(key)
        if hit is not None:
            return hit
        if not A or not B:
            out = {}
        elif len(A) == 1:
            out = self._bracket_gen(A[0], B)
        else:
            x, R = A[0], A[1:]
            out = {}
            for m, c in self.bracket_mono(R, B).items():
                self._mul_mono((x,), m, c, out)
            s = -1 if (self.mono_parity(R) * (self.mono_parity(B) + 1)) & 1 else 1
            for m, c in self._bracket_gen(x, B).items():
                self._mul_mono(m, R, s * c, out)
        self._br[key] = out
        return out

    def boundary_mono(self, A):
        hit = self._bd.get(A)
        if hit is not None:
            return hit
        out = {}
        if len(A) >= 2:
            x, R = A[0], A[1:]
            s = -1 if self.pi(x) else 1
            for m, c in self.boundary_mono(R).items():
                self._mul_mono((x,), m, s * c, out)
            for m, c in self.bracket_mono((x,), R).items():
                acc(out, m, -s * c)
        self._bd[A] = out
        return out

    def coboundary_gen(self, x):
        out = {}
        for (y, z), c in self.g.cobracket(x).items():
            s = -1 if self.g.parity(y) else 1
            self._mul_mono((y,), (z,), s * c, out)
        return out

    def coboundary_mono(self, A):
        hit = self._cb.get(A)
        if hit is not None:
            return hit
        out = {}
        run = 0
        for i, x in enumerate(A):
            s = -1 if run else 1
            for m, c in self.coboundary_gen(x).items():
                self._mul_mono(A[:i] + m, A[i + 1:], s * c, out)
            run ^= self.pi(x)
        self._cb[A] = out
        return out

    # -- element-level ----------------------------------------------------------

    def _bilinear(self, A, B, op):
        out = {}
        for a, x in A.terms.items():
            for b, y in B.terms.items():
                for m, c in op(a, b).items():
                    acc(out, m, x * y * c)
        return Wedge(self, out)

    def _linear(self, A, op):
        out = {}
        for a, x in A.terms.items():
            for m, c in op(a).items():
                acc(out, m, x * c)
        return Wedge(self, out)

    def mul(self, A, B):
        def op(a, b):
            out = {}
            self._mul_mono(a, b, 1, out)
            return out
        return self._bilinear(A, B, op)

    def bracket(self, A, B):
        return self._bilinear(A, B, self.bracket_mono)

    def boundary(self, A):
        return self._linear(A, self.boundary_mono)

    def coboundary(self, A):
        return self._linear(A, self.coboundary_mono)

    def psi(self, A):
        return self.coboundary(self.boundary(A)) + self.boundary(self.coboundary(A))

    def delta_alpha(self, A):
        """δ_α A = d A + α ∂A as a series in α."""
        return Series({0: self.coboundary(A), 1: self.boundary(A)}, self)


class Wedge:
    """Rational combination of normalized monomials of a :class:`Lambda`."""

    __slots__ = ("lam", "terms")

    def __init__(self, lam, terms):
        self.lam = lam
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Wedge):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc(out, m, c)
        return Wedge(self.lam, out)

    def __neg__(self):
        return Wedge(self.lam, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, s):
        s = Fraction(s)
        return Wedge(self.lam, {m: s * c for m, c in self.terms.items()} if s else {})

    def __mul__(self, other):
        if isinstance(other, Wedge):
            return self.lam.mul(self, other)
        return self.__rmul__(other)

    def parity(self):
        """Common parity Σπ of the monomials, or None if mixed (0 for zero)."""
        ps = {self.lam.mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def split_parity(self):
        parts = ({}, {})
        for m, c in self.terms.items():
            parts[self.lam.mono_parity(m)][m] = c
        return Wedge(self.lam, parts[0]), Wedge(self.lam, parts[1])

    def constant(self):
        return self.terms.get((), Fraction(0))

    def max_factors(self):
        return max((len(m) for m in self.terms), default=0)

    def to_json(self):
        g = self.lam.g
        return [{"factors": [g.describe(x) for x in m], "coeff": format_q(c)}
                for m, c in sorted(self.terms.items())]

    def __repr__(self):
        return f"Wedge({self.to_json()})"


class Series:
    """Finite formal series Σ_k X_k s^k (k may be negative) with Wedge coefficients."""

    __slots__ = ("lam", "coeffs")

    def __init__(self, coeffs, lam):
        self.lam = lam
        self.coeffs = {k: v for k, v in dict(coeffs).items() if v}

    @classmethod
    def const(cls, X):
        return cls({0: X}, X.lam)

    def __getitem__(self, k):
        return self.coeffs.get(k, Wedge(self.lam, {}))

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Series) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return Series(out, self.lam)

    def __neg__(self):
        return Series({k: -v for k, v in self.coeffs.items()}, self.lam)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return Series({k: s * v for k, v in self.coeffs.items()}, self.lam)

    def shift(self, j):
        return Series({k + j: v for k, v in self.coeffs.items()}, self.lam)

    def truncate(self, top):
        return Series({k: v for k, v in self.coeffs.items() if k <= top}, self.lam)

    def orders(self):
        return sorted(self.coeffs)

    def map(self, f):
        return Series({k: f(v) for k, v in self.coeffs.items()}, self.lam)

    def _combine(self, other, f, top):
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if top is not None and i + j > top:
                    continue
                v = f(a, b)
                if v:
                    out[i + j] = out[i + j] + v if i + j in out else v
        return Series(out, self.lam)

    def mul(self, other, top=None):
        return self._combine(other, self.lam.mul, top)

    def bracket(self, other, top=None):
        return self._combine(other, self.lam.bracket, top)

    def to_json(self):
        return [{"order": k, "terms": self.coeffs[k].to_json()} for k in self.orders()]


def series_delta_alpha(R):
    """δ_α R = d R + α ∂R for a series R in α."""
    lam = R.lam
    out = Series({k: lam.coboundary(v) for k, v in R.coeffs.items()}, lam)
    return out + Series({k + 1: lam.boundary(v) for k, v in R.coeffs.items()}, lam)
