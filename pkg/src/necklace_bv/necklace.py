"""Cyclic words over A[1]: the Lie bialgebra 𝒜 = (T(A[1])/[T, T])[n-2].

A word is a tuple of generator indices.  Letter u carries the parity
p_u = ã_u - 1 + n (mod 2) and a word w the Lie parity |w| = Σ p + n (mod 2);
these are the parities that govern every sign below.  Rotating
w = uv to vu costs (-1)^{p(u) p(v)}.  The form enters through
ω(u, v) = (-1)^{ã_u} (e_u, e_v).

Words are stored in canonical rotation (lexicographically least, earliest
offset), with the rotation sign moved into the coefficient.  A word equal to
one of its rotations with sign -1 is zero.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .graded import FrobeniusAlgebra, InnerProduct, StructureError, raised_structure_tensor
from .linalg import SparseExactMatrix, homology_rank, rank
from .rationals import format_q, parse_q
from .util import acc


class Necklaces:
    """The algebra 𝒜 attached to an inner-product space; caches word-level operations."""

    def __init__(self, form: InnerProduct):
        self.form = form
        self.dim = form.space.dim
        self.P = form.letter_parities()
        self.N = form.n % 2
        self.W = [[Fraction(v) for v in row] for row in form.omega()]
        self._bracket_cache = {}
        self._cobracket_cache = {}

    # -- words --------------------------------------------------------------

    def spar(self, w):
        return sum(self.P[x] for x in w) & 1

    def parity(self, w):
        """Lie parity of a word (the constant word has parity n)."""
        return (self.spar(w) + self.N) & 1

    def raw_degree(self, w):
        deg = self.form.space.degrees
        return sum(deg[x] - 1 for x in w)

    def grading(self, w):
        """Degree in 𝒜, i.e. after the shift [n - 2]."""
        return self.raw_degree(w) - (self.form.n - 2)

    def rot_sign(self, w, k):
        a = sum(self.P[x] for x in w[:k]) & 1
        b = sum(self.P[x] for x in w[k:]) & 1
        return -1 if a and b else 1

    def canon(self, w):
        """(canonical rotation, sign), or (None, 0) if the word is killed by its symmetry."""
        w = tuple(w)
        m = len(w)
        if m == 0:
            return (), 1
        best, off = w, 0
        for k in range(1, m):
            r = w[k:] + w[:k]
            if r < best:
                best, off = r, k
        for k in range(1, m):
            if best[k:] + best[:k] == best:
                if self.rot_sign(best, k) == -1:
                    return None, 0
                break
        return best, self.rot_sign(w, off)

    def element(self, terms=None):
        return NecklaceElement(self, terms or {})

    def word(self, *letters, coeff=1):
        return self.element({tuple(letters): coeff})

    def words_of_length(self, m):
        """Canonical nonvanishing words of length m."""
        out = set()
        for w in itertools.product(range(self.dim), repeat=m):
            c, s = self.canon(w)
            if c is not None:
                out.add(c)
        return sorted(out)

    # -- word-level operations ---------------------------------------------

    def bracket_words(self, H, G):
        """[H, G] = Σ ε ε' ω(h, g) (X Y): H rotated to end in h = X h, G rotated to g Y."""
        key = (H, G)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        out = {}
        mh, mg = len(H), len(G)
        for i in range(mh):
            k = (i + 1) % mh
            Hr = H[k:] + H[:k]
            e1 = self.rot_sign(H, k)
            X, h = Hr[:-1], Hr[-1]
            row = self.W[h]
            for j in range(mg):
                w = row[G[j]]
                if not w:
                    continue
                Gr = G[j:] + G[:j]
                c, s = self.canon(X + Gr[1:])
                if c is not None:
                    acc(out, c, e1 * self.rot_sign(G, j) * s * w)
        self._bracket_cache[key] = out
        return out

    def cobracket_word(self, H):
        """λ(H) as ordered pairs {(inner, outer): coeff}, constants included.

        For each rotation H' = h X h' Y of H the term is
        ε (-1)^{p_{h'} |X|_s + n (|X|_s + p_{h'})} ω(h, h') X ⊗ Y.
        """
        hit = self._cobracket_cache.get(H)
        if hit is not None:
            return hit
        out = {}
        m = len(H)
        P, N = self.P, self.N
        for l in range(m):
            Hr = H[l:] + H[:l]
            e = self.rot_sign(H, l)
            hl = Hr[0]
            for t in range(1, m):
                hm = Hr[t]
                w = self.W[hl][hm]
                if not w:
                    continue
                X, Y = Hr[1:t], Hr[t + 1:]
                sx = self.spar(X)
                expo = P[hm] * sx + N * (sx + P[hm])
                cx, s1 = self.canon(X)
                cy, s2 = self.canon(Y)
                if cx is None or cy is None:
                    continue
                acc(out, (cx, cy), (-1 if expo & 1 else 1) * e * s1 * s2 * w)
        self._cobracket_cache[H] = out
        return out


class NecklaceElement:
    """Finite rational combination of canonical cyclic words."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        out = {}
        for w, c in dict(terms).items():
            c = Fraction(c)
            if not c:
                continue
            cw, s = alg.canon(w)
            if cw is not None:
                acc(out, cw, s * c)
        self.terms = out

    @classmethod
    def _raw(cls, alg, terms):
        obj = cls.__new__(cls)
        obj.alg = alg
        obj.terms = terms
        return obj

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, NecklaceElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc(out, w, c)
        return NecklaceElement._raw(self.alg, out)

    def __neg__(self):
        return NecklaceElement._raw(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, s):
        s = Fraction(s)
        return NecklaceElement._raw(self.alg, {w: s * c for w, c in self.terms.items()} if s else {})

    def __repr__(self):
        return f"NecklaceElement({self.to_json()})"

    def parity(self):
        """Common Lie parity of all terms, or None if inhomogeneous (0 for the zero element)."""
        ps = {self.alg.parity(w) for w in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def split_parity(self):
        parts = ({}, {})
        for w, c in self.terms.items():
            parts[self.alg.parity(w)][w] = c
        return tuple(NecklaceElement._raw(self.alg, p) for p in parts)

    def to_json(self):
        return [{"word": list(w), "coeff": format_q(c)} for w, c in sorted(self.terms.items())]


def element_from_json(alg, doc):
    terms = {}
    for t in doc:
        try:
            w = tuple(int(x) for x in t["word"])
            c = parse_q(t["coeff"])
        except (KeyError, TypeError) as exc:
            raise StructureError("necklace terms need 'word' and 'coeff'") from exc
        if any(not 0 <= x < alg.dim for x in w):
            raise StructureError(f"letter out of range in {list(w)}")
        cw, s = alg.canon(w)
        if cw is not None:
            acc(terms, cw, s * c)
    return NecklaceElement._raw(alg, terms)


# -- derivatives --------------------------------------------------------------

def left_derivative(H, a):
    """∂H/∂←a: over the rotations of each word ending in ``a``, the signed remaining word.

    The covector acts on the last slot from the right, so no letter is crossed;
    the sign is that of the rotation.  Result: {tensor word: coeff}.
    """
    alg, out = H.alg, {}
    for w, c in H.terms.items():
        m = len(w)
        for k in range(m):
            r = w[k:] + w[:k]
            if r[-1] == a:
                acc(out, r[:-1], c * alg.rot_sign(w, k))
    return out


def right_derivative(H, a):
    """∂H/∂→a: rotations starting with ``a``, contraction on the first slot."""
    alg, out = H.alg, {}
    for w, c in H.terms.items():
        m = len(w)
        for k in range(m):
            r = w[k:] + w[:k]
            if r[0] == a:
                acc(out, r[1:], c * alg.rot_sign(w, k))
    return out


def _check_same(H, G):
    if H.alg is not G.alg:
        raise StructureError("elements live over different inner-product spaces")


def bracket(H, G):
    """[H, G] = Σ_{i,j} ∂H/∂←a_i ω(a_i, a_j) ∂G/∂→a_j, closed into cyclic words."""
    _check_same(H, G)
    alg, out = H.alg, {}
    for u, a in H.terms.items():
        for v, b in G.terms.items():
            for w, c in alg.bracket_words(u, v).items():
                acc(out, w, a * b * c)
    return NecklaceElement._raw(alg, out)


def bracket_via_derivatives(H, G):
    """Reference evaluation of the bracket literally through the two derivative sums."""
    _check_same(H, G)
    alg, out = H.alg, {}
    for i in range(alg.dim):
        left = left_derivative(H, i)
        if not left:
            continue
        for j in range(alg.dim):
            w = alg.W[i][j]
            if not w:
                continue
            for X, x in left.items():
                for Y, y in right_derivative(G, j).items():
                    cw, s = alg.canon(X + Y)
                    if cw is not None:
                        acc(out, cw, w * x * y * s)
    return NecklaceElement._raw(alg, out)


def cobracket(H, keep_const=True):
    """λ(H) in Λ²(𝒜) as a graded-antisymmetric dict {(X, Y): coeff}.

    With ``keep_const=False`` terms with an empty factor are dropped (λ on 𝒜/k).
    """
    alg, out = H.alg, {}
    for w, a in H.terms.items():
        for (x, y), c in alg.cobracket_word(w).items():
            if keep_const or (x and y):
                acc(out, (x, y), a * c)
    return out


def wedge2_is_antisymmetric(alg, L):
    for (x, y), c in L.items():
        s = -1 if (alg.parity(x) * alg.parity(y)) & 1 else 1
        if L.get((y, x), 0) != -s * c:
            return False
    return True


def bracket_of_wedge2(alg, L, keep_const=True):
    """[.,.] applied to a tensor {(X, Y): c}."""
    out = {}
    for (x, y), c in L.items():
        for w, v in alg.bracket_words(x, y).items():
            if keep_const or w:
                acc(out, w, c * v)
    return NecklaceElement._raw(alg, out)


def act_on_wedge2(H, L, keep_const=True):
    """H · (X ⊗ Y) = [H, X] ⊗ Y + (-1)^{|H||X|} X ⊗ [H, Y] for homogeneous H."""
    alg, out = H.alg, {}
    for h, a in H.terms.items():
        ph = alg.parity(h)
        for (x, y), c in L.items():
            for w, v in alg.bracket_words(h, x).items():
                if keep_const or w:
                    acc(out, (w, y), a * c * v)
            s = -1 if (ph * alg.parity(x)) & 1 else 1
            for w, v in alg.bracket_words(h, y).items():
                if keep_const or w:
                    acc(out, (x, w), s * a * c * v)
    return out


def cojacobi_tensor(H, keep_const=True):
    """Graded cyclic sum of (λ ⊗ 1) λ(H); vanishing is Jacobi for the dual bracket."""
    alg = H.alg
    T = {}
    for (x, y), c in cobracket(H, keep_const).items():
        for (u, v), e in alg.cobracket_word(x).items():
            if keep_const or (u and v):
                acc(T, (u, v, y), c * e)
    S = {}
    for (a, b, cc), v in T.items():
        pa, pb, pc = alg.parity(a), alg.parity(b), alg.parity(cc)
        acc(S, (a, b, cc), v)
        acc(S, (cc, a, b), v * (-1) ** ((pc * (pa + pb)) & 1))
        acc(S, (b, cc, a), v * (-1) ** ((pa * (pb + pc)) & 1))
    return S


def evaluate_functionals(S, phis):
    """(φ1 ⊗ φ2 ⊗ φ3)(S) for finite-support functionals {word: value}."""
    total = Fraction(0)
    for (a, b, c), v in S.items():
        total += v * phis[0].get(a, 0) * phis[1].get(b, 0) * phis[2].get(c, 0)
    return total


# -- universal map and inclusions --------------------------------------------

def universal_map(H):
    """v ↦ Σ_a ω(v, a) ∂H/∂→a for each letter v; returns {v: {tensor word: coeff}}."""
    alg, out = H.alg, {}
    for v in range(alg.dim):
        img = {}
        for a in range(alg.dim):
            w = alg.W[v][a]
            if w:
                for t, c in right_derivative(H, a).items():
                    acc(img, t, w * c)
        if img:
            out[v] = img
    return out


def universal_map_kernel_dim(alg, max_len):
    """Dimension of the kernel of H ↦ universal_map(H) on words of length ≤ max_len."""
    basis = [w for m in range(max_len + 1) for w in alg.words_of_length(m)]
    rows = {}
    m = SparseExactMatrix(1, len(basis))
    entries = []
    for col, w in enumerate(basis):
        for v, img in universal_map(alg.word(*w)).items():
            for t, c in img.items():
                r = rows.setdefault((v, t), len(rows))
                entries.append((r, col, c))
    m = SparseExactMatrix(max(len(rows), 1), len(basis))
    for r, c, v in entries:
        m.add(r, c, v)
    return len(basis) - rank(m)


def include(embedding, H, target):
    """Relabel H along an isometric embedding {letter of A1: letter of A2} into ``target``."""
    src = H.alg
    f1, f2 = src.form, target.form
    emb = dict(embedding)
    if sorted(emb) != list(range(src.dim)) or len(set(emb.values())) != src.dim:
        raise StructureError("embedding must be injective on all generators")
    for a, b in emb.items():
        if f1.space.degrees[a] != f2.space.degrees[b]:
            raise StructureError("embedding must preserve degrees")
    if f1.n != f2.n:
        raise StructureError("forms have different degrees")
    for a in range(src.dim):
        for b in range(src.dim):
            if f1.value(a, b) != f2.value(emb[a], emb[b]):
                raise StructureError("embedding is not isometric")
    return NecklaceElement(target, {tuple(emb[x] for x in w): c for w, c in H.terms.items()})


def include_wedge2(embedding, L, target):
    out = {}
    for (x, y), c in L.items():
        cx, s1 = target.canon(tuple(embedding[a] for a in x))
        cy, s2 = target.canon(tuple(embedding[a] for a in y))
        if cx is not None and cy is not None:
            acc(out, (cx, cy), s1 * s2 * c)
    return out


# -- Frobenius and A∞ input ---------------------------------------------------

def mu_tensor(alg_or_frob, necklaces=None):
    """The raised structure tensor of a Frobenius algebra as an element of 𝒜³."""
    frob = alg_or_frob
    if not isinstance(frob, FrobeniusAlgebra):
        raise TypeError("expected a FrobeniusAlgebra")
    neck = necklaces or Necklaces(frob.form)
    return NecklaceElement(neck, raised_structure_tensor(frob))


class AInfinityStructure:
    """M = Σ μ_i, μ_i a combination of words of length i + 1."""

    def __init__(self, necklaces, components):
        self.alg = necklaces
        self.components = {}
        for i, el in dict(components).items():
            if any(len(w) != i + 1 for w in el.terms):
                raise StructureError(f"μ_{i} must consist of words of length {i + 1}")
            if el:
                self.components[i] = el

    @property
    def M(self):
        total = self.alg.element()
        for el in self.components.values():
            total = total + el
        return total

    def residual(self):
        M = self.M
        return bracket(M, M)

    def is_valid(self):
        return not self.residual()


def deformation_cohomology(M, max_len):
    """Ranks of (𝒜, [M, ·]) on words of length ≤ max_len, graded by word length.

    M must be a combination of words of a single length m0 (or zero); then
    [M, ·] raises word length by m0 - 2.  Length L is exact when L + m0 - 2
    ≤ max_len, otherwise flagged truncated.  Returns rows
    {"length", "dim", "rank", "truncated"}.
    """
    alg = M.alg
    if bracket(M, M):
        raise StructureError("[M, M] != 0")
    lens = {len(w) for w in M.terms}
    if len(lens) > 1:
        raise StructureError("M must be homogeneous in word length")
    step = lens.pop() - 2 if lens else None
    bases = {m: alg.words_of_length(m) for m in range(max_len + 1)}

    def diff(m):
        tgt = m + step if step is not None else None
        src = bases[m]
        if tgt is None or not 0 <= tgt <= max_len:
            return SparseExactMatrix(0, len(src))
        idx = {w: i for i, w in enumerate(bases[tgt])}
        out = SparseExactMatrix(len(bases[tgt]), len(src))
        for c, w in enumerate(src):
            for v, x in bracket(M, alg.word(*w)).terms.items():
                out.add(idx[v], c, x)
        return out

    rows = []
    for m in range(max_len + 1):
        prev = m - step if step is not None else None
        if prev is not None and 0 <= prev <= max_len:
            d_in = diff(prev)
        else:
            d_in = SparseExactMatrix(len(bases[m]), 0)
        truncated = step is not None and m + step > max_len
        rows.append({"length": m, "dim": len(bases[m]), "rank": homology_rank(d_in, diff(m)),
                     "truncated": truncated})
    return rows
