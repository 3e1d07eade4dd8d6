"""Graded spaces, degree-n bilinear forms and Frobenius algebras.

Generators are addressed by integer index; names only matter for input and
display.  ``ã`` below is the degree of a generator of A; on A[1] the same
generator has degree ã - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import SparseExactMatrix, dense_inverse, rank
from .rationals import format_q, parse_q


class StructureError(ValueError):
    """Input data violates a structural axiom (degree, symmetry, associativity...)."""


@dataclass(frozen=True)
class GradedSpace:
    names: tuple
    degrees: tuple
    shift: int = 0

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise StructureError("generator names must be distinct")
        if len(self.names) != len(self.degrees):
            raise StructureError("every generator needs a degree")

    @property
    def dim(self):
        return len(self.names)

    def degree(self, i):
        """Degree of generator ``i`` in the shifted space A[shift]."""
        return self.degrees[i] - self.shift

    def shifted(self, k):
        """A[k]: (A[k])^i = A^{i+k}, so a generator's degree drops by k."""
        return GradedSpace(self.names, self.degrees, self.shift + k)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise StructureError(f"unknown generator {name!r}") from None


def make_graded_space(generators):
    """Space from ``[(name, degree), ...]`` with shift 0."""
    gens = list(generators)
    return GradedSpace(tuple(str(n) for n, _ in gens), tuple(int(d) for _, d in gens))


@dataclass(frozen=True)
class InnerProduct:
    """Graded-symmetric form of degree n, stored as a full table (both orders)."""

    space: GradedSpace
    n: int
    table: dict = field(hash=False, compare=True)

    def value(self, a, b):
        return self.table.get((a, b), Fraction(0))

    def matrix(self):
        d = self.space.dim
        return [[self.value(a, b) for b in range(d)] for a in range(d)]

    def is_nondegenerate(self):
        d = self.space.dim
        return rank(SparseExactMatrix.from_dense(self.matrix())) == d if d else True

    # letters of A[1]: parity of the shifted degree twisted by n, and the
    # antisymmetrised form ω(u, v) = (-1)^{ã_u} (e_u, e_v)
    def letter_parities(self):
        return tuple((a - 1 + self.n) % 2 for a in self.space.degrees)

    def omega(self):
        deg = self.space.degrees
        return [[(-1) ** (deg[u] % 2) * self.value(u, v) for v in range(self.space.dim)]
                for u in range(self.space.dim)]


def make_form(space, n, entries):
    """Validate ``entries`` ((a, b) -> value) and complete them by graded symmetry.

    (a, b) may be nonzero only if ã + b̃ = n, and (b, a) = (-1)^{ã b̃} (a, b).
    """
    deg = space.degrees
    table = {}
    for (a, b), v in dict(entries).items():
        v = parse_q(v)
        if not (0 <= a < space.dim and 0 <= b < space.dim):
            raise StructureError(f"form entry ({a}, {b}) out of range")
        if not v:
            continue
        if deg[a] + deg[b] != n:
            raise StructureError(f"({space.names[a]}, {space.names[b]}) has degree "
                                 f"{deg[a] + deg[b]}, form degree is {n}")
        mirror = (-1) ** ((deg[a] * deg[b]) % 2) * v
        for key, val in (((a, b), v), ((b, a), mirror)):
            if table.get(key, val) != val:
                raise StructureError(f"entries at {key} conflict with graded symmetry")
            table[key] = val
    return InnerProduct(space, n, table)


@dataclass(frozen=True)
class FrobeniusAlgebra:
    space: GradedSpace
    form: InnerProduct
    mult: dict = field(hash=False)   # (i, j) -> {k: coeff}

    def product(self, u, v):
        """Product of two vectors given as {index: coeff}."""
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.mult.get((a, b), {}).items():
                    s = out.get(c, 0) + x * y * z
                    if s:
                        out[c] = s
                    else:
                        out.pop(c, None)
        return out

    def pairing(self, u, v):
        return sum((x * y * self.form.value(a, b) for a, x in u.items() for b, y in v.items()), Fraction(0))


def frobenius_from_table(space, form, mult):
    """Accept a multiplication table after exhaustive checks of grading, associativity, invariance."""
    table = {}
    for (a, b), vec in dict(mult).items():
        clean = {int(c): parse_q(v) for c, v in dict(vec).items() if parse_q(v)}
        for c in clean:
            if space.degrees[c] != space.degrees[a] + space.degrees[b]:
                raise StructureError(f"{space.names[a]}*{space.names[b]} has a component in "
                                     f"{space.names[c]} of the wrong degree")
        if clean:
            table[(a, b)] = clean
    alg = FrobeniusAlgebra(space, form, table)
    d = space.dim
    for a, b, c in itertools.product(range(d), repeat=3):
        ea, eb, ec = {a: Fraction(1)}, {b: Fraction(1)}, {c: Fraction(1)}
        if alg.product(alg.product(ea, eb), ec) != alg.product(ea, alg.product(eb, ec)):
            raise StructureError(f"associativity fails on ({space.names[a]}, {space.names[b]}, {space.names[c]})")
        if alg.pairing(alg.product(ea, eb), ec) != alg.pairing(ea, alg.product(eb, ec)):
            raise StructureError(f"invariance fails on ({space.names[a]}, {space.names[b]}, {space.names[c]})")
    return alg


def raised_structure_tensor(alg):
    """c^{ijk} = Σ Ω^{ia} Ω^{jb} Ω^{kc} t_{abc}, t_{abc} = (-1)^{ã_a ã_c + n ã_b} (e_a e_b, e_c).

    Ω is the inverse of the matrix of ω.  Returns {(i, j, k): coeff}.
    """
    form = alg.form
    if not form.is_nondegenerate():
        raise StructureError("raising indices needs a nondegenerate form")
    deg, n, d = alg.space.degrees, form.n, alg.space.dim
    inv = dense_inverse(form.omega())
    t = {}
    for a, b, c in itertools.product(range(d), repeat=3):
        v = alg.pairing(alg.product({a: 1}, {b: 1}), {c: 1})
        if v:
            t[(a, b, c)] = (-1) ** ((deg[a] * deg[c] + n * deg[b]) % 2) * v
    out = {}
    for i, j, k in itertools.product(range(d), repeat=3):
        v = sum((inv[i][a] * inv[j][b] * inv[k][c] * x for (a, b, c), x in t.items()), Fraction(0))
        if v:
            out[(i, j, k)] = v
    return out


# -- JSON -------------------------------------------------------------------

def space_from_json(doc):
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise StructureError("'generators' must be a nonempty list")
    try:
        return make_graded_space((g["name"], g["degree"]) for g in gens)
    except (KeyError, TypeError) as exc:
        raise StructureError("each generator needs 'name' and 'degree'") from exc


def form_from_json(space, doc):
    f = doc.get("form")
    if not isinstance(f, dict) or "degree" not in f:
        raise StructureError("'form' needs 'degree' and 'entries'")
    entries = {}
    try:
        for e in f.get("entries", []):
            i, j, v = e
            entries[(int(i), int(j))] = parse_q(v)
        n = int(f["degree"])
    except (TypeError, ValueError) as exc:
        raise StructureError(f"malformed form entries: {exc}") from exc
    return make_form(space, n, entries)


def algebra_from_json(doc, check=True):
    """Read ``{generators, form, mult}`` into a :class:`FrobeniusAlgebra`.

    With ``check=False`` only shapes, degrees and the form are validated, so a
    corrupted table can still be fed to the master-equation checks.
    """
    space = space_from_json(doc)
    form = form_from_json(space, doc)
    mult = {}
    try:
        for row in doc.get("mult", []):
            i, j, vec = row
            mult[(int(i), int(j))] = {int(k): parse_q(v) for k, v in vec}
    except (TypeError, ValueError) as exc:
        raise StructureError(f"malformed multiplication table: {exc}") from exc
    for (i, j), vec in mult.items():
        if not all(0 <= x < space.dim for x in (i, j, *vec)):
            raise StructureError(f"multiplication entry ({i}, {j}) out of range")
    if check:
        return frobenius_from_table(space, form, mult)
    return FrobeniusAlgebra(space, form, {k: v for k, v in mult.items() if any(v.values())})


def algebra_to_json(alg):
    sp = alg.space
    return {
        "generators": [{"name": n, "degree": d} for n, d in zip(sp.names, sp.degrees)],
        "form": {"degree": alg.form.n,
                 "entries": [[a, b, format_q(v)] for (a, b), v in sorted(alg.form.table.items())]},
        "mult": [[a, b, [[c, format_q(v)] for c, v in sorted(vec.items())]]
                 for (a, b), vec in sorted(alg.mult.items())],
    }


# -- standard examples ------------------------------------------------------

def ground_field():
    """k itself, (1, 1) = 1, form degree 0."""
    sp = make_graded_space([("1", 0)])
    return frobenius_from_table(sp, make_form(sp, 0, {(0, 0): 1}), {(0, 0): {0: 1}})


def dual_numbers(x_degree=3):
    """k[x]/(x²) with (1, x) = 1; the form has degree x̃."""
    sp = make_graded_space([("1", 0), ("x", x_degree)])
    form = make_form(sp, x_degree, {(0, 1): 1})
    return frobenius_from_table(sp, form, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def cyclic_group_algebra(order=2):
    """k[ℤ/order] in degree 0 with the trace form (g^a, g^b) = [a + b ≡ 0]."""
    sp = make_graded_space([(f"g{a}", 0) for a in range(order)])
    form = make_form(sp, 0, {(a, b): 1 for a in range(order) for b in range(order) if (a + b) % order == 0})
    mult = {(a, b): {(a + b) % order: 1} for a in range(order) for b in range(order)}
    return frobenius_from_table(sp, form, mult)


def truncated_polynomial(top, x_degree=0):
    """k[x]/(x^{top+1}) with (x^i, x^j) = [i + j = top]."""
    sp = make_graded_space([(f"x{i}", i * x_degree) for i in range(top + 1)])
    form = make_form(sp, top * x_degree, {(i, top - i): 1 for i in range(top + 1)})
    mult = {(i, j): {i + j: 1} for i in range(top + 1) for j in range(top + 1) if i + j <= top}
    return frobenius_from_table(sp, form, mult)
