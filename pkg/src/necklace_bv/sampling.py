"""Seeded random inputs for the property suites."""


from .graded import StructureError, make_form, make_graded_space
from .necklace import NecklaceElement, Necklaces
from .wedge import Lambda, NecklaceBialgebra


def random_form(rng, max_dim=4, max_n=3):
    """Random graded space (dim ≤ max_dim) with a random graded-symmetric form of degree n."""
    while True:
        n = rng.randint(0, max_n)
        d = rng.randint(1, max_dim)
        degs = [rng.randint(0, n) for _ in range(d)]
        space = make_graded_space((f"e{i}", a) for i, a in enumerate(degs))
        entries = {}
        for u in range(d):
            for v in range(u, d):
                if degs[u] + degs[v] != n:
                    continue
                if u == v and degs[u] % 2:
                    continue
                x = rng.randint(-2, 2)
                if x:
                    entries[(u, v)] = x
        if not entries:
            continue
        try:
            return make_form(space, n, entries)
        except StructureError:
            continue


def random_words(rng, neck, max_len, count, min_len=0):
    out = {}
    for _ in range(count):
        m = rng.randint(min_len, max_len)
        w = tuple(rng.randrange(neck.dim) for _ in range(m))
        out[w] = out.get(w, 0) + (rng.randint(-3, 3) or 1)
    return NecklaceElement(neck, out)


def random_homogeneous(rng, neck, max_len, count=3, min_len=0):
    """Nonzero element of a single Lie parity (retrying until one appears)."""
    for _ in range(200):
        el = random_words(rng, neck, max_len, count, min_len)
        parts = [p for p in el.split_parity() if p]
        if parts:
            return rng.choice(parts)
    raise RuntimeError("could not sample a nonzero necklace element")


def random_wedge(rng, lam, max_len=4, max_factors=3, count=2):
    """Random element of Λ(𝒜/k): ``count`` monomials of ≤ max_factors nonconstant words."""
    neck = lam.g.neck
    terms = {}
    for _ in range(count):
        k = rng.randint(0, max_factors)
        factors = []
        for _ in range(k):
            m = rng.randint(1, max_len)
            w, s = neck.canon(tuple(rng.randrange(neck.dim) for _ in range(m)))
            if w is None:
                break
            factors.append(w)
        else:
            terms[tuple(factors)] = terms.get(tuple(factors), 0) + (rng.randint(-3, 3) or 1)
    return lam.element(terms)


def random_wedge_homogeneous(rng, lam, parity=None, **kw):
    for _ in range(200):
        el = random_wedge(rng, lam, **kw)
        parts = el.split_parity()
        if parity is not None:
            if parts[parity]:
                return parts[parity]
            continue
        parts = [p for p in parts if p]
        if parts:
            return rng.choice(parts)
    raise RuntimeError("could not sample a homogeneous wedge element")


def random_lambda(rng, max_dim=3, max_n=3):
    return Lambda(NecklaceBialgebra(Necklaces(random_form(rng, max_dim, max_n)), reduced=True))
