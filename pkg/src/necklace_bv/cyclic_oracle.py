"""Cyclic cohomology of a small graded algebra straight from the Connes complex.

Independent of the necklace code: cochains are functionals on basis tuples,
C^q_λ is the kernel of 1 - t, and b is the Hochschild coboundary

  (bf)(a_0..a_{q+1}) = Σ_{i=0}^{q} (-1)^i f(.., a_i a_{i+1}, ..)
                       + (-1)^{q+1 + |a_{q+1}|(|a_0|+..+|a_q|)} f(a_{q+1} a_0, a_1, .., a_q)
  (tf)(a_0..a_q)     = (-1)^{q + |a_q|(|a_0|+..+|a_{q-1}|)} f(a_q, a_0, .., a_{q-1}).
"""

import itertools

from .linalg import SparseExactMatrix, kernel_basis, rank


def _tuples(d, q):
    return list(itertools.product(range(d), repeat=q + 1))


def _cyclic_basis(alg, q):
    deg, d = alg.space.degrees, alg.space.dim
    tup = _tuples(d, q)
    idx = {t: i for i, t in enumerate(tup)}
    # (1 - t) as a matrix on coefficient vectors f[tuple]
    m = SparseExactMatrix(len(tup), len(tup))
    for t in tup:
        r = idx[t]
        m.add(r, r, 1)
        s = q + deg[t[-1]] * sum(deg[x] for x in t[:-1])
        m.add(r, idx[(t[-1],) + t[:-1]], -(-1) ** (s % 2))
    return tup, kernel_basis(m)


def _coboundary(alg, q, f, tup_next):
    """b applied to f (dict tuple -> coeff on q+1 slots); returns a vector over tup_next."""
    deg = alg.space.degrees
    out = {}
    for i, t in enumerate(tup_next):
        v = 0
        for k in range(q + 1):
            for c, x in alg.mult.get((t[k], t[k + 1]), {}).items():
                v += (-1) ** k * x * f.get(t[:k] + (c,) + t[k + 2:], 0)
        s = q + 1 + deg[t[-1]] * sum(deg[x] for x in t[:-1])
        for c, x in alg.mult.get((t[-1], t[0]), {}).items():
            v += (-1) ** (s % 2) * x * f.get((c,) + t[1:-1], 0)
        if v:
            out[i] = v
    return out


def _b_matrix(alg, q):
    """Matrix of b on a basis of C^q_λ, landing in all (q+2)-slot cochains; plus dim C^q_λ."""
    tup, basis = _cyclic_basis(alg, q)
    tup_next = _tuples(alg.space.dim, q + 1)
    m = SparseExactMatrix(len(tup_next), len(basis))
    for col, vec in enumerate(basis):
        f = {tup[i]: v for i, v in vec.items()}
        for r, v in _coboundary(alg, q, f, tup_next).items():
            m.add(r, col, v)
    return m, len(basis)


def cyclic_cohomology(alg, qmax):
    """dim HC^q(A) for q = 0..qmax."""
    mats = [_b_matrix(alg, q) for q in range(qmax + 1)]
    out = []
    for q in range(qmax + 1):
        m, dim = mats[q]
        rin = rank(mats[q - 1][0]) if q > 0 else 0
        out.append(dim - rank(m) - rin)
    return out
