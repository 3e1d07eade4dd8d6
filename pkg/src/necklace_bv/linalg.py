"""Exact sparse linear algebra over the rationals.

Matrices are stored as coordinate maps ``(row, col) -> Fraction`` with no
explicit zeros.  Rank is computed by fraction-free integer elimination on
sparse rows, choosing pivots by a Markowitz-style cost to limit fill-in.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .rationals import format_q, parse_q


class CompositionError(ValueError):
    """Raised when a pair of maps handed to :func:`homology_rank` does not compose to zero."""

    def __init__(self, message, column):
        super().__init__(message)
        self.column = column


class SparseExactMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                self.add(r, c, v)

    def add(self, r, c, v):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
        v = Fraction(v)
        if not v:
            return
        key = (r, c)
        w = self.entries.get(key, 0) + v
        if w:
            self.entries[key] = w
        else:
            del self.entries[key]

    @classmethod
    def from_dense(cls, rows):
        m = len(rows)
        n = len(rows[0]) if m else 0
        out = cls(m, n)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                out.add(i, j, v)
        return out

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def nnz(self):
        return len(self.entries)

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self):
        return SparseExactMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def is_zero(self):
        return not self.entries

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                s = out.get(key, 0) + v * w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SparseExactMatrix(self.rows, other.cols, out)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        out = SparseExactMatrix(self.rows, self.cols, self.entries)
        for k, v in other.entries.items():
            out.add(*k, v)
        return out

    def scale(self, s):
        s = Fraction(s)
        if not s:
            return SparseExactMatrix(self.rows, self.cols)
        return SparseExactMatrix(self.rows, self.cols, {k: v * s for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseExactMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"SparseExactMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # text exchange: header "rows cols nnz", then "row col p/q" per line
    def to_triplets(self):
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {format_q(self.entries[(r, c)])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text):
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 3:
            raise ValueError("missing 'rows cols nnz' header")
        rows, cols, nnz = (int(x) for x in lines[0])
        body = lines[1:]
        if len(body) != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(body)}")
        out = cls(rows, cols)
        for parts in body:
            if len(parts) != 3:
                raise ValueError(f"bad triplet line: {' '.join(parts)}")
            out.add(int(parts[0]), int(parts[1]), parse_q(parts[2]))
        return out


def _integer_rows(m):
    rows = {}
    for (r, c), v in m.entries.items():
        rows.setdefault(r, {})[c] = v
    out = []
    for row in rows.values():
        den = 1
        for v in row.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append({c: int(v * den) for c, v in row.items()})
    return out


def _primitive(row):
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


def rank(m):
    """Exact rank of a :class:`SparseExactMatrix`."""
    if not m.entries:
        return 0
    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.transpose()
    active = [_primitive(r) for r in _integer_rows(m)]
    r = 0
    while active:
        col_count = {}
        for row in active:
            for c in row:
                col_count[c] = col_count.get(c, 0) + 1
        best = None
        for i, row in enumerate(active):
            lr = len(row) - 1
            for c, v in row.items():
                cost = (lr * (col_count[c] - 1), abs(v), c, i)
                if best is None or cost < best[0]:
                    best = (cost, i, c)
        _, pi, pc = best
        prow = active.pop(pi)
        pv = prow[pc]
        r += 1
        nxt = []
        for row in active:
            a = row.get(pc)
            if a is None:
                nxt.append(row)
                continue
            # fraction-free update: pv*row - a*prow, then strip content
            new = {c: pv * v for c, v in row.items()}
            for c, v in prow.items():
                w = new.get(c, 0) - a * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            if new:
                nxt.append(_primitive(new))
        active = nxt
    return r


def rref(m):
    """Reduced row echelon form over Fraction; returns (rows, pivot_columns)."""
    rows = [dict(r) for r in _rows_as_dicts(m)]
    pivots = []
    out = []
    for c in range(m.cols):
        piv = None
        for i, row in enumerate(rows):
            if row.get(c):
                piv = i
                break
        if piv is None:
            continue
        prow = rows.pop(piv)
        inv = 1 / prow[c]
        prow = {k: v * inv for k, v in prow.items()}
        for row in rows + out:
            a = row.get(c)
            if a:
                for k, v in prow.items():
                    w = row.get(k, 0) - a * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        out.append(prow)
        pivots.append(c)
    return out, pivots


def _rows_as_dicts(m):
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    return [r for r in rows if r]


def kernel_basis(m):
    """Basis of the right kernel, each vector a dict col -> Fraction."""
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        vec = {free: Fraction(1)}
        for row, p in zip(red, pivots):
            a = row.get(free)
            if a:
                vec[p] = -a
        basis.append(vec)
    return basis


def in_column_span(m, vec):
    """True if the column vector ``vec`` (dict row -> value) lies in the column space of ``m``."""
    aug = SparseExactMatrix(m.rows, m.cols + 1, m.entries)
    for r, v in vec.items():
        aug.add(r, m.cols, v)
    return rank(aug) == rank(m)


def homology_rank(d_in, d_out):
    """dim B - rank(d_in) - rank(d_out) for A --d_in--> B --d_out--> C.

    ``d_in`` is dim B x dim A and ``d_out`` is dim C x dim B.  The composite
    must vanish; otherwise :class:`CompositionError` names a witness column of
    ``d_in``.
    """
    if d_in.rows != d_out.cols:
        raise ValueError(f"middle dimensions differ: {d_in.rows} vs {d_out.cols}")
    prod = d_out @ d_in
    if prod.entries:
        col = min(c for (_, c) in prod.entries)
        raise CompositionError(f"d_out . d_in != 0 (first nonzero column {col})", col)
    h = d_in.rows - rank(d_in) - rank(d_out)
    assert h >= 0
    return h


def dense_inverse(rows):
    """Inverse of a square list-of-lists matrix over Fraction; raises ValueError if singular."""
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]
