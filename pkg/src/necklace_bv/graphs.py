"""Fat graphs, their canonical forms, and the bicomplex C^{k,j}.

A fat graph is stored as flags ``0..n-1``, a tuple of vertex cycles (a vertex
may carry no flags), and a tuple of edges ``(f, g)``.  In colored mode each
edge carries ``"b"`` or ``"w"``; plain graphs are read as all-black.

Orientation.  A chain is a graph together with a generator of the line
𝒪(Γ): an odd marker per vertex, an odd line per white flag, and the
direction of every black edge.  The stored data fixes a standard generator
(vertex markers in vertex order, each followed by its white flags in label
order; black edges directed as stored), so every graph is a signed basis
vector and an isomorphism acts on it by :func:`iso_sign`.

Chain groups.  C^{k,j} is spanned by classes with k vertices, j edges, every
vertex carrying at least one flag (a flagless vertex is the constant
necklace, which is zero in the reduced algebra) and no automorphism acting
by -1 on 𝒪.

Differentials.  ``∂`` contracts a non-loop edge.  ``d`` takes a loop whose two
flags are not adjacent at its vertex, deletes it and splits the vertex into
the two cyclic arcs; this is the vertex split whose bypass closes into a
vertexless circle, which is discarded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import SparseExactMatrix, homology_rank
from .util import parallel_map

MAX_EDGES = 6


class GraphError(ValueError):
    pass


def perm_sign(seq):
    """Sign of the permutation given as a sequence of distinct integers."""
    seen = [False] * len(seq)
    pos = {v: i for i, v in enumerate(sorted(seq))}
    s = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = pos[seq[j]]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


@dataclass(frozen=True)
class FatGraph:
    n_flags: int
    cycles: tuple
    edges: tuple
    colors: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(tuple(c) for c in self.cycles))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.colors is not None:
            object.__setattr__(self, "colors", tuple(self.colors))
        seen = sorted(f for c in self.cycles for f in c)
        if seen != list(range(self.n_flags)):
            raise GraphError("vertex cycles must partition the flags")
        ends = sorted(f for e in self.edges for f in e)
        if ends != list(range(self.n_flags)) or any(len(e) != 2 for e in self.edges):
            raise GraphError("edges must pair up all flags")
        if self.colors is not None:
            if len(self.colors) != len(self.edges) or any(c not in ("b", "w") for c in self.colors):
                raise GraphError("one color 'b' or 'w' per edge")

    @property
    def k(self):
        return len(self.cycles)

    @property
    def j(self):
        return len(self.edges)

    @property
    def euler(self):
        return self.k - self.j

    @property
    def parity(self):
        return (self.k + self.j) % 2

    @property
    def colored(self):
        return self.colors is not None

    def sigma(self):
        nxt = [0] * self.n_flags
        for c in self.cycles:
            for i, f in enumerate(c):
                nxt[f] = c[(i + 1) % len(c)]
        return nxt

    def iota(self):
        out = [0] * self.n_flags
        for a, b in self.edges:
            out[a], out[b] = b, a
        return out

    def vertex_of(self):
        out = [0] * self.n_flags
        for v, c in enumerate(self.cycles):
            for f in c:
                out[f] = v
        return out

    def edge_of(self):
        out = [0] * self.n_flags
        for i, (a, b) in enumerate(self.edges):
            out[a] = out[b] = i
        return out

    def flag_color(self):
        if self.colors is None:
            return [None] * self.n_flags
        out = [None] * self.n_flags
        for (a, b), c in zip(self.edges, self.colors):
            out[a] = out[b] = c
        return out

    def to_json(self):
        d = {"flags": self.n_flags, "vertexCycles": [list(c) for c in self.cycles],
             "edges": [list(e) for e in self.edges], "orientation": list(range(self.j))}
        if self.colors is not None:
            d["colors"] = list(self.colors)
        return d

    @classmethod
    def from_json(cls, d):
        try:
            edges = [tuple(e) for e in d["edges"]]
            colors = d.get("colors")
            order = d.get("orientation", list(range(len(edges))))
            if sorted(order) != list(range(len(edges))):
                raise GraphError("orientation must be an ordering of the edges")
            edges = [edges[i] for i in order]
            if colors is not None:
                colors = [colors[i] for i in order]
            return cls(int(d["flags"]), tuple(tuple(c) for c in d["vertexCycles"]), tuple(edges),
                       None if colors is None else tuple(colors))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph description: {exc}") from exc


def _components(g):
    parent = list(range(g.n_flags))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in g.cycles:
        for f in c[1:]:
            parent[find(f)] = find(c[0])
    for a, b in g.edges:
        parent[find(a)] = find(b)
    comps = {}
    for f in range(g.n_flags):
        comps.setdefault(find(f), []).append(f)
    return list(comps.values())


def _walk(start, sigma, iota, fcol):
    lab = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        f = order[i]
        i += 1
        for h in (sigma[f], iota[f]):
            if h not in lab:
                lab[h] = len(order)
                order.append(h)
    code = tuple((lab[sigma[f]], lab[iota[f]], fcol[f]) for f in order)
    return code, order


def _flag_colors(g):
    """Flag colors, with plain graphs read as all-black."""
    if g.colors is None:
        return ["b"] * g.n_flags
    return g.flag_color()


def odd_symbols(g):
    """Standard order of the odd lines of 𝒪(Γ): per vertex its Π marker, then its white flags."""
    fc = _flag_colors(g)
    out = []
    for v, cyc in enumerate(g.cycles):
        out.append(("v", v))
        out.extend(("f", f) for f in sorted(cyc) if fc[f] == "w")
    return out


def iso_sign(g, h, p, vmap):
    """Sign by which the isomorphism (flag map ``p``, vertex map ``vmap``) g -> h acts on 𝒪.

    Odd symbols are permuted with their Koszul sign; a black edge whose
    stored direction is reversed contributes -1.
    """
    pos = {sym: i for i, sym in enumerate(odd_symbols(h))}
    img = [pos[("v", vmap[x])] if kind == "v" else pos[("f", p[x])] for kind, x in odd_symbols(g)]
    s = perm_sign(img)
    hdir = set(h.edges)
    fc = _flag_colors(g)
    for a, b in g.edges:
        if fc[a] == "b" and (p[a], p[b]) not in hdir:
            s = -s
    return s


def vertex_map(g, h, p):
    """Vertex bijection induced by a flag bijection; flagless vertices are matched in order."""
    vo_h = h.vertex_of()
    vmap = {}
    for v, cyc in enumerate(g.cycles):
        if cyc:
            vmap[v] = vo_h[p[cyc[0]]]
    free_g = [v for v, c in enumerate(g.cycles) if not c]
    free_h = [v for v, c in enumerate(h.cycles) if not c]
    vmap.update(zip(free_g, free_h))
    return vmap


@dataclass(frozen=True)
class CanonicalForm:
    graph: FatGraph          # canonical representative
    sign: int                # input = sign * graph as oriented chains; 0 if the class vanishes
    relabel: tuple           # input flag -> canonical flag
    aut_order: int
    aut_generators: tuple    # flag permutations of the canonical graph
    odd_automorphism: bool   # True iff an automorphism acts by -1 on the orientation line


def canonical_form(g):
    """Canonical representative of ``g`` up to isomorphism, with orientation data."""
    sigma, iota, fcol = g.sigma(), g.iota(), g.flag_color()
    comps = []
    for flags in _components(g):
        best = None
        starts = []
        for s in flags:
            code, order = _walk(s, sigma, iota, fcol)
            if best is None or code < best[0]:
                best = (code, order)
                starts = [order]
            elif code == best[0]:
                starts.append(order)
        comps.append((best[0], best[1], starts))
    comps.sort(key=lambda c: c[0])
    relabel = [0] * g.n_flags
    off = 0
    for code, order, _ in comps:
        for i, f in enumerate(order):
            relabel[f] = off + i
        off += len(order)
    n = g.n_flags
    nsig = [0] * n
    for f in range(n):
        nsig[relabel[f]] = relabel[sigma[f]]
    cycles = []
    seen = [False] * n
    for f in range(n):
        if not seen[f]:
            cyc = [f]
            seen[f] = True
            h = nsig[f]
            while h != f:
                seen[h] = True
                cyc.append(h)
                h = nsig[h]
            cycles.append(tuple(cyc))
    z = sum(1 for c in g.cycles if not c)
    cycles.extend(() for _ in range(z))
    new_edges = sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in g.edges)
    colors = None
    if g.colors is not None:
        eidx = {e: i for i, e in enumerate(new_edges)}
        colors = [None] * len(new_edges)
        for (a, b), c in zip(g.edges, g.colors):
            colors[eidx[tuple(sorted((relabel[a], relabel[b])))]] = c
        colors = tuple(colors)
    canon = FatGraph(n, tuple(cycles), tuple(new_edges), colors)
    sign = iso_sign(g, canon, relabel, vertex_map(g, canon, relabel))

    # automorphisms: per component from equal-code start flags, plus swaps of equal components
    odd = False
    gens = []
    order = 1
    off = 0
    offsets = []
    for code, base, starts in comps:
        offsets.append(off)
        order *= len(starts)
        for other in starts[1:]:
            p = list(range(n))
            for i, f in enumerate(other):
                p[off + i] = relabel[f]
            gens.append(tuple(p))
        off += len(base)
    for code, group in itertools.groupby(range(len(comps)), key=lambda i: comps[i][0]):
        idx = list(group)
        order *= _factorial(len(idx))
        if len(idx) > 1:
            size = len(comps[idx[0]][1])
            p = list(range(n))
            a, b = offsets[idx[0]], offsets[idx[1]]
            for i in range(size):
                p[a + i], p[b + i] = b + i, a + i
            gens.append(tuple(p))
    for p in gens:
        if iso_sign(canon, canon, p, vertex_map(canon, canon, p)) < 0:
            odd = True
    order *= _factorial(z)
    if z > 1:
        # two flagless vertices are exchanged by an automorphism that swaps two odd markers
        odd = True
    return CanonicalForm(canon, 0 if odd else sign, tuple(relabel), order, tuple(gens), odd)


def _factorial(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def graph_key(g):
    return (g.cycles, g.edges, g.colors)


def _compact(cycles, edges, colors):
    used = sorted(f for c in cycles for f in c)
    ren = {f: i for i, f in enumerate(used)}
    cycles = tuple(tuple(ren[f] for f in c) for c in cycles)
    edges = tuple((ren[a], ren[b]) for a, b in edges)
    return FatGraph(len(used), cycles, edges, colors), ren


def _transfer_sign(g, front_g, h, front_h, fmap, vmap):
    """Sign of 𝒪(g) -> 𝒪(h): pull ``front_g`` to the front, replace it by ``front_h``.

    The remaining odd symbols are carried along by ``fmap`` / ``vmap``.
    """
    std_g = odd_symbols(g)
    pos_g = {sym: i for i, sym in enumerate(std_g)}
    taken = set(front_g)
    rest = [sym for sym in std_g if sym not in taken]
    s = perm_sign([pos_g[sym] for sym in front_g] + [pos_g[sym] for sym in rest])
    pos_h = {sym: i for i, sym in enumerate(odd_symbols(h))}
    moved = [("v", vmap[x]) if kind == "v" else ("f", fmap[x]) for kind, x in rest]
    return s * perm_sign([pos_h[sym] for sym in front_h] + [pos_h[sym] for sym in moved])


def contract_edge(g, e):
    """Contract the non-loop edge ``e`` (index into ``g.edges``); returns (graph, sign).

    For e = (a, b) from u to v the merged vertex takes the place of the lower
    of u, v, with cyclic order (flags of u after a) + (flags of v after b).
    On 𝒪 the symbols (m_u, m_v[, a, b]) are pulled to the front and replaced
    by the marker of the merged vertex.
    """
    if not 0 <= e < g.j:
        raise GraphError(f"no edge {e}")
    a, b = g.edges[e]
    vo = g.vertex_of()
    u, v = vo[a], vo[b]
    if u == v:
        raise GraphError("cannot contract a loop")
    cu, cv = g.cycles[u], g.cycles[v]
    iu, iv = cu.index(a), cv.index(b)
    merged = cu[iu + 1:] + cu[:iu] + cv[iv + 1:] + cv[:iv]
    lo, hi = min(u, v), max(u, v)
    cycles = [c for i, c in enumerate(g.cycles) if i not in (u, v)]
    cycles.insert(lo, merged)
    edges = g.edges[:e] + g.edges[e + 1:]
    colors = None if g.colors is None else g.colors[:e] + g.colors[e + 1:]
    h, ren = _compact(cycles, edges, colors)
    vmap = {x: (x if x < hi else x - 1) for x in range(g.k) if x not in (u, v)}
    front = [("v", u), ("v", v)]
    if g.colors is not None and g.colors[e] == "w":
        front += [("f", a), ("f", b)]
    return h, _transfer_sign(g, front, h, [("v", lo)], ren, vmap)


def split_vertex(g, v, f1, f2):
    """Split vertex ``v`` along the non-adjacent flags ``f1``, ``f2``; returns (graph, sign).

    The remaining flags of ``v`` form two cyclic arcs: the arc after ``f1``
    stays at ``v``, the arc after ``f2`` becomes a new last vertex.  The
    pieces of edge through ``f1`` and ``f2`` join into a bypass: when they lie
    on two different edges those are fused into one edge (stored at the lower
    index), when both flags belong to one loop the bypass is a circle without
    vertices and is discarded.  On 𝒪 the symbols (m_v[, f1, f2]) are replaced
    by the two new markers; black edges compose along g1 -> f1 | f2 -> g2.
    """
    cyc = g.cycles[v] if 0 <= v < g.k else ()
    if f1 not in cyc or f2 not in cyc or f1 == f2:
        raise GraphError("flags must be two distinct flags at the vertex")
    i1 = cyc.index(f1)
    rot = cyc[i1:] + cyc[:i1]
    i2 = rot.index(f2)
    arc_a, arc_b = rot[1:i2], rot[i2 + 1:]
    if not arc_a or not arc_b:
        raise GraphError("flags are adjacent")
    fc = _flag_colors(g)
    if fc[f1] != fc[f2]:
        raise GraphError("marked flags must have the same color")
    eo = g.edge_of()
    e1, e2 = eo[f1], eo[f2]
    iota = g.iota()
    g1, g2 = iota[f1], iota[f2]
    edges = list(g.edges)
    colors = None if g.colors is None else list(g.colors)
    if e1 == e2:
        drop = e1
    else:
        drop = max(e1, e2)
        edges[min(e1, e2)] = (g1, g2)
    del edges[drop]
    if colors is not None:
        del colors[drop]
        colors = tuple(colors)
    cycles = list(g.cycles)
    cycles[v] = arc_a
    cycles.append(arc_b)
    h, ren = _compact(cycles, edges, colors)
    white = fc[f1] == "w"
    front_g = [("v", v)] + ([("f", f1), ("f", f2)] if white else [])
    vmap = {x: x for x in range(g.k) if x != v}
    sign = _transfer_sign(g, front_g, h, [("v", v), ("v", g.k)], ren, vmap)
    if not white:
        if e1 == e2:
            if g.edges[e1] != (f1, f2):
                sign = -sign
        else:
            if g.edges[e1] != (g1, f1):
                sign = -sign
            if g.edges[e2] != (f2, g2):
                sign = -sign
    return h, sign


def _nonadjacent_pairs(cyc):
    m = len(cyc)
    for i in range(m):
        for jj in range(i + 2, m):
            if i == 0 and jj == m - 1:
                continue
            yield cyc[i], cyc[jj]


def admissible_splits(g):
    """All (v, f1, f2), f1 < f2 non-adjacent flags of equal color at v (any edges)."""
    fc = _flag_colors(g)
    out = []
    for v, cyc in enumerate(g.cycles):
        for f1, f2 in _nonadjacent_pairs(cyc):
            if fc[f1] == fc[f2]:
                out.append((v, min(f1, f2), max(f1, f2)))
    return out


def loop_splits(g):
    """The splits entering d: both flags on one loop, non-adjacent at its vertex."""
    eo = g.edge_of()
    return [(v, f1, f2) for v, f1, f2 in admissible_splits(g) if eo[f1] == eo[f2]]


# -- enumeration -------------------------------------------------------------

def _partitions(n, k, largest=None):
    if largest is None:
        largest = n
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n - k + 1, largest), 0, -1):
        for rest in _partitions(n - first, k - 1, first):
            yield (first,) + rest


def _matchings(flags):
    if not flags:
        yield ()
        return
    a = flags[0]
    for i in range(1, len(flags)):
        rest = flags[1:i] + flags[i + 1:]
        for m in _matchings(rest):
            yield ((a, flags[i]),) + m


def _check_size(j):
    if j > MAX_EDGES:
        raise GraphError(f"edge count {j} exceeds the supported bound {MAX_EDGES}")


@lru_cache(maxsize=None)
def connected_classes(k, j, colored=False):
    """Canonical connected fat graphs with k >= 1 vertices and j >= 1 edges.

    Returns (live, killed); killed classes admit an automorphism acting by -1
    on 𝒪 and vanish in the complex.
    """
    _check_size(j)
    if k < 1 or j < 1 or k > 2 * j:
        return (), ()
    n = 2 * j
    found = {}
    for part in _partitions(n, k):
        cycles, f = [], 0
        for size in part:
            cycles.append(tuple(range(f, f + size)))
            f += size
        for match in _matchings(tuple(range(n))):
            for cols in (itertools.product("bw", repeat=j) if colored else [None]):
                g = FatGraph(n, tuple(cycles), match, cols)
                if len(_components(g)) != 1:
                    continue
                cf = canonical_form(g)
                found.setdefault(graph_key(cf.graph), cf)
    items = sorted(found.items())
    live = tuple(cf.graph for _, cf in items if not cf.odd_automorphism)
    killed = tuple(cf.graph for _, cf in items if cf.odd_automorphism)
    return live, killed


def _disjoint_union(graphs, z=0, colored=False):
    cycles, edges, colors, off = [], [], [], 0
    for g in graphs:
        cycles.extend(tuple(f + off for f in c) for c in g.cycles)
        edges.extend((a + off, b + off) for a, b in g.edges)
        if colored:
            colors.extend(g.colors)
        off += g.n_flags
    cycles.extend(() for _ in range(z))
    return FatGraph(off, tuple(cycles), tuple(edges), tuple(colors) if colored else None)


def disjoint_union(g, h):
    """Union of two graphs, vertices of ``g`` first (the product of 𝕄_i x 𝕄_j)."""
    if g.colored != h.colored:
        raise GraphError("cannot unite colored and plain graphs")
    return _disjoint_union([g, h], 0, g.colored)


@dataclass(frozen=True)
class ChainBasis:
    k: int
    j: int
    colored: bool
    basis: tuple
    killed: tuple

    def index(self):
        return {graph_key(g): i for i, g in enumerate(self.basis)}


@lru_cache(maxsize=None)
def enumerate_graphs(k, j, colored=False, connected=False):
    """Basis of C^{k,j}: canonical classes with nonvanishing orientation.

    Vertices always carry flags; the only graph with k = 0 is the empty one.
    """
    _check_size(j)
    if k < 0 or j < 0:
        return ChainBasis(k, j, colored, (), ())
    if k == 0 or j == 0:
        empty = (FatGraph(0, (), (), () if colored else None),) if k == j == 0 else ()
        return ChainBasis(k, j, colored, empty, ())
    if connected:
        live, killed = connected_classes(k, j, colored)
        return ChainBasis(k, j, colored, live, killed)
    pieces = []
    for kk in range(1, k + 1):
        for jj in range(1, j + 1):
            live, killed = connected_classes(kk, jj, colored)
            pieces.extend(live + killed)
    found = {}

    def rec(start, kleft, jleft, chosen):
        if kleft == 0 and jleft == 0:
            cf = canonical_form(_disjoint_union(chosen, 0, colored))
            found.setdefault(graph_key(cf.graph), cf)
            return
        for i in range(start, len(pieces)):
            h = pieces[i]
            if h.k <= kleft and h.j <= jleft:
                rec(i, kleft - h.k, jleft - h.j, chosen + [h])

    rec(0, k, j, [])
    items = sorted(found.items())
    live = tuple(cf.graph for _, cf in items if not cf.odd_automorphism)
    killed = tuple(cf.graph for _, cf in items if cf.odd_automorphism)
    return ChainBasis(k, j, colored, live, killed)


# -- matrices ----------------------------------------------------------------

def _fold(out, h, s):
    """Add s * h to the column ``out`` in canonical coordinates (reduced basis)."""
    if any(not c for c in h.cycles):
        return
    cf = canonical_form(h)
    if cf.sign:
        key = graph_key(cf.graph)
        v = out.get(key, 0) + s * cf.sign
        if v:
            out[key] = v
        else:
            del out[key]


def boundary_column(g):
    out = {}
    vo = g.vertex_of()
    for e, (a, b) in enumerate(g.edges):
        if vo[a] != vo[b]:
            _fold(out, *contract_edge(g, e))
    return out


def coboundary_column(g):
    out = {}
    for v, f1, f2 in loop_splits(g):
        _fold(out, *split_vertex(g, v, f1, f2))
    return out


def _assemble(src, dst, columns):
    idx = dst.index()
    m = SparseExactMatrix(len(dst.basis), len(src.basis))
    for c, col in enumerate(columns):
        for key, v in col.items():
            if key not in idx:
                raise GraphError("image graph missing from target basis")
            m.add(idx[key], c, v)
    return m


@lru_cache(maxsize=None)
def boundary_matrix(k, j, colored=False, connected=False):
    """Matrix of ∂ : C^{k,j} -> C^{k-1,j-1}."""
    src = enumerate_graphs(k, j, colored, connected)
    dst = enumerate_graphs(k - 1, j - 1, colored, connected)
    return _assemble(src, dst, parallel_map(boundary_column, src.basis))


@lru_cache(maxsize=None)
def coboundary_matrix(k, j, colored=False, connected=False):
    """Matrix of d : C^{k,j} -> C^{k+1,j-1}."""
    src = enumerate_graphs(k, j, colored, connected)
    dst = enumerate_graphs(k + 1, j - 1, colored, connected)
    return _assemble(src, dst, parallel_map(coboundary_column, src.basis))


def bicomplex_identities(kmax, jmax, colored=False):
    """Check ∂∂ = 0, dd = 0 and d∂ + ∂d = 0 on every block with k <= kmax, j <= jmax.

    Returns (identity, k, j, ok) records; each composite starts at C^{k,j}.
    """
    out = []
    for j in range(0, jmax + 1):
        for k in range(0, kmax + 1):
            b1 = boundary_matrix(k, j, colored)
            d1 = coboundary_matrix(k, j, colored)
            out.append(("boundary^2", k, j, (boundary_matrix(k - 1, j - 1, colored) @ b1).is_zero()))
            out.append(("coboundary^2", k, j, (coboundary_matrix(k + 1, j - 1, colored) @ d1).is_zero()))
            anti = coboundary_matrix(k - 1, j - 1, colored) @ b1 + boundary_matrix(k + 1, j - 1, colored) @ d1
            out.append(("anticommutator", k, j, anti.is_zero()))
    return out


# -- diagonal complexes ------------------------------------------------------

def diagonal_differential(parity, j, alpha, colored=False):
    """δ_α = d + α∂ from C^j_parity to C^{j-1}_parity (both arrows keep k + j mod 2)."""
    alpha = Fraction(alpha)
    src_ks = [k for k in range(0, 2 * j + 1) if (k + j) % 2 == parity]
    dst_ks = [k for k in range(0, 2 * max(j - 1, 0) + 1) if (k + j - 1) % 2 == parity] if j >= 1 else []
    src_off, dst_off = {}, {}
    ncols = nrows = 0
    for k in src_ks:
        src_off[k] = ncols
        ncols += len(enumerate_graphs(k, j, colored).basis)
    for k in dst_ks:
        dst_off[k] = nrows
        nrows += len(enumerate_graphs(k, j - 1, colored).basis)
    m = SparseExactMatrix(nrows, ncols)
    if j == 0:
        return m
    for k in src_ks:
        if k - 1 in dst_off:
            for (r, c), v in boundary_matrix(k, j, colored).entries.items():
                m.add(dst_off[k - 1] + r, src_off[k] + c, alpha * v)
        if k + 1 in dst_off:
            for (r, c), v in coboundary_matrix(k, j, colored).entries.items():
                m.add(dst_off[k + 1] + r, src_off[k] + c, v)
    return m


def diagonal_homology(parity, jmax, alpha=1, colored=False):
    """Homology ranks of the diagonal complex C_parity under δ_α for degrees j <= jmax.

    Each C^j is finite (a vertex carries a flag, so k <= 2j).  The top degree
    lacks the incoming differential from C^{jmax+1} and is flagged truncated:
    its value is an upper bound.
    """
    rows = []
    if jmax >= 0:
        mats = parallel_map(lambda j: diagonal_differential(parity, j, alpha, colored), range(0, jmax + 1))
        for j in range(0, jmax + 1):
            d_out = mats[j]
            d_in = mats[j + 1] if j < jmax else SparseExactMatrix(d_out.cols, 0)
            rows.append({"degree": j, "dim": d_out.cols, "rank": homology_rank(d_in, d_out),
                         "truncated": j == jmax})
    return {"parity": parity, "alpha": str(Fraction(alpha)), "colored": colored, "ranks": rows}


def diagonal_homology_closed(parity, jmax, alpha=1, colored=False):
    """Like :func:`diagonal_homology` but uses C^{jmax+1} so every degree <= jmax is exact."""
    if jmax + 1 > MAX_EDGES:
        raise GraphError("window exceeds the supported edge bound")
    mats = [diagonal_differential(parity, j, alpha, colored) for j in range(0, jmax + 2)]
    rows = []
    for j in range(0, jmax + 1):
        rows.append({"degree": j, "dim": mats[j].cols, "rank": homology_rank(mats[j + 1], mats[j]),
                     "truncated": False})
    return {"parity": parity, "alpha": str(Fraction(alpha)), "colored": colored, "ranks": rows}


def parity_homology(table0, table1):
    """H^even / H^odd assembled from the two diagonal tables by the direct-sum rule."""
    even = odd = 0
    for r in table0["ranks"]:
        if r["degree"] % 2 == 0:
            even += r["rank"]
        else:
            odd += r["rank"]
    for r in table1["ranks"]:
        if r["degree"] % 2 == 1:
            even += r["rank"]
        else:
            odd += r["rank"]
    truncated = any(r["truncated"] for r in table0["ranks"] + table1["ranks"])
    return {"even": even, "odd": odd, "truncated": truncated}


# -- local system ------------------------------------------------------------

@dataclass(frozen=True)
class LocalSystemValue:
    parity: int          # parity of 𝒪(Γ): white flags plus one Π per vertex
    white_parity: int    # parity of the white-flag factors alone
    black_edges: int
    white_flags: int
    vertices: int


def local_system(g):
    """The line 𝒪(Γ): even line per black edge, Π(⊗ odd white-flag lines) per vertex."""
    if g.colors is None:
        raise GraphError("local system needs a colored graph")
    white = 2 * sum(1 for c in g.colors if c == "w")   # two flags per white edge
    return LocalSystemValue((white + g.k) % 2, white % 2, sum(1 for c in g.colors if c == "b"), white, g.k)


def local_system_sign(g, p):
    """Action of the flag automorphism ``p`` of ``g`` on 𝒪(Γ)."""
    if g.colors is None:
        raise GraphError("local system needs a colored graph")
    sig, io, fc = g.sigma(), g.iota(), g.flag_color()
    for f in range(g.n_flags):
        if p[sig[f]] != sig[p[f]] or p[io[f]] != io[p[f]] or fc[p[f]] != fc[f]:
            raise GraphError("not a color-preserving automorphism")
    return iso_sign(g, g, p, vertex_map(g, g, p))


def automorphisms(g):
    """All color-preserving flag automorphisms of ``g`` (product over components)."""
    sigma, iota, fcol = g.sigma(), g.iota(), g.flag_color()
    per = []
    for flags in _components(g):
        code0, order0 = _walk(flags[0], sigma, iota, fcol)
        maps = []
        for s in flags:
            code, order = _walk(s, sigma, iota, fcol)
            if code == code0:
                maps.append(dict(zip(order0, order)))
        per.append(maps)
    out = []
    for combo in itertools.product(*per):
        p = list(range(g.n_flags))
        for m in combo:
            for a, b in m.items():
                p[a] = b
        out.append(tuple(p))
    return out
