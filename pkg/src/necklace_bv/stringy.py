"""Stringy categories: hom blocks, the block pairing, R(α), and ⊕-additivity.

The total space ⊕ Hom(L1, L2) is one graded space whose generators carry a
source and a target object; R(α) is a series in α with coefficients in
Λ(𝒜/k) of that space.  A cyclic word is composable when each letter ends
where the next begins, cyclically.

For an object S = K ⊕ L every generator of a hom space touching S names its
``image`` (a generator between summands) and, at each end sitting on S, the
index of the summand it factors through (``src_part`` / ``dst_part``).  The
composition rule R(.., K ⊕ L, ..) = R(.., K, ..) ⊕ R(.., L, ..) then says
that R on words through S is the lift of R on words through K and L, with no
cross terms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import StructureError, make_form, make_graded_space, raised_structure_tensor
from .master import check_master_full
from .necklace import Necklaces
from .rationals import format_q, parse_q
from .util import acc
from .wedge import Lambda, NecklaceBialgebra, Series, series_delta_alpha


@dataclass
class Generator:
    name: str
    src: str
    dst: str
    degree: int
    image: str | None = None
    src_part: int | None = None
    dst_part: int | None = None


@dataclass
class StringyCategory:
    objects: tuple
    generators: list
    n: int
    pairing: dict                      # (name, name) -> Fraction, as given
    sums: dict = field(default_factory=dict)   # S -> (K, L)
    form: object = None
    lam: Lambda = None
    R: Series = None

    def index(self, name):
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise StructureError(f"unknown generator {name!r}")

    def gen(self, i):
        return self.generators[i]

    def atomic(self, i):
        g = self.generators[i]
        return all(o not in self.sums for o in (g.src, g.dst))

    def word_objects(self, w):
        return tuple(self.generators[x].src for x in w)


def composable(cat, word):
    """Consecutive letters chain src -> dst cyclically (the empty word is composable)."""
    gs = [cat.gen(x) for x in word]
    return all(gs[i].dst == gs[(i + 1) % len(gs)].src for i in range(len(gs)))


def _same_summand(cat, word):
    """At every sum object on the cycle, both neighbours factor through the same summand."""
    gs = [cat.gen(x) for x in word]
    for i in range(len(gs)):
        a, b = gs[i], gs[(i + 1) % len(gs)]
        if a.dst != b.src or (a.dst in cat.sums and a.dst_part != b.src_part):
            return False
    return True


def composability_filter(cat, word):
    return composable(cat, tuple(word))


def build_category(objects, homs, n, pairing, sums=None):
    """Assemble the total space and the block pairing.

    ``homs``: [(src, dst, [(name, degree[, image, src_part, dst_part]), ...])]; ``pairing``:
    {(name, name): value} on Hom(L1, L2) x Hom(L2, L1) only.  Pairings of
    generators through a sum object are induced from their images when absent.
    """
    objects = tuple(objects)
    sums = dict(sums or {})
    for s, parts in sums.items():
        if s not in objects or any(p not in objects for p in parts):
            raise StructureError(f"sum object {s} refers to unknown objects")
    gens = []
    for src, dst, glist in homs:
        if src not in objects or dst not in objects:
            raise StructureError(f"hom space ({src}, {dst}) uses an unknown object")
        for g in glist:
            name, deg = g[0], int(g[1])
            extra = list(g[2:]) + [None] * (5 - len(g))
            gens.append(Generator(str(name), src, dst, deg, *extra[:3]))
    cat = StringyCategory(objects, gens, int(n), {}, sums)
    entries = {}
    for (a, b), v in dict(pairing).items():
        i, j = cat.index(a), cat.index(b)
        ga, gb = gens[i], gens[j]
        if (ga.src, ga.dst) != (gb.dst, gb.src):
            raise StructureError(f"pairing between {a} and {b} couples non-opposite hom blocks")
        entries[(i, j)] = parse_q(v)
    if sums:
        _check_images(cat)
        for i, ga in enumerate(gens):
            for j, gb in enumerate(gens):
                if (i, j) in entries or (j, i) in entries or cat.atomic(i) and cat.atomic(j):
                    continue
                if (ga.src, ga.dst) != (gb.dst, gb.src):
                    continue
                if (ga.src_part, ga.dst_part) != (gb.dst_part, gb.src_part):
                    continue
                ia, ib = cat.index(_image(cat, ga)), cat.index(_image(cat, gb))
                ha, hb = gens[ia], gens[ib]
                if (ha.src, ha.dst) != (hb.dst, hb.src):
                    continue
                v = entries.get((ia, ib))
                if v is None and (ib, ia) in entries:
                    v = entries[(ib, ia)] * (-1) ** ((ha.degree * hb.degree) % 2)
                if v:
                    entries[(i, j)] = v
    cat.pairing = entries
    space = make_graded_space((g.name, g.degree) for g in gens)
    cat.form = make_form(space, cat.n, entries)
    cat.lam = Lambda(NecklaceBialgebra(Necklaces(cat.form), reduced=True))
    cat.R = Series({}, cat.lam)
    return cat


def _image(cat, g):
    return g.image if g.image is not None else g.name


def _check_images(cat):
    """Every generator touching a sum object maps to a generator between summands."""
    for g in cat.generators:
        if g.src not in cat.sums and g.dst not in cat.sums:
            if g.image not in (None, g.name):
                raise StructureError(f"atomic generator {g.name} must not carry an image")
            continue
        if g.image is None:
            raise StructureError(f"generator {g.name} through a sum object needs an image")
        h = cat.generators[cat.index(g.image)]
        src_ok = h.src == g.src if g.src not in cat.sums else _part(cat, g.src, g.src_part) == h.src
        dst_ok = h.dst == g.dst if g.dst not in cat.sums else _part(cat, g.dst, g.dst_part) == h.dst
        if not (src_ok and dst_ok) or h.degree != g.degree:
            raise StructureError(f"image of {g.name} is not in the matching summand hom space")
        if h.src in cat.sums or h.dst in cat.sums:
            raise StructureError("images must be atomic generators")


def _part(cat, s, i):
    parts = cat.sums[s]
    return parts[i] if isinstance(i, int) and 0 <= i < len(parts) else None


def set_R(cat, by_order):
    """R(α) from {α-power: {(word, word, ...): coeff}} with words as generator-name tuples."""
    lam = cat.lam
    coeffs = {}
    for k, terms in by_order.items():
        t = {}
        for factors, c in terms.items():
            t[tuple(tuple(cat.index(x) for x in w) for w in factors)] = c
        coeffs[int(k)] = lam.element(t)
    cat.R = Series(coeffs, lam)
    return cat


def noncomposable_support(cat):
    bad = []
    for k, X in cat.R.coeffs.items():
        for m in X.terms:
            for w in m:
                if not composable(cat, w):
                    bad.append({"order": k, "word": [cat.gen(x).name for x in w]})
    return bad


def _block_key(cat, m):
    return "|".join(",".join(cat.word_objects(w)) for w in m)


def validate_stringy(cat, gmax):
    """δ_α R = ½{R, R} up to α^gmax on the total space, with residuals keyed by object blocks."""
    bad = noncomposable_support(cat)
    if bad:
        return {"check": "stringy", "status": "error", "noncomposable": bad}
    report = check_master_full(cat.R, gmax)
    res = (series_delta_alpha(cat.R) - cat.R.bracket(cat.R, gmax).scale(Fraction(1, 2))).truncate(gmax)
    blocks = {}
    for k, X in res.coeffs.items():
        for m, c in X.terms.items():
            key = f"{k}:{_block_key(cat, m)}"
            blocks.setdefault(key, []).append({"factors": [[cat.gen(x).name for x in w] for w in m],
                                               "coeff": format_q(c)})
    report["check"] = "stringy"
    report["block_residuals"] = {k: blocks[k] for k in sorted(blocks)}
    return report


# -- one-object and ⊕ constructions ------------------------------------------------

def category_from_frobenius(alg, obj="L"):
    """One object whose endomorphisms are the Frobenius algebra; R = raised structure tensor."""
    sp = alg.space
    homs = [(obj, obj, [(sp.names[i], sp.degrees[i]) for i in range(sp.dim)])]
    pairing = {(sp.names[a], sp.names[b]): v for (a, b), v in alg.form.table.items()}
    cat = build_category([obj], homs, alg.form.n, pairing)
    c = raised_structure_tensor(alg)
    cat.R = Series({0: cat.lam.element({((i, j, k),): v for (i, j, k), v in c.items()})}, cat.lam)
    return cat


def _lifts_of_word(cat, w, lifts):
    """All composable letterwise lifts of an atomic word (letters replaced by generators with that image)."""
    pools = [lifts[x] for x in w]
    for choice in itertools.product(*pools):
        if _same_summand(cat, choice):
            yield choice


def distribute(cat, X):
    """Extend a Λ element on atomic letters by the ⊕ rule (all composable lifts)."""
    lam = cat.lam
    lifts = {}
    for i, g in enumerate(cat.generators):
        lifts.setdefault(cat.index(_image(cat, g)), []).append(i)
    out = {}
    for m, c in X.terms.items():
        per_factor = [list(_lifts_of_word(cat, w, lifts)) for w in m]
        for combo in itertools.product(*per_factor):
            canon = []
            sign = 1
            for w in combo:
                cw, s = lam.g.neck.canon(w)
                if cw is None:
                    break
                canon.append(cw)
                sign *= s
            else:
                nm, s2 = lam.normalize(canon)
                if nm is not None:
                    acc(out, nm, sign * s2 * c)
    return lam.element(out)


def direct_sum_extension(base, s_name, parts):
    """Add S = parts[0] ⊕ parts[1] to a category and extend R by distribution."""
    objects = list(base.objects) + [s_name]
    sums = dict(base.sums)
    sums[s_name] = tuple(parts)
    homs = {}
    for g in base.generators:
        homs.setdefault((g.src, g.dst), []).append((g.name, g.degree))

    def ends(o):
        return [(o, None)] + [(s_name, i) for i, p in enumerate(parts) if p == o]

    for g in base.generators:
        for src, sp in ends(g.src):
            for dst, dp in ends(g.dst):
                if sp is None and dp is None:
                    continue
                tag = f"{'' if sp is None else sp}>{'' if dp is None else dp}"
                homs.setdefault((src, dst), []).append((f"{g.name}@{tag}", g.degree, g.name, sp, dp))
    pairing = {(base.gen(i).name, base.gen(j).name): v for (i, j), v in base.pairing.items()}
    cat = build_category(objects, [(a, b, gl) for (a, b), gl in homs.items()], base.n, pairing, sums)
    lam = cat.lam
    coeffs = {}
    for k, X in base.R.coeffs.items():
        moved = lam.element({tuple(tuple(cat.index(base.gen(x).name) for x in w) for w in m): c
                             for m, c in X.terms.items()})
        coeffs[k] = distribute(cat, moved)
    cat.R = Series(coeffs, lam)
    return cat


def additivity_check(cat):
    """Hom decompositions and the ⊕ rule for R (no cross terms; lifts match the atomic part)."""
    if not cat.sums:
        return {"check": "additivity", "status": "error", "failures": [{"kind": "no ⊕ data"}]}
    failures = []
    # hom decomposition: Hom(X, Y) through S ≅ ⊕ of summand hom spaces, via images
    for s, parts in sorted(cat.sums.items()):
        for o in cat.objects:
            for src, dst in {(s, o), (o, s)}:
                here = sorted((g.src_part, g.dst_part, _image(cat, g)) for g in cat.generators
                              if (g.src, g.dst) == (src, dst))
                expect = []
                src_opts = list(enumerate(cat.sums[src])) if src in cat.sums else [(None, src)]
                dst_opts = list(enumerate(cat.sums[dst])) if dst in cat.sums else [(None, dst)]
                for i, a in src_opts:
                    for j, b in dst_opts:
                        expect += [(i, j, g.name) for g in cat.generators
                                   if (g.src, g.dst) == (a, b) and cat.atomic(cat.index(g.name))]
                if here != sorted(expect):
                    failures.append({"kind": "hom-decomposition", "hom": [src, dst]})
    lam = cat.lam
    for k, X in cat.R.coeffs.items():
        atomic = lam.element({m: c for m, c in X.terms.items()
                              if all(cat.atomic(x) for w in m for x in w)})
        for m in X.terms:
            for w in m:
                if not _same_summand(cat, w):
                    failures.append({"kind": "cross-term", "order": k,
                                     "word": [cat.gen(x).name for x in w]})
        if distribute(cat, atomic) != X:
            failures.append({"kind": "distribution", "order": k})
    return {"check": "additivity", "status": "pass" if not failures else "fail", "failures": failures}


# -- JSON --------------------------------------------------------------------------

def category_from_json(doc):
    try:
        objects = doc["objects"]
        homs = [(h["src"], h["dst"], [(g["name"], g["degree"], g.get("image"),
                                       g.get("srcPart"), g.get("dstPart")) for g in h["generators"]])
                for h in doc["homs"]]
        pair = doc["pairing"]
        n = pair["degree"]
        entries = {(a, b): v for a, b, v in pair.get("entries", [])}
        sums = {s["object"]: tuple(s["parts"]) for s in doc.get("sums", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed category description: {exc}") from exc
    cat = build_category(objects, homs, n, entries, sums)
    by_order = {}
    for block in doc.get("R", []):
        terms = {}
        for t in block["terms"]:
            key = tuple(tuple(w) for w in t["factors"])
            terms[key] = terms.get(key, 0) + parse_q(t["coeff"])
        by_order[int(block.get("alphaPower", 0))] = terms
    return set_R(cat, by_order)


def category_to_json(cat):
    homs = {}
    for g in cat.generators:
        entry = {"name": g.name, "degree": g.degree}
        if g.image is not None:
            entry["image"] = g.image
        if g.src_part is not None:
            entry["srcPart"] = g.src_part
        if g.dst_part is not None:
            entry["dstPart"] = g.dst_part
        homs.setdefault((g.src, g.dst), []).append(entry)
    R = []
    for k in cat.R.orders():
        X = cat.R[k]
        R.append({"alphaPower": k, "terms": [
            {"factors": [[cat.gen(x).name for x in w] for w in m], "coeff": format_q(c)}
            for m, c in sorted(X.terms.items())]})
    return {
        "objects": list(cat.objects),
        "homs": [{"src": a, "dst": b, "generators": gl} for (a, b), gl in homs.items()],
        "pairing": {"degree": cat.n, "entries": [[cat.gen(i).name, cat.gen(j).name, format_q(v)]
                                                 for (i, j), v in sorted(cat.pairing.items())]},
        "sums": [{"object": s, "parts": list(p)} for s, p in sorted(cat.sums.items())],
        "R": R,
    }
