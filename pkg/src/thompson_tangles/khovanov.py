"""Khovanov complexes of tangles over Z/2, computed on closures.

A (2m, 2n)-tangle T gives the bimodule complex F(T) = sum over crossingless
matchings b (top) and c (bottom) of the cube of resolutions of the closed
diagram b-bar T c.  A generator is ``Gen(b, c, v, xs)``: the matchings, the
set ``v`` of crossings resolved by their 1-smoothing, and the set ``xs`` of
circles labelled X (the rest are labelled 1).

Circles are named by anchors rather than by arc labels, so that a generator
means the same thing for any two PD codes of the same picture.  An anchor is
a crossing slot ``("X", crossing, slot)``, a boundary point ``("T", i)`` or
``("B", j)``, or ``("O", i)`` for a free loop; a circle's key is its least
anchor.

Vectors are Python sets of generators (addition is symmetric difference).
Smoothing 0 joins slots a-b and c-d of a crossing (a, b, c, d); smoothing 1
joins a-d and b-c.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from . import gf2
from .tangle import Tangle, _UF, vert

MAX_CROSSINGS = 12
MAX_ARC_N = 4


class ResourceGuard(RuntimeError):
    pass


class Gen(NamedTuple):
    b: tuple           # top matching
    c: tuple           # bottom matching
    v: frozenset       # crossings with the 1-smoothing
    xs: frozenset      # keys of circles labelled X

    def __repr__(self):
        return f"Gen({list(self.b)}, {list(self.c)}, {sorted(map(str, self.v))}, {sorted(self.xs)})"


def add(vec: set, other) -> set:
    vec ^= set(other) if not isinstance(other, set) else other
    return vec


# -- crossingless matchings ----------------------------------------------------

@lru_cache(maxsize=None)
def matchings(points: int) -> tuple:
    """All crossingless matchings of ``points`` boundary points, as pair tuples."""
    if points % 2:
        raise ValueError("odd number of points")

    def build(lo, hi):
        if lo >= hi:
            return [()]
        out = []
        for j in range(lo + 1, hi, 2):
            for inner in build(lo + 1, j):
                for outer in build(j + 1, hi):
                    out.append(((lo, j),) + inner + outer)
        return out

    return tuple(tuple(sorted(m)) for m in build(0, points))


# -- TQFT on circles -----------------------------------------------------------

def tqft_saddle(src: list, src_x: set, tgt: list) -> list:
    """Saddle between two closed 1-manifolds given by circle label sets.

    ``src`` and ``tgt`` are lists of frozensets over one label space;
    ``src_x`` holds the indices of source circles labelled X.  Returns the
    output terms, each a frozenset of target indices labelled X.
    """
    where = {c: i for i, c in enumerate(tgt)}
    fixed_x = set()
    changed_src = []
    matched = set()
    for i, c in enumerate(src):
        j = where.get(c)
        if j is None:
            changed_src.append(i)
        else:
            matched.add(j)
            if i in src_x:
                fixed_x.add(j)
    changed_tgt = [j for j in range(len(tgt)) if j not in matched]
    if len(changed_src) == 2 and len(changed_tgt) == 1:
        nx = sum(1 for i in changed_src if i in src_x)
        if nx == 2:
            return []
        j = changed_tgt[0]
        return [frozenset(fixed_x | ({j} if nx else set()))]
    if len(changed_src) == 1 and len(changed_tgt) == 2:
        j, k = changed_tgt
        if changed_src[0] in src_x:
            return [frozenset(fixed_x | {j, k})]
        return [frozenset(fixed_x | {j}), frozenset(fixed_x | {k})]
    raise ValueError(f"not a saddle: {len(changed_src)} circles -> {len(changed_tgt)}")


def components(labels, joins) -> list:
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = x = parent[parent[x]]
        return x

    for a, b in joins:
        if a not in parent:
            parent[a] = a
        if b not in parent:
            parent[b] = b
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups = defaultdict(set)
    for x in labels:
        groups[find(x)].add(x)
    return [frozenset(g) for g in groups.values()]


# -- tangle contexts -----------------------------------------------------------

class KhTangle:
    """Chain-level data of one tangle: circles, gradings and the differential."""

    def __init__(self, t: Tangle, check_size: bool = False):
        if check_size and len(t.crossings) > MAX_CROSSINGS:
            raise ResourceGuard(f"{len(t.crossings)} crossings exceeds {MAX_CROSSINGS}")
        self.t = t
        self.names = t.crossing_names()
        self.index = {n: i for i, n in enumerate(self.names)}
        self.labels = sorted(t.labels())
        anchors = defaultdict(list)
        for i, lab in enumerate(t.top):
            anchors[lab].append(("T", i))
        for j, lab in enumerate(t.bottom):
            anchors[lab].append(("B", j))
        for n, x in zip(self.names, t.crossings):
            for s, lab in enumerate(x):
                anchors[lab].append(("X", n, s))
        self.anchors = {lab: min(a) for lab, a in anchors.items()}
        self.top_matchings = matchings(len(t.top))
        self.bottom_matchings = matchings(len(t.bottom))
        self.oriented = t.oriented
        if t.oriented:
            self.signs = dict(zip(self.names, t.crossing_signs()))
            self.n_plus = sum(1 for s in self.signs.values() if s > 0)
            self.n_minus = len(self.signs) - self.n_plus
        else:
            self.signs = None
            self.n_plus = self.n_minus = 0
        self._circles = lru_cache(maxsize=4096)(self._circles_uncached)

    # circles

    def joins(self, b, c, v):
        t = self.t
        out = []
        for n, (a, bb, cc, d) in zip(self.names, t.crossings):
            if n in v:
                out += [(a, d), (bb, cc)]
            else:
                out += [(a, bb), (cc, d)]
        out += [(t.top[i], t.top[j]) for i, j in b]
        out += [(t.bottom[i], t.bottom[j]) for i, j in c]
        return out

    def _circles_uncached(self, b, c, v):
        comps = components(self.labels, self.joins(b, c, v))
        keyed = [(min(self.anchors[x] for x in comp), comp) for comp in comps]
        keyed += [(("O", i), frozenset({("O", i)})) for i in range(self.t.loops)]
        keyed.sort(key=lambda kc: kc[0])
        return tuple(keyed)

    def circles(self, b, c, v) -> tuple:
        """Sorted tuple of (key, label set) for the closed smoothing."""
        return self._circles(b, c, frozenset(v))

    def key_of_anchor(self, b, c, v) -> dict:
        out = {}
        for key, comp in self.circles(b, c, v):
            for lab in comp:
                if lab in self.anchors:
                    for a in self._all_anchors(lab):
                        out[a] = key
            if key[0] == "O":
                out[key] = key
        return out

    def _all_anchors(self, lab):
        t = self.t
        out = [("T", i) for i, x in enumerate(t.top) if x == lab]
        out += [("B", j) for j, x in enumerate(t.bottom) if x == lab]
        out += [("X", n, s) for n, x in zip(self.names, t.crossings) for s, y in enumerate(x) if y == lab]
        return out

    # generators and gradings

    def states(self):
        names = self.names
        for r in range(len(names) + 1):
            for v in combinations(names, r):
                yield frozenset(v)

    def generators_at(self, b, c, v):
        keys = [k for k, _ in self.circles(b, c, v)]
        for r in range(len(keys) + 1):
            for xs in combinations(keys, r):
                yield Gen(b, c, v, frozenset(xs))

    def generators(self):
        for b in self.top_matchings:
            for c in self.bottom_matchings:
                for v in self.states():
                    yield from self.generators_at(b, c, v)

    def h(self, g: Gen) -> int:
        return len(g.v) - self.n_minus

    def q(self, g: Gen) -> int:
        ncirc = len(self.circles(g.b, g.c, g.v))
        lab = ncirc - 2 * len(g.xs)
        return lab + len(g.v) + self.n_plus - 2 * self.n_minus - len(self.t.bottom) // 2

    def degree(self, g: Gen) -> tuple:
        return self.h(g), self.q(g)

    # differential

    def saddle(self, g: Gen, v2: frozenset, other: "KhTangle" = None, translate=None) -> set:
        """Saddle from g's smoothing to state v2 (of ``other`` if given)."""
        tgt_ctx = other or self
        src = self.circles(g.b, g.c, g.v)
        tgt = tgt_ctx.circles(g.b, g.c, v2)
        src_sets = [comp for _, comp in src]
        if translate is not None:
            src_sets = [frozenset(y for y in map(translate, comp) if y is not None) for comp in src_sets]
        src_x = {i for i, (k, _) in enumerate(src) if k in g.xs}
        tgt_keys = [k for k, _ in tgt]
        out = set()
        for term in tqft_saddle(src_sets, src_x, [comp for _, comp in tgt]):
            out ^= {Gen(g.b, g.c, v2, frozenset(tgt_keys[j] for j in term))}
        return out

    def d(self, g: Gen) -> set:
        out = set()
        for n in self.names:
            if n not in g.v:
                out ^= self.saddle(g, g.v | {n})
        return out

    def d_vec(self, vec) -> set:
        out = set()
        for g in vec:
            out ^= self.d(g)
        return out


def context(t: Tangle) -> KhTangle:
    return KhTangle(t)


# -- full complexes ------------------------------------------------------------

@dataclass
class Complex:
    """A finite complex with an explicit basis, graded by (h, q)."""

    deg: dict          # gen -> (h, q)
    dmap: dict         # gen -> set of gens

    def d(self, g) -> set:
        return self.dmap.get(g, set())

    def d_vec(self, vec) -> set:
        out = set()
        for g in vec:
            out ^= self.d(g)
        return out

    def by_degree(self) -> dict:
        out = defaultdict(list)
        for g, dq in self.deg.items():
            out[dq].append(g)
        return out

    def dim(self) -> int:
        return len(self.deg)

    def check_d_squared(self) -> bool:
        return all(not self.d_vec(self.d(g)) for g in self.deg)

    def to_json(self) -> str:
        order = sorted(self.deg, key=lambda g: (self.deg[g], repr(g)))
        idx = {g: i for i, g in enumerate(order)}
        return json.dumps({
            "basis": [{"id": i, "h": self.deg[g][0], "q": self.deg[g][1], "gen": repr(g)}
                      for i, g in enumerate(order)],
            "d": [[idx[g], sorted(idx[y] for y in self.d(g))] for g in order if self.d(g)],
        })


def complex_of(ctx: KhTangle) -> Complex:
    if len(ctx.names) > MAX_CROSSINGS:
        raise ResourceGuard(f"{len(ctx.names)} crossings exceeds {MAX_CROSSINGS}")
    deg, dmap = {}, {}
    for g in ctx.generators():
        deg[g] = ctx.degree(g)
        dg = ctx.d(g)
        if dg:
            dmap[g] = dg
    return Complex(deg, dmap)


def complex_of_tangle(t: Tangle) -> Complex:
    if not t.oriented:
        raise ValueError("complex_of_tangle needs an oriented tangle")
    return complex_of(KhTangle(t, check_size=True))


def homology(c: Complex) -> dict:
    """Ranks of homology by (h, q)."""
    blocks = c.by_degree()
    ranks = {}
    for (h, q), gens in blocks.items():
        tgt = blocks.get((h + 1, q), [])
        index = {g: i for i, g in enumerate(tgt)}
        ranks[(h, q)] = gf2.matrix_rank({g: c.d(g) for g in gens}, index)
    out = {}
    for (h, q), gens in blocks.items():
        r = len(gens) - ranks[(h, q)] - ranks.get((h - 1, q), 0)
        if r:
            out[(h, q)] = r
    return out


def tangle_homology(t: Tangle) -> dict:
    return homology(complex_of_tangle(t))


def euler_characteristic(ranks: dict) -> dict:
    """Graded Euler characteristic as a dict q-exponent -> coefficient."""
    out = defaultdict(int)
    for (h, q), r in ranks.items():
        out[q] += (-1) ** (h % 2) * r
    return {q: c for q, c in out.items() if c}


def chi_in_A(chi_q: dict) -> dict:
    """Substitute q = -A^-2."""
    out = defaultdict(int)
    for e, c in chi_q.items():
        out[-2 * e] += c * (-1) ** (e % 2)
    return {e: c for e, c in out.items() if c}


def bracket_prediction(link: Tangle) -> dict:
    """(-1)^n- q^(n+ - 2n-) A^-c (-A^2 - A^-2) <L> with q = -A^-2, in A."""
    from .tangle import kauffman_bracket
    br = kauffman_bracket(link)
    s = link.crossing_signs()
    npl, nmi = s.count(1), s.count(-1)
    c = len(s)
    shift_q = npl - 2 * nmi
    sign = (-1) ** nmi * (-1) ** (shift_q % 2)
    out = defaultdict(int)
    for e, coef in br.items():
        for de in (2, -2):
            out[e + de - c - 2 * shift_q] += -coef * sign
    return {e: v for e, v in out.items() if v}


# -- gluing and the arc algebra ------------------------------------------------

def psi(ctx1: KhTangle, ctx2: KhTangle, x: Gen, y: Gen, ctx12: KhTangle) -> set:
    """Contract x (upper tangle) against y (lower tangle) along the middle matching.

    The result lives in the complex of the concatenation ``ctx12`` (any PD code
    of it whose crossing names are those of the two factors).
    """
    if x.c != y.b:
        return set()
    if len(ctx12.names) != len(ctx1.names) + len(ctx2.names) or not ctx12.index.keys() >= ctx1.index.keys():
        raise ValueError("the glued tangle must keep the crossing names of both factors")
    t1, t2 = ctx1.t, ctx2.t
    lab1 = {z: ("1", z) for z in ctx1.labels}
    lab2 = {z: ("2", z) for z in ctx2.labels}
    base = [(lab1[a], lab1[b]) for a, b in ctx1.joins(x.b, (), x.v)]
    base += [(lab2[a], lab2[b]) for a, b in ctx2.joins((), y.c, y.v)]
    loops = [("1O", i) for i in range(t1.loops)] + [("2O", i) for i in range(t2.loops)]
    labels = list(lab1.values()) + list(lab2.values()) + loops
    arcs = list(x.c)

    def joins_at(done):
        out = list(base)
        for idx, (p, q) in enumerate(arcs):
            if idx < done:
                out += [(lab1[t1.bottom[p]], lab2[t2.top[p]]), (lab1[t1.bottom[q]], lab2[t2.top[q]])]
            else:
                out += [(lab1[t1.bottom[p]], lab1[t1.bottom[q]]), (lab2[t2.top[p]], lab2[t2.top[q]])]
        return out

    # initial X circles: translate keys of both closures into combined label sets
    circ = components(labels, joins_at(0))
    state = []
    xset = set()
    for key, comp in ctx1.circles(x.b, x.c, x.v):
        if key in x.xs:
            xset.add(next(iter(lab1[z] for z in comp)) if key[0] != "O" else ("1O", key[1]))
    for key, comp in ctx2.circles(y.b, y.c, y.v):
        if key in y.xs:
            xset.add(next(iter(lab2[z] for z in comp)) if key[0] != "O" else ("2O", key[1]))
    terms = [frozenset(i for i, comp in enumerate(circ) if comp & xset)]
    for step in range(1, len(arcs) + 1):
        nxt = components(labels, joins_at(step))
        out = set()
        for term in terms:
            for res in tqft_saddle(circ, set(term), nxt):
                out ^= {res}
        circ, terms = nxt, list(out)
        if not terms:
            return set()
    # name the final circles by anchors of the glued picture
    anchor = {}
    for z in ctx1.labels:
        a = [p for p in ctx1._all_anchors(z) if p[0] != "B"]
        if a:
            anchor[lab1[z]] = min(a)
    for z in ctx2.labels:
        a = [p for p in ctx2._all_anchors(z) if p[0] != "T"]
        if a:
            anchor[lab2[z]] = min(a)
    v12 = x.v | y.v
    keymap = ctx12.key_of_anchor(x.b, y.c, v12)
    free = [k for k, comp in ctx12.circles(x.b, y.c, v12) if k[0] == "O"]
    final_keys = []
    for comp in circ:
        anchors = [anchor[z] for z in comp if z in anchor]
        if anchors:
            final_keys.append(keymap[min(anchors)])
        else:
            final_keys.append(free.pop(0))
    result = set()
    for term in terms:
        result ^= {Gen(x.b, y.c, v12, frozenset(final_keys[i] for i in term))}
    return result


def psi_vec(ctx1, ctx2, xs, ys, ctx12) -> set:
    out = set()
    for x in xs:
        for y in ys:
            out ^= psi(ctx1, ctx2, x, y, ctx12)
    return out


class ArcAlgebra:
    """H^n, realized as the complex of the identity tangle on 2n points."""

    def __init__(self, n: int):
        if n > MAX_ARC_N:
            raise ResourceGuard(f"arc algebra H^{n} exceeds the limit n <= {MAX_ARC_N}")
        self.n = n
        self.ctx = KhTangle(vert(2 * n))
        self.basis = list(self.ctx.generators())

    @property
    def matchings(self):
        return self.ctx.top_matchings

    def mul(self, x: Gen, y: Gen) -> set:
        return psi(self.ctx, self.ctx, x, y, self.ctx)

    def mul_vec(self, xs, ys) -> set:
        return psi_vec(self.ctx, self.ctx, xs, ys, self.ctx)

    def idempotent(self, a) -> Gen:
        return Gen(a, a, frozenset(), frozenset())

    def unit(self) -> set:
        return {self.idempotent(a) for a in self.matchings}

    def degree(self, x: Gen) -> int:
        return self.ctx.q(x)

    def table(self) -> dict:
        return {(x, y): self.mul(x, y) for x in self.basis for y in self.basis}


def arc_algebra(n: int) -> ArcAlgebra:
    return ArcAlgebra(n)


def act_left(alg: ArcAlgebra, ctx: KhTangle, a: Gen, g: Gen) -> set:
    return psi(alg.ctx, ctx, a, g, ctx)


def act_right(alg: ArcAlgebra, ctx: KhTangle, g: Gen, a: Gen) -> set:
    return psi(ctx, alg.ctx, g, a, ctx)


def tensor_over(upper: KhTangle, lower: KhTangle, glued: KhTangle, xs, ys) -> set:
    """x (x) y in F(upper) (x)_H F(lower), identified with an element of F(glued)."""
    if len(upper.t.bottom) != len(lower.t.top):
        raise ValueError("boundary mismatch")
    return psi_vec(upper, lower, xs, ys, glued)


# -- saddles ----------------------------------------------------------------------

def _faces(t: Tangle, turn: int = 1):
    """Trace the faces of t drawn in a disk, the rim shrunk to one vertex.

    The rim is met as top left to right, then bottom right to left; ``turn``
    says which way round that is relative to the crossings.  Returns the
    faces as lists of (start anchor, end anchor, label) and whether the
    embedding is planar, or None when the labels are not two-ended.
    """
    rot, where = {}, {}
    for n, x in zip(t.crossing_names(), t.crossings):
        rot[n] = list(x)
        where.update({(n, i): ("X", n, i) for i in range(4)})
    rim = [(("T", i), lab) for i, lab in enumerate(t.top)]
    rim += [(("B", j), t.bottom[j]) for j in reversed(range(len(t.bottom)))]
    if turn < 0:
        rim.reverse()
    if rim:
        rot["rim"] = [lab for _, lab in rim]
        where.update({("rim", i): a for i, (a, _) in enumerate(rim)})
    ends = defaultdict(list)
    for v, labs in rot.items():
        for i, lab in enumerate(labs):
            ends[lab].append((v, i))
    if any(len(e) != 2 for e in ends.values()):
        return None
    other = {}
    for a, b in ends.values():
        other[a], other[b] = b, a
    seen, faces = set(), []
    for dart in other:
        if dart in seen:
            continue
        face = []
        while dart not in seen:
            seen.add(dart)
            v, i = end = other[dart]
            face.append((where[dart], where[end], rot[dart[0]][dart[1]]))
            dart = (v, (i + 1) % len(rot[v]))
        faces.append(face)
    comps = _UF()
    for v in rot:
        comps.find(v)
    for (v, _), (w, _) in ends.values():
        comps.union(v, w)
    n_comps = len({comps.find(v) for v in rot})
    return faces, len(rot) - len(ends) + len(faces) == 2 * n_comps


def is_planar(t: Tangle, turn: int = 1) -> bool:
    traced = _faces(t, turn)
    return bool(traced and traced[1])


def _boundary_turn(t: Tangle) -> int:
    return 1 if is_planar(t, 1) else -1


def _band_sites(t: Tangle) -> dict:
    """(p, q) -> set of new end pairings realizable by a band inside a face."""
    traced = _faces(t, _boundary_turn(t))
    out = defaultdict(set)
    if not traced or not traced[1]:
        return out
    for face in traced[0]:
        for (x, y, p), (u, w, q) in combinations(face, 2):
            if p != q:
                key, pairing = (p, q) if p < q else (q, p), frozenset({frozenset({x, w}), frozenset({y, u})})
                out[key].add(pairing)
    return out


def saddle_sites(ctx: KhTangle) -> list:
    """All (p, q, cross) for which a band inside a face joins arcs p and q."""
    out = []
    for (p, q) in sorted(_band_sites(ctx.t)):
        for cross in (False, True):
            try:
                SaddleMap(ctx, p, q, cross)
            except ValueError:
                continue
            out.append((p, q, cross))
    return out


class SaddleMap:
    """The saddle cobordism joining arcs p and q of a tangle.

    Arc p runs between occurrences P1, P2 and q between Q1, Q2 (in anchor
    order).  The saddle replaces them by arcs P1-Q1 and P2-Q2, or P1-Q2 and
    P2-Q1 when ``cross`` is set.  On each smoothing the map is the TQFT merge
    or split, so it commutes with the differentials.
    """

    def __init__(self, ctx: KhTangle, p: str, q: str, cross: bool = False):
        if p == q:
            raise ValueError("a saddle needs two different arcs")
        self.ctx = ctx
        t = ctx.t
        occ = {p: [], q: []}
        for i, lab in enumerate(t.top):
            if lab in occ:
                occ[lab].append(("T", i))
        for j, lab in enumerate(t.bottom):
            if lab in occ:
                occ[lab].append(("B", j))
        for n, x in zip(ctx.names, t.crossings):
            for slot, lab in enumerate(x):
                if lab in occ:
                    occ[lab].append(("X", n, slot))
        if any(len(v) != 2 for v in occ.values()):
            raise ValueError("saddle site must be two arcs with two ends each")
        self.p, self.q, self.cross = p, q, cross
        (p1, p2), (q1, q2) = sorted(occ[p]), sorted(occ[q])
        if cross:
            q1, q2 = q2, q1
        self.split_name = {p1: f"{p}@1", p2: f"{p}@2", q1: f"{q}@1", q2: f"{q}@2"}
        new1, new2 = f"{p}+{q}#1", f"{p}+{q}#2"
        rename = {p1: new1, q1: new1, p2: new2, q2: new2}

        def relabel(anchor, lab):
            return rename.get(anchor, lab)

        top = tuple(relabel(("T", i), lab) for i, lab in enumerate(t.top))
        bottom = tuple(relabel(("B", j), lab) for j, lab in enumerate(t.bottom))
        xs = tuple(tuple(relabel(("X", n, slot), lab) for slot, lab in enumerate(x))
                   for n, x in zip(ctx.names, t.crossings))
        target = Tangle(top, bottom, xs, t.loops, t.incoming, t.top_signs, t.bottom_signs, t.names)
        pairing = frozenset({frozenset({p1, q1}), frozenset({p2, q2})})
        key = (p, q) if p < q else (q, p)
        if pairing not in _band_sites(t).get(key, ()):
            raise ValueError(f"no band inside a face joins {p} and {q} this way")
        self.target = KhTangle(target)
        # the same picture with p and q cut at their midpoints
        def cut(anchor, lab):
            return self.split_name.get(anchor, lab)

        self._cut_top = tuple(cut(("T", i), lab) for i, lab in enumerate(t.top))
        self._cut_bottom = tuple(cut(("B", j), lab) for j, lab in enumerate(t.bottom))
        self._cut_x = tuple(tuple(cut(("X", n, slot), lab) for slot, lab in enumerate(x))
                            for n, x in zip(ctx.names, t.crossings))
        self._anchor = {}
        for i, lab in enumerate(self._cut_top):
            self._anchor.setdefault(lab, []).append(("T", i))
        for j, lab in enumerate(self._cut_bottom):
            self._anchor.setdefault(lab, []).append(("B", j))
        for n, x in zip(ctx.names, self._cut_x):
            for slot, lab in enumerate(x):
                self._anchor.setdefault(lab, []).append(("X", n, slot))
        self._labels = sorted(self._anchor)
        self._src_extra = [(f"{p}@1", f"{p}@2"), (f"{q}@1", f"{q}@2")]
        self._tgt_extra = [(f"{p}@1", f"{q}@1"), (f"{p}@2", f"{q}@2")]

    def _parts(self, b, c, v, extra):
        joins = []
        for n, (a, bb, cc, d) in zip(self.ctx.names, self._cut_x):
            joins += [(a, d), (bb, cc)] if n in v else [(a, bb), (cc, d)]
        joins += [(self._cut_top[i], self._cut_top[j]) for i, j in b]
        joins += [(self._cut_bottom[i], self._cut_bottom[j]) for i, j in c]
        comps = components(self._labels, joins + extra)
        keyed = [(min(a for lab in comp for a in self._anchor[lab]), comp) for comp in comps]
        keyed += [(("O", i), frozenset({("O", i)})) for i in range(self.ctx.t.loops)]
        return keyed

    def __call__(self, g: Gen) -> set:
        src = self._parts(g.b, g.c, g.v, self._src_extra)
        tgt = self._parts(g.b, g.c, g.v, self._tgt_extra)
        src_x = {i for i, (k, _) in enumerate(src) if k in g.xs}
        out = set()
        for term in tqft_saddle([c for _, c in src], src_x, [c for _, c in tgt]):
            out ^= {Gen(g.b, g.c, g.v, frozenset(tgt[j][0] for j in term))}
        return out

    def apply(self, vec) -> set:
        out = set()
        for g in vec:
            out ^= self(g)
        return out


def saddle_map(ctx: KhTangle, p: str, q: str, cross: bool = False) -> SaddleMap:
    return SaddleMap(ctx, p, q, cross)


# -- maps, elimination and homotopies -----------------------------------------

def compose_maps(f: dict, g: dict) -> dict:
    """f after g, for maps given as gen -> set."""
    out = {}
    for x, img in g.items():
        acc = set()
        for y in img:
            acc ^= f.get(y, set())
        out[x] = acc
    return out


def is_chain_map(f: dict, src: Complex, tgt: Complex) -> bool:
    for x in src.deg:
        left = set()
        for y in src.d(x):
            left ^= f.get(y, set())
        if left != tgt.d_vec(f.get(x, set())):
            return False
    return True


@dataclass
class Simplification:
    simplified: Complex
    to: dict        # original -> simplified
    frm: dict       # simplified -> original
    h: dict         # original -> original, degree -1


def r2_simplify(c: Complex, limit: int | None = None) -> Simplification:
    """Gaussian elimination along differential entries until none remain.

    Returns the smaller complex with the maps ``to``/``frm`` and a homotopy
    ``h`` with id - frm.to = d h + h d on the original complex.  Each step
    cancels an entry x -> y; composing steps uses h = h1 + g1 h2 f1.
    """
    deg = dict(c.deg)
    d = {g: set(v) for g, v in c.dmap.items() if v}
    pre = defaultdict(set)
    for g, img in d.items():
        for y in img:
            pre[y].add(g)
    to = {g: {g} for g in deg}
    frm = {g: {g} for g in deg}
    h = defaultdict(set)
    holders = defaultdict(set)      # current gen -> originals whose to-image holds it
    for g in deg:
        holders[g].add(g)
    done = 0
    while limit is None or done < limit:
        x = next((g for g, img in d.items() if img), None)
        if x is None:
            break
        y = min(d[x], key=repr)
        dx = set(d[x])
        fx = set(frm[x])
        # homotopy and the projection
        for u in list(holders[y]):
            h[u] ^= fx
            img = to[u]
            for w in dx:
                if w in img:
                    img.discard(w)
                    holders[w].discard(u)
                else:
                    img.add(w)
                    holders[w].add(u)
        for u in holders.pop(x, set()):
            to[u].discard(x)
        holders.pop(y, None)
        # inclusion and the new differential
        for z in list(pre[y]):
            if z == x:
                continue
            frm[z] = frm[z] ^ fx
            old = d[z]
            new = old ^ dx
            for w in old - new:
                pre[w].discard(z)
            for w in new - old:
                pre[w].add(z)
            d[z] = new
        for w in d.pop(x, set()):
            pre[w].discard(x)
        for w in d.pop(y, set()):
            pre[w].discard(y)
        for z in pre.pop(x, set()):
            d[z].discard(x)
        pre.pop(y, None)
        del deg[x], deg[y]
        frm.pop(x)
        frm.pop(y)
        done += 1
    simplified = Complex(deg, {g: v for g, v in d.items() if v})
    return Simplification(simplified, to, frm, {u: v for u, v in h.items() if v})


def homotopy_equal(f: dict, g: dict, src: Complex, tgt: Complex, max_vars: int = 20000):
    """Decide whether f - g = dH + Hd; returns (bool, H)."""
    diff = {x: f.get(x, set()) ^ g.get(x, set()) for x in src.deg}
    if not any(diff.values()):
        return True, {}
    tblocks = tgt.by_degree()
    var = {}
    for x, (hh, qq) in src.deg.items():
        for y in tblocks.get((hh - 1, qq), []):
            var[(x, y)] = len(var)
    if len(var) > max_vars:
        raise ResourceGuard("homotopy system too large")
    src_pre = defaultdict(set)
    for x in src.deg:
        for y in src.d(x):
            src_pre[y].add(x)
    eqs = []
    for x, (hh, qq) in src.deg.items():
        for t in tblocks.get((hh, qq), []):
            coeffs = 0
            # (d H)(x)[t] = sum over y with t in d(y) of H(x)[y]
            for y in tblocks.get((hh - 1, qq), []):
                if t in tgt.d(y):
                    coeffs ^= 1 << var[(x, y)]
            # (H d)(x)[t] = sum over x' in d(x) of H(x')[t]
            for x2 in src.d(x):
                k = var.get((x2, t))
                if k is not None:
                    coeffs ^= 1 << k
            eqs.append((coeffs, 1 if t in diff[x] else 0))
    sol = gf2.solve(eqs, len(var))
    if sol is None:
        return False, None
    hom = defaultdict(set)
    for (x, y), k in var.items():
        if (sol >> k) & 1:
            hom[x].add(y)
    return True, dict(hom)


def homology_from_simplified(s: Simplification) -> dict:
    out = defaultdict(int)
    for g, dq in s.simplified.deg.items():
        out[dq] += 1
    return dict(out)


def sample_generators(ctx: KhTangle, rng: random.Random, count: int, b=None, c=None) -> list:
    """Random generators without enumerating the whole cube."""
    out = []
    for _ in range(count):
        bb = b if b is not None else rng.choice(ctx.top_matchings)
        cc = c if c is not None else rng.choice(ctx.bottom_matchings)
        v = frozenset(n for n in ctx.names if rng.random() < 0.5)
        keys = [k for k, _ in ctx.circles(bb, cc, v)]
        xs = frozenset(k for k in keys if rng.random() < 0.5)
        out.append(Gen(bb, cc, v, xs))
    return out


# -- movies of Type II moves ---------------------------------------------------

def type2_translation(gr, m, s, sw) -> tuple:
    """Labels of T(g) identified by the Type II move (m, s) on graph gr.

    Returns (pairs, edge, rename): the three label pairs that become single
    arcs of T(g'), the label of the deleted edge, and the label map.
    """
    from .tangle import black, red
    a, b = gr.up[(m, 0)], gr.up[(m, 1)]
    c, d = gr.down[(s, 0)], gr.down[(s, 1)]
    rm = sw.node_regions[m][1]
    rs = sw.node_regions[s][1]
    merged = red(rm.split(">")[0] + ">" + rs.split(">")[1])
    pairs = [(black(a, (m, 0)), black((s, 0), c)),
             (black(b, (m, 1)), black((s, 1), d)),
             (red(rm), red(rs))]
    rename = {pairs[0][0]: black(a, c), pairs[0][1]: black(a, c),
              pairs[1][0]: black(b, d), pairs[1][1]: black(b, d),
              pairs[2][0]: merged, pairs[2][1]: merged}
    return pairs, black((m, 0), (s, 0)), rename


class MovieStep:
    """Chain map F(T(g)) -> F(T(g')) for one Type II move (m, s).

    In the source the edge m -> s runs over a cap and a cup; the map is the
    saddle that trades them for the two parallel strands of T(g').  It is
    nonzero only when exactly one of m, s carries the 1-smoothing.
    """

    def __init__(self, ctx: KhTangle, ctx2: KhTangle, m, s, pairs, edge, rename):
        self.ctx, self.ctx2, self.m, self.s = ctx, ctx2, m, s
        self.pairs, self.edge, self.rename = pairs, edge, rename
        self.pair = frozenset((m, s))
        self.labels = [x for x in ctx.labels if x != edge]
        self._geo = {}

    def _target_circles(self, b, c, v2):
        t = self.ctx.t
        joins = []
        for n, (a, bb, cc, d) in zip(self.ctx.names, t.crossings):
            if n in self.pair:
                continue
            joins += [(a, d), (bb, cc)] if n in v2 else [(a, bb), (cc, d)]
        joins += [(t.top[i], t.top[j]) for i, j in b]
        joins += [(t.bottom[i], t.bottom[j]) for i, j in c]
        return components(self.labels, joins + self.pairs)

    def _geometry(self, b, c, v):
        """Source circles, saddle target sets and their keys; shared by all xs."""
        hit = self._geo.get((b, c, v))
        if hit is not None:
            return hit
        v2 = v - self.pair
        src = self.ctx.circles(b, c, v)
        src_sets = [comp - {self.edge} for _, comp in src]
        tgt = self._target_circles(b, c, v2)
        loops = [i for i, (k, _) in enumerate(src) if k[0] == "O"]
        keymap = {}
        for key, comp in self.ctx2.circles(b, c, v2):
            for lab in comp:
                keymap[lab] = key
        tgt_keys = []
        for comp in tgt:
            lab = next(iter(comp))
            tgt_keys.append(keymap[self.rename.get(lab, lab)])
        tgt_sets = list(tgt) + [src_sets[i] for i in loops]
        tgt_keys += [src[i][0] for i in loops]
        hit = self._geo[(b, c, v)] = (src, src_sets, tgt_sets, tgt_keys)
        return hit

    def __call__(self, g: Gen) -> set:
        if len(self.pair & g.v) != 1:
            return set()
        v2 = g.v - self.pair
        src, src_sets, tgt_sets, tgt_keys = self._geometry(g.b, g.c, g.v)
        src_x = {i for i, (k, _) in enumerate(src) if k in g.xs}
        out = set()
        for term in tqft_saddle(src_sets, src_x, tgt_sets):
            out ^= {Gen(g.b, g.c, v2, frozenset(tgt_keys[j] for j in term))}
        return out

    def apply(self, vec) -> set:
        out = set()
        for g in vec:
            out ^= self(g)
        return out


def movie(g, moves, mirror: bool = False, signs_of=None):
    """Contexts and steps along a chain of Type II moves starting at graph g.

    ``signs_of`` maps a graph to its region signs (oriented tangles); without
    it the tangles are unoriented and only the ungraded chain maps make sense.
    """
    from .strand import as_graph
    from .tangle import sweep, tangle_of
    gr = as_graph(g).copy()

    def ctx_of(x):
        signs = signs_of(x) if signs_of else None
        return KhTangle(tangle_of(x, mirror=mirror, signs=signs))

    ctxs = [ctx_of(gr)]
    steps = []
    for m, s in moves:
        pairs, edge, rename = type2_translation(gr, m, s, sweep(gr))
        gr.apply_type2(m, s)
        ctxs.append(ctx_of(gr))
        steps.append(MovieStep(ctxs[-2], ctxs[-1], m, s, pairs, edge, rename))
    return ctxs, steps, gr


def movie_map(steps, vec) -> set:
    for st in steps:
        vec = st.apply(vec)
    return vec
