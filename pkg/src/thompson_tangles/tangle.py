"""From strand diagrams to tangles.

Every region of the complement, apart from the leftmost and rightmost ones,
gets a red edge joining its top (a split or a top interval) to its bottom (a
merge or a bottom interval).  Splits and merges then become crossings, and a
trivial strand is added on the far left.

Tangles are stored as PD codes with string labels.  A label names one arc of
the diagram between two consecutive events (crossing slot or boundary point).
Crossings are 4-tuples ``(a, b, c, d)`` listed counterclockwise; ``a``-``c``
is the under strand and ``b``-``d`` the over strand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from . import strand
from .fgroup import FElement
from .strand import MERGE, SPLIT, StrandGraph, as_graph


# -- regions -----------------------------------------------------------------

def fmt_end(e) -> str:
    if e[0] in ("T", "B"):
        return f"{e[0]}{e[1]}"
    return f"{e[0]}.{e[1]}"


@dataclass
class Region:
    birth: object          # ("T", i) or a split node name
    death: object = None   # ("B", j) or a merge node name
    excluded: str = ""     # "left", "right" or ""

    @property
    def id(self) -> str:
        b = fmt_end(self.birth) if isinstance(self.birth, tuple) else self.birth
        d = fmt_end(self.death) if isinstance(self.death, tuple) else self.death
        return f"{b}>{d}"

    @property
    def type(self) -> int:
        top = isinstance(self.birth, tuple)
        bottom = isinstance(self.death, tuple)
        if top and bottom:
            return 4
        if top:
            return 3
        if bottom:
            return 2
        return 1


@dataclass
class Sweep:
    """Result of the left-to-right region sweep of a diagram."""

    graph: StrandGraph
    order: list
    regions: list
    node_regions: dict = field(default_factory=dict)   # node -> (left id, middle id)
    edge_left: dict = field(default_factory=dict)      # edge src -> left region id
    top_gaps: list = field(default_factory=list)       # region id per top gap
    bottom_gaps: list = field(default_factory=list)

    def region(self, rid) -> Region:
        return self._by_id[rid]

    def __post_init__(self):
        self._by_id = {r.id: r for r in self.regions}

    @property
    def leftmost(self) -> str:
        return self.top_gaps[0]

    @property
    def rightmost(self) -> str:
        return self.top_gaps[-1]


def sweep(g) -> Sweep:
    gr = as_graph(g)
    order = gr.schedule()
    gaps = [Region(("T", i)) for i in range(gr.top + 1)]
    every = list(gaps)
    frontier = [("T", i) for i in range(gr.top)]
    edge_left_r = {src: gaps[i] for i, src in enumerate(frontier)}
    node_r = {}
    for nid, p in order:
        if gr.kind[nid] == SPLIT:
            mid = Region(nid)
            every.append(mid)
            gaps.insert(p + 1, mid)
            frontier[p:p + 1] = [(nid, 0), (nid, 1)]
            edge_left_r[(nid, 0)] = gaps[p]
            edge_left_r[(nid, 1)] = mid
        else:
            mid = gaps.pop(p + 1)
            mid.death = nid
            frontier[p:p + 2] = [(nid, 0)]
            edge_left_r[(nid, 0)] = gaps[p]
        node_r[nid] = (gaps[p], mid)
    for j, r in enumerate(gaps):
        r.death = ("B", j)
    gaps[0].excluded = "left"
    gaps[-1].excluded = "right"
    s = Sweep(gr, order, every,
              {n: (a.id, b.id) for n, (a, b) in node_r.items()},
              {e: r.id for e, r in edge_left_r.items()})
    s.top_gaps = [r.id for r in every[:gr.top + 1]]
    s.bottom_gaps = [r.id for r in gaps]
    return s


def regions(g) -> list:
    """All regions of the complement, leftmost/rightmost flagged ``excluded``."""
    return sweep(g).regions


# -- tangles -----------------------------------------------------------------

@dataclass(frozen=True)
class Tangle:
    top: tuple
    bottom: tuple
    crossings: tuple = ()
    loops: int = 0
    # optional orientation: per crossing, which of the four slots point in
    incoming: tuple | None = None
    top_signs: tuple | None = None      # +1 for a downward endpoint
    bottom_signs: tuple | None = None
    names: tuple | None = None          # crossing ids; node names for T(g)

    def crossing_names(self) -> tuple:
        return self.names if self.names is not None else tuple(range(len(self.crossings)))

    @property
    def oriented(self) -> bool:
        return self.incoming is not None

    def labels(self) -> set:
        out = set(self.top) | set(self.bottom)
        for x in self.crossings:
            out.update(x)
        return out

    def crossing_signs(self) -> list:
        if not self.oriented:
            raise ValueError("tangle is not oriented")
        out = []
        for inc in self.incoming:
            u = 0 if inc[0] else 2
            out.append(1 if inc[(u + 3) % 4] else -1)
        return out

    def counts(self) -> tuple[int, int]:
        s = self.crossing_signs()
        return s.count(1), s.count(-1)

    def to_dict(self) -> dict:
        t = normal_form(self)
        d = {"top": len(t.top), "bottom": len(t.bottom),
             "top_labels": list(t.top), "bottom_labels": list(t.bottom),
             "crossings": [list(x) for x in t.crossings],
             "over": [[x[1], x[3]] for x in t.crossings],
             "loops": t.loops}
        if t.oriented:
            d["orient"] = [[i for i in range(4) if inc[i]] for inc in t.incoming]
            d["top_signs"] = list(t.top_signs)
            d["bottom_signs"] = list(t.bottom_signs)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d) -> "Tangle":
        inc = None
        if "orient" in d:
            inc = tuple(tuple(i in o for i in range(4)) for o in d["orient"])
        return cls(tuple(d["top_labels"]), tuple(d["bottom_labels"]),
                   tuple(tuple(x) for x in d["crossings"]), d.get("loops", 0), inc,
                   tuple(d["top_signs"]) if "top_signs" in d else None,
                   tuple(d["bottom_signs"]) if "bottom_signs" in d else None)


def black(src, dst) -> str:
    return f"b:{fmt_end(src)}>{fmt_end(dst)}"


def red(rid: str) -> str:
    return f"r:{rid}"


def tangle_of(g, mirror: bool = False, signs: dict | None = None) -> Tangle:
    """The tangle T(g); with region ``signs`` the result is oriented."""
    sw = sweep(g)
    gr = sw.graph

    def b_out(src):
        return black(src, gr.down[src])

    def b_in(dst):
        return black(gr.up[dst], dst)

    top = ["L"]
    for i in range(gr.top):
        if i:
            top.append(red(sw.top_gaps[i]))
        top.append(b_out(("T", i)))
    bottom = ["L"]
    for j in range(gr.bottom):
        if j:
            bottom.append(red(sw.bottom_gaps[j]))
        bottom.append(b_in(("B", j)))
    crossings = []
    for nid, _ in sw.order:
        mid = red(sw.node_regions[nid][1])
        if gr.kind[nid] == SPLIT:
            x = (b_out((nid, 0)), mid, b_out((nid, 1)), b_in((nid, 0)))
        else:
            x = (b_in((nid, 0)), b_out((nid, 0)), b_in((nid, 1)), mid)
        crossings.append(x)

    incoming = top_signs = bottom_signs = None
    if signs is not None:
        down = {"L": signs[sw.leftmost] > 0}
        for r in sw.regions:
            if not r.excluded:
                down[red(r.id)] = signs[r.id] > 0
        for src, dst in gr.down.items():
            down[black(src, dst)] = signs[sw.edge_left[src]] < 0
        incoming = []
        for nid, _ in sw.order:
            mid = red(sw.node_regions[nid][1])
            if gr.kind[nid] == SPLIT:
                # slots 0-2 leave the node downward, slot 3 arrives from above
                inc = (not down[b_out((nid, 0))], not down[mid],
                       not down[b_out((nid, 1))], down[b_in((nid, 0))])
            else:
                inc = (down[b_in((nid, 0))], not down[b_out((nid, 0))],
                       down[b_in((nid, 1))], down[mid])
            incoming.append(inc)
        top_signs = tuple(1 if down[x] else -1 for x in top)
        bottom_signs = tuple(1 if down[x] else -1 for x in bottom)
        incoming = tuple(incoming)

    t = Tangle(tuple(top), tuple(bottom), tuple(crossings), 0,
               incoming, top_signs, bottom_signs, tuple(n for n, _ in sw.order))
    return mirror_tangle(t) if mirror else t


def oriented_tangle_of(og, mirror: bool = False) -> Tangle:
    t = tangle_of(og.graph, mirror=mirror, signs=og.signs)
    _check_orientation(t)
    return t


def _check_orientation(t: Tangle):
    for x, inc in zip(t.crossings, t.incoming):
        assert inc[0] != inc[2] and inc[1] != inc[3], f"inconsistent crossing {x}"


def mirror_tangle(t: Tangle) -> Tangle:
    """Swap over and under at every crossing."""
    xs = tuple(x[1:] + x[:1] for x in t.crossings)
    inc = None if t.incoming is None else tuple(i[1:] + i[:1] for i in t.incoming)
    return Tangle(t.top, t.bottom, xs, t.loops, inc, t.top_signs, t.bottom_signs, t.names)


mirror = mirror_tangle


def vert(n: int) -> Tangle:
    """The identity tangle on n vertical strands."""
    labs = tuple(f"v{i}" for i in range(n))
    return Tangle(labs, labs)


def theta_tangle(k: int, g: FElement, mirror: bool = False) -> Tangle:
    return tangle_of(strand.theta(k, g), mirror=mirror)


# -- relabeling, gluing, closure ---------------------------------------------

class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _rename(t: Tangle, f) -> Tangle:
    return Tangle(tuple(map(f, t.top)), tuple(map(f, t.bottom)),
                  tuple(tuple(map(f, x)) for x in t.crossings), t.loops,
                  t.incoming, t.top_signs, t.bottom_signs, t.names)


def _identify(top, bottom, crossings, loops, joins, incoming, ts, bs, names=None) -> Tangle:
    """Merge labels joined by ``joins``; joined labels that vanish become loops."""
    uf = _UF()
    for a, b in joins:
        uf.union(a, b)
    used = set(top) | set(bottom)
    for x in crossings:
        used.update(x)
    f = uf.find
    before = {f(x) for x in uf.p}
    after = {f(x) for x in used}
    loops += len(before - after)
    t = Tangle(tuple(top), tuple(bottom), tuple(crossings), loops, incoming, ts, bs, names)
    return _rename(t, f)


def concat(upper: Tangle, lower: Tangle) -> Tangle:
    """Glue ``lower`` below ``upper``."""
    if len(upper.bottom) != len(lower.top):
        raise ValueError("boundary mismatch")
    u = _rename(upper, lambda s: "u/" + s)
    w = _rename(lower, lambda s: "w/" + s)
    joins = list(zip(u.bottom, w.top))
    inc = None
    if upper.oriented and lower.oriented:
        if upper.bottom_signs != lower.top_signs:
            raise ValueError("orientations do not match")
        inc = upper.incoming + lower.incoming
    un, wn = upper.crossing_names(), lower.crossing_names()
    if set(un) & set(wn):
        un, wn = tuple(f"u/{n}" for n in un), tuple(f"w/{n}" for n in wn)
    names = tuple(un) + tuple(wn)
    return _identify(u.top, w.bottom, u.crossings + w.crossings, upper.loops + lower.loops,
                     joins, inc, u.top_signs if inc else None, w.bottom_signs if inc else None,
                     names)


def closure(t: Tangle) -> Tangle:
    """Join top point i to bottom point i around the right side."""
    if len(t.top) != len(t.bottom):
        raise ValueError("closure needs equal top and bottom counts")
    return _identify((), (), t.crossings, t.loops, list(zip(t.top, t.bottom)),
                     t.incoming, () if t.oriented else None, () if t.oriented else None,
                     t.names)


def normal_form(t: Tangle) -> Tangle:
    """Relabel arcs by integers in order of first appearance, boundary first."""
    names = {}
    for lab in list(t.top) + list(t.bottom) + [s for x in t.crossings for s in x]:
        names.setdefault(lab, len(names))
    return _rename(t, names.__getitem__)


# -- arcs and turnbacks ------------------------------------------------------

def _occurrences(t: Tangle) -> dict:
    occ = {}
    for i, lab in enumerate(t.top):
        occ.setdefault(lab, []).append(("T", i))
    for j, lab in enumerate(t.bottom):
        occ.setdefault(lab, []).append(("B", j))
    for c, x in enumerate(t.crossings):
        for s, lab in enumerate(x):
            occ.setdefault(lab, []).append(("X", c, s))
    return occ


def components(t: Tangle) -> tuple[list, int]:
    """Arcs as pairs of boundary points, plus the number of closed components."""
    occ = _occurrences(t)
    for lab, where in occ.items():
        if len(where) != 2:
            raise ValueError(f"label {lab!r} used {len(where)} times")
    seen = set()
    arcs = []

    def other(lab, here):
        a, b = occ[lab]
        return b if a == here else a

    def walk(start):
        here = start
        lab = t.top[here[1]] if here[0] == "T" else t.bottom[here[1]]
        while True:
            seen.add(lab)
            there = other(lab, here)
            if there[0] != "X":
                return there
            c, s = there[1], there[2]
            s2 = (s + 2) % 4
            here = ("X", c, s2)
            lab = t.crossings[c][s2]

    for side, labs in (("T", t.top), ("B", t.bottom)):
        for i in range(len(labs)):
            p = (side, i)
            if labs[i] in seen:
                continue
            q = walk(p)
            arcs.append(tuple(sorted((p, q))))
    closed = 0
    for c, x in enumerate(t.crossings):
        for s in range(4):
            if x[s] in seen:
                continue
            closed += 1
            here, lab = ("X", c, s), x[s]
            while lab not in seen:
                seen.add(lab)
                there = other(lab, here)
                here = ("X", there[1], (there[2] + 2) % 4)
                lab = t.crossings[there[1]][here[2]]
    return arcs, closed + t.loops


@dataclass(frozen=True)
class TurnbackSignature:
    top_matching: frozenset
    bottom_matching: frozenset

    def __str__(self):
        def show(m):
            return " ".join(f"{a}-{b}" for a, b in sorted(m)) or "none"
        return f"top: {show(self.top_matching)}; bottom: {show(self.bottom_matching)}"


def turnback_signature(t: Tangle) -> TurnbackSignature:
    arcs, _ = components(t)
    top = frozenset((p[1], q[1]) for p, q in arcs if p[0] == q[0] == "T")
    bottom = frozenset((p[1], q[1]) for p, q in arcs if p[0] == q[0] == "B")
    return TurnbackSignature(top, bottom)


@dataclass
class Distinction:
    k: int | None
    witness: str = ""
    height_threshold: int = 0
    leaves_threshold: int = 0

    @property
    def found(self) -> bool:
        return self.k is not None


def leaves_threshold(g: FElement, h: FElement) -> int:
    """Least k with 2**k at least the leaf count of either tree pair."""
    m = max(g.leaves, h.leaves)
    k = 0
    while 2 ** k < m:
        k += 1
    return k


def distinguish(g: FElement, h: FElement, kmax: int = 6, mirror: bool = False) -> Distinction:
    """Least k at which the turnback signatures of the two tangles differ."""
    if g == h:
        raise ValueError("elements are equal")
    from .fgroup import height
    d = Distinction(None, "", max(height(g), height(h)), leaves_threshold(g, h))
    for k in range(kmax + 1):
        a = turnback_signature(theta_tangle(k, g, mirror))
        b = turnback_signature(theta_tangle(k, h, mirror))
        if a != b:
            diff = []
            for side, x, y in (("top", a.top_matching, b.top_matching),
                               ("bottom", a.bottom_matching, b.bottom_matching)):
                only = sorted(x ^ y)
                if only:
                    diff.append(f"{side} turnback {only[0][0]}-{only[0][1]}")
            d.k = k
            d.witness = diff[0]
            return d
    d.witness = f"no difference up to k={kmax}"
    return d


# -- Kauffman bracket --------------------------------------------------------

def _poly_add(p: dict, q: dict, scale: int = 1, shift: int = 0) -> None:
    for e, c in q.items():
        p[e + shift] = p.get(e + shift, 0) + scale * c
        if p[e + shift] == 0:
            del p[e + shift]


def state_loops(t: Tangle, state) -> int:
    """Number of loops after smoothing each crossing per ``state`` (0 or 1)."""
    uf = _UF()
    labs = t.labels()
    for lab in labs:
        uf.find(lab)
    for (a, b, c, d), s in zip(t.crossings, state):
        if s == 0:
            uf.union(a, b)
            uf.union(c, d)
        else:
            uf.union(a, d)
            uf.union(b, c)
    return len({uf.find(x) for x in labs}) + t.loops


MAX_BRACKET_CROSSINGS = 16


def kauffman_bracket(link: Tangle) -> dict:
    """Bracket as a dict exponent -> coefficient, normalized so the unknot is 1."""
    if link.top or link.bottom:
        raise ValueError("bracket needs a closed diagram")
    n = len(link.crossings)
    if n > MAX_BRACKET_CROSSINGS:
        raise ValueError(f"{n} crossings exceeds the limit of {MAX_BRACKET_CROSSINGS}")
    delta = {2: -1, -2: -1}
    out: dict = {}
    for state in product((0, 1), repeat=n):
        loops = state_loops(link, state)
        ones = sum(state)
        term = {n - 2 * ones: 1}
        for _ in range(loops - 1):
            nxt: dict = {}
            for e, c in term.items():
                _poly_add(nxt, delta, c, e)
            term = nxt
        _poly_add(out, term)
    return out


def invert_variable(p: dict) -> dict:
    return {-e: c for e, c in p.items()}


def poly_str(p: dict, var: str = "A") -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        coef = "" if abs(c) == 1 and e != 0 else str(abs(c))
        mono = coef + ("" if e == 0 else f"{var}^{e}" if e != 1 else var)
        parts.append(("-" if c < 0 else "+") + mono)
    s = " ".join(parts)
    return s[1:] if s.startswith("+") else s


def orient_closed(t: Tangle, flip=()) -> Tangle:
    """Orient a closed diagram by walking each component.

    Components are started at their lowest crossing slot; indices listed in
    ``flip`` reverse the corresponding component.
    """
    if t.top or t.bottom:
        raise ValueError("orient_closed needs a diagram without boundary")
    occ = _occurrences(t)
    inc = [[None] * 4 for _ in t.crossings]
    comp = 0
    for c0 in range(len(t.crossings)):
        for s0 in range(4):
            if inc[c0][s0] is not None:
                continue
            reverse = comp in flip
            comp += 1
            c, s = c0, s0
            while inc[c][s] is None:
                # enter at (c, s), leave through the opposite slot
                inc[c][s] = not reverse
                out = (s + 2) % 4
                inc[c][out] = reverse
                a, b = occ[t.crossings[c][out]]
                nxt = b if a == ("X", c, out) else a
                c, s = nxt[1], nxt[2]
    out = Tangle((), (), t.crossings, t.loops, tuple(tuple(i) for i in inc), (), (), t.names)
    _check_orientation(out)
    return out
