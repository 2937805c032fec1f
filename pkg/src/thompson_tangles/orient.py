"""Orientations of strand diagrams by region signs.

Around a split the region born between the two children carries the opposite
sign of the region on its upper left; around a merge the dying region carries
the opposite sign of the region on its lower left.  Those are the only local
constraints, so an orientation is a two-colouring problem solved by a parity
union-find over region ids.  The rightmost region carries no sign.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import fgroup, strand
from .fgroup import FElement
from .strand import SPLIT, StrandGraph, as_graph
from .tangle import sweep

PLUS, MINUS = 1, -1


class NotOrientable(ValueError):
    def __init__(self, msg, region=None):
        super().__init__(msg)
        self.region = region


class NotInOrientedF(ValueError):
    pass


@dataclass(frozen=True)
class NSign:
    seq: tuple
    generalized: bool = False

    def __post_init__(self):
        if not self.seq:
            raise ValueError("n-sign must be nonempty")
        if any(s not in (PLUS, MINUS) for s in self.seq):
            raise ValueError("signs must be +1 or -1")

    def __len__(self):
        return len(self.seq)

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.seq)

    @property
    def standard(self) -> bool:
        return len(self.seq) < 2 or self.seq[:2] == (PLUS, MINUS)

    @classmethod
    def parse(cls, text: str) -> "NSign":
        seq = []
        for ch in text.strip():
            if ch == "+":
                seq.append(PLUS)
            elif ch in "-−":
                seq.append(MINUS)
            elif ch not in " ,()":
                raise ValueError(f"bad sign character {ch!r}")
        s = tuple(seq)
        return cls(s, generalized=not (len(s) < 2 or s[:2] == (PLUS, MINUS)))

    def to_json(self) -> str:
        return json.dumps(["+" if s > 0 else "-" for s in self.seq])


def double(nu) -> NSign:
    seq = nu.seq if isinstance(nu, NSign) else tuple(nu)
    out = []
    for s in seq:
        out += [s, -s]
    return NSign(tuple(out))


def power_double(k: int, nu=(PLUS,)) -> NSign:
    """The sign 2^k nu."""
    out = NSign(tuple(nu.seq if isinstance(nu, NSign) else nu))
    for _ in range(k):
        out = double(out)
    return out


class _Parity:
    """Union-find where each element stores its parity relative to its root."""

    def __init__(self):
        self.parent = {}
        self.rel = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rel[x] = 1
            return x, 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 1
        for y in reversed(path):
            acc *= self.rel[y]
            self.parent[y] = root
            self.rel[y] = acc
        return (root, self.rel[path[0]]) if path else (root, 1)

    def union(self, a, b, rel) -> bool:
        """Impose sign(a) = rel * sign(b); False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return pa * pb == rel
        self.parent[ra] = rb
        self.rel[ra] = pa * pb * rel
        return True


@dataclass
class OrientedStrandDiagram:
    graph: StrandGraph
    signs: dict          # region id -> +1/-1, rightmost region excluded

    @property
    def base(self) -> strand.StrandDiagram:
        return self.graph.word()

    def _gap_signs(self, gaps) -> NSign:
        return NSign(tuple(self.signs[r] for r in gaps[:-1]))

    @property
    def top_sign(self) -> NSign:
        return self._gap_signs(sweep(self.graph).top_gaps)

    @property
    def bottom_sign(self) -> NSign:
        return self._gap_signs(sweep(self.graph).bottom_gaps)

    def node_sign(self, nid) -> int:
        """+1 for a positive split/merge (positive region on its left)."""
        left, _ = sweep(self.graph).node_regions[nid]
        return self.signs[left]

    def __str__(self):
        return f"{self.base} [{self.top_sign} -> {self.bottom_sign}]"


def propagate(g, leftmost: int = PLUS, top=None, bottom=None, overrides=None) -> OrientedStrandDiagram:
    """Assign region signs from the local split/merge rules.

    ``top`` or ``bottom`` fix boundary signs (an n-sign, without the rightmost
    region); ``overrides`` maps region ids to signs.  Regions left free are
    filled left to right along the top, each opposite to its left neighbour.
    """
    gr = as_graph(g)
    sw = sweep(gr)
    uf = _Parity()
    for r in sw.regions:
        if r.excluded != "right":
            uf.find(r.id)
    for nid in gr.kind:
        left, mid = sw.node_regions[nid]
        if not uf.union(mid, left, -1):
            raise NotOrientable(f"sign clash at region {mid}", mid)
    fixed = {}

    def pin(rid, s):
        root, p = uf.find(rid)
        want = s * p
        if fixed.setdefault(root, want) != want:
            raise NotOrientable(f"sign clash at region {rid}", rid)

    pin(sw.leftmost, leftmost)
    for gaps, seq in ((sw.top_gaps, top), (sw.bottom_gaps, bottom)):
        if seq is None:
            continue
        seq = seq.seq if isinstance(seq, NSign) else tuple(seq)
        if len(seq) != len(gaps) - 1:
            raise ValueError("boundary sign has the wrong length")
        for rid, s in zip(gaps, seq):
            pin(rid, s)
    for rid, s in (overrides or {}).items():
        pin(rid, s)

    def value(rid):
        root, p = uf.find(rid)
        return None if root not in fixed else fixed[root] * p

    for i in range(1, len(sw.top_gaps) - 1):
        rid = sw.top_gaps[i]
        if value(rid) is None:
            pin(rid, -value(sw.top_gaps[i - 1]))
    signs = {}
    for r in sw.regions:
        if r.excluded == "right":
            continue
        v = value(r.id)
        if v is None:
            # unreachable from the top: born at a split whose left is known
            raise NotOrientable(f"region {r.id} left undetermined", r.id)
        signs[r.id] = v
    return OrientedStrandDiagram(gr, signs)


def is_orientable(g) -> bool:
    try:
        propagate(g)
    except NotOrientable:
        return False
    return True


def orientations(g) -> list:
    """Every orientation of g, found by trying all top boundary signs."""
    gr = as_graph(g)
    out = []
    for bits in range(2 ** gr.top):
        seq = tuple(PLUS if (bits >> i) & 1 == 0 else MINUS for i in range(gr.top))
        try:
            o = propagate(gr, leftmost=seq[0], top=seq)
        except NotOrientable:
            continue
        out.append(o)
    return out


def leaf_sign(t) -> NSign:
    """Bottom sign of the positively oriented tree t."""
    return propagate(strand.forest_diagram(t)).bottom_sign


def oriented_theta(k: int, g: FElement) -> OrientedStrandDiagram:
    if not fgroup.is_oriented_member(g):
        raise NotInOrientedF(f"{g} is not in the oriented subgroup")
    word = strand.theta(k, g)
    nu = power_double(k)
    try:
        o = propagate(word, top=nu)
    except NotOrientable as e:
        raise NotInOrientedF(str(e)) from e
    if o.bottom_sign != nu:
        raise NotInOrientedF(f"bottom sign {o.bottom_sign} differs from {nu}")
    return o


def oriented_reduce(og: OrientedStrandDiagram, types=(1, 2)) -> OrientedStrandDiagram:
    top = og.top_sign
    bottom = og.bottom_sign
    red, _ = strand.reduce_graph(og.graph, types=types)
    out = propagate(red, leftmost=top.seq[0], top=top)
    if out.bottom_sign != bottom:
        raise AssertionError("reduction changed the bottom sign")
    return out


def oriented_compose(lower: OrientedStrandDiagram, upper: OrientedStrandDiagram) -> OrientedStrandDiagram:
    if upper.bottom_sign != lower.top_sign:
        raise ValueError(f"sign mismatch: {upper.bottom_sign} vs {lower.top_sign}")
    gr = strand.compose_graphs(lower.graph.prefixed("l."), upper.graph.prefixed("u."))
    top = upper.top_sign
    return propagate(gr, leftmost=top.seq[0], top=top)


def oriented_star(lower, upper) -> OrientedStrandDiagram:
    return oriented_reduce(oriented_compose(lower, upper))


def reflect(og: OrientedStrandDiagram) -> OrientedStrandDiagram:
    gr = strand.reflect_graph(og.graph)
    bottom = og.bottom_sign
    return propagate(gr, leftmost=bottom.seq[0], top=bottom)


def forget(og: OrientedStrandDiagram) -> strand.StrandDiagram:
    return og.base


def split_signs(og: OrientedStrandDiagram) -> dict:
    """Node -> +1/-1 classification of every split and merge."""
    sw = sweep(og.graph)
    return {n: og.signs[sw.node_regions[n][0]] for n in og.graph.kind}


def is_positive_split(og, nid) -> bool:
    return og.graph.kind[nid] == SPLIT and og.node_sign(nid) > 0
