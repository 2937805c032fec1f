"""Strand diagrams, their isotopy normal form, and Type I/II reduction.

A diagram is stored two ways.  ``StrandDiagram`` is the immutable layered
word (one split or merge per layer, read top to bottom).  ``StrandGraph`` is
the embedded graph with named nodes; rewriting happens there, because node
names survive moves and that is what the chain-level machinery keys on.

Edges are identified by their endpoints.  An endpoint is ``("T", i)`` for the
i-th top point, ``("B", j)`` for the j-th bottom point, or ``(node, port)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import fgroup
from .fgroup import FElement, Forest, is_leaf

SPLIT = "s"
MERGE = "m"


class WidthMismatch(ValueError):
    pass


class NotReduced(ValueError):
    pass


# -- layered words -----------------------------------------------------------

@dataclass(frozen=True)
class StrandDiagram:
    top: int
    layers: tuple = ()

    def __post_init__(self):
        w = self.top
        if w < 1:
            raise ValueError("top width must be positive")
        for kind, pos in self.layers:
            if kind == SPLIT:
                if not 0 <= pos < w:
                    raise ValueError(f"split at {pos} invalid for width {w}")
                w += 1
            elif kind == MERGE:
                if not 0 <= pos < w - 1:
                    raise ValueError(f"merge at {pos} invalid for width {w}")
                w -= 1
            else:
                raise ValueError(f"unknown node kind {kind!r}")

    @property
    def bottom(self) -> int:
        w = self.top
        for kind, _ in self.layers:
            w += 1 if kind == SPLIT else -1
        return w

    @property
    def nodes(self) -> int:
        return len(self.layers)

    def widths(self) -> list[int]:
        out = [self.top]
        for kind, _ in self.layers:
            out.append(out[-1] + (1 if kind == SPLIT else -1))
        return out

    def __str__(self):
        return f"{self.top}; " + " ".join(f"{k}{p}" for k, p in self.layers)

    def to_json(self) -> str:
        return json.dumps({"top": self.top, "layers": [f"{k}{p}" for k, p in self.layers]})

    @classmethod
    def parse(cls, text: str) -> "StrandDiagram":
        head, _, body = text.partition(";")
        layers = tuple((tok[0], int(tok[1:])) for tok in body.split())
        return cls(int(head), layers)

    @classmethod
    def identity(cls, n: int) -> "StrandDiagram":
        return cls(n, ())

    def graph(self, prefix: str = "n") -> "StrandGraph":
        return StrandGraph.from_word(self, prefix)

    def counts(self) -> tuple[int, int]:
        s = sum(1 for k, _ in self.layers if k == SPLIT)
        return s, len(self.layers) - s


def identity(n: int) -> StrandDiagram:
    return StrandDiagram.identity(n)


# -- graphs ------------------------------------------------------------------

@dataclass
class StrandGraph:
    """Planar strand diagram as a graph with named nodes and ordered ports."""

    top: int
    bottom: int
    kind: dict = field(default_factory=dict)   # node -> SPLIT | MERGE
    ins: dict = field(default_factory=dict)    # node -> [endpoint of feeding edge]
    outs: dict = field(default_factory=dict)   # node -> [endpoint the out edge goes to]
    # every edge is a pair (src, dst); src is ("T", i) or (node, outport)
    # and dst is ("B", j) or (node, inport).  ``down`` maps src -> dst.
    down: dict = field(default_factory=dict)
    up: dict = field(default_factory=dict)

    def copy(self) -> "StrandGraph":
        return StrandGraph(self.top, self.bottom, dict(self.kind),
                           {k: list(v) for k, v in self.ins.items()},
                           {k: list(v) for k, v in self.outs.items()},
                           dict(self.down), dict(self.up))

    # construction

    @classmethod
    def from_word(cls, word: StrandDiagram, prefix: str = "n") -> "StrandGraph":
        g = cls(word.top, word.bottom)
        frontier = [("T", i) for i in range(word.top)]
        for idx, (kind, pos) in enumerate(word.layers):
            nid = f"{prefix}{idx}"
            g.kind[nid] = kind
            if kind == SPLIT:
                g._link(frontier[pos], (nid, 0))
                frontier[pos:pos + 1] = [(nid, 0), (nid, 1)]
            else:
                g._link(frontier[pos], (nid, 0))
                g._link(frontier[pos + 1], (nid, 1))
                frontier[pos:pos + 2] = [(nid, 0)]
        for j, src in enumerate(frontier):
            g._link(src, ("B", j))
        return g

    def _link(self, src, dst):
        self.down[src] = dst
        self.up[dst] = src

    @property
    def nodes(self) -> int:
        return len(self.kind)

    def edges(self):
        return list(self.down.items())

    def in_ports(self, nid) -> int:
        return 1 if self.kind[nid] == SPLIT else 2

    def out_ports(self, nid) -> int:
        return 2 if self.kind[nid] == SPLIT else 1

    def renamed(self, rename) -> "StrandGraph":
        def ep(e):
            return e if e[0] in ("T", "B") else (rename(e[0]), e[1])
        g = StrandGraph(self.top, self.bottom)
        g.kind = {rename(k): v for k, v in self.kind.items()}
        for s, d in self.down.items():
            g._link(ep(s), ep(d))
        return g

    def prefixed(self, prefix: str) -> "StrandGraph":
        return self.renamed(lambda n: prefix + n)

    # moves

    def type1_redexes(self) -> list:
        out = []
        for nid, k in self.kind.items():
            if k == SPLIT:
                d0, d1 = self.down[(nid, 0)], self.down[(nid, 1)]
                if d0[0] == d1[0] and d0[0] not in ("T", "B") and self.kind[d0[0]] == MERGE:
                    out.append((nid, d0[0]))
        return out

    def type2_redexes(self) -> list:
        out = []
        for nid, k in self.kind.items():
            if k == MERGE:
                d = self.down[(nid, 0)]
                if d[0] not in ("T", "B") and self.kind[d[0]] == SPLIT:
                    out.append((nid, d[0]))
        return out

    def apply_type1(self, s, m):
        """Cancel the bigon formed by split s and merge m below it."""
        assert self.kind[s] == SPLIT and self.kind[m] == MERGE
        assert self.down[(s, 0)] == (m, 0) and self.down[(s, 1)] == (m, 1)
        src = self.up.pop((s, 0))
        dst = self.down.pop((m, 0))
        for key in ((s, 0), (s, 1)):
            self.up.pop(self.down.pop(key))
        self.up.pop(dst)
        self.down.pop(src)
        self._link(src, dst)
        del self.kind[s], self.kind[m]

    def apply_type2(self, m, s):
        """Replace merge m feeding split s by two parallel strands."""
        assert self.kind[m] == MERGE and self.kind[s] == SPLIT
        assert self.down[(m, 0)] == (s, 0)
        a, b = self.up.pop((m, 0)), self.up.pop((m, 1))
        c, d = self.down.pop((s, 0)), self.down.pop((s, 1))
        self.down.pop((m, 0))
        self.up.pop((s, 0))
        for x in (a, b):
            self.down.pop(x)
        for y in (c, d):
            self.up.pop(y)
        self._link(a, c)
        self._link(b, d)
        del self.kind[m], self.kind[s]

    def is_type2_reduced(self) -> bool:
        return not self.type2_redexes()

    def is_reduced(self) -> bool:
        return not self.type1_redexes() and not self.type2_redexes()

    # scheduling

    def schedule(self, prefer=None) -> list:
        """Layer the graph: list of (node, pos) in emission order.

        The default is the canonical leftmost-first schedule.  ``prefer`` may be
        ``SPLIT`` or ``MERGE`` to emit every ready node of that kind first;
        ``None`` is returned when such a layering does not exist.
        """
        frontier = [("T", i) for i in range(self.top)]
        order = []
        remaining = len(self.kind)
        while remaining:
            chosen = None
            fallback = None
            for i, src in enumerate(frontier):
                dst = self.down[src]
                nid = dst[0]
                if nid == "B":
                    continue
                if self.kind[nid] == SPLIT:
                    ready = True
                else:
                    ready = dst[1] == 0 and i + 1 < len(frontier) and self.down[frontier[i + 1]] == (nid, 1)
                if not ready:
                    continue
                if prefer is None or self.kind[nid] == prefer:
                    chosen = (nid, i)
                    break
                if fallback is None:
                    fallback = (nid, i)
            if chosen is None:
                if fallback is None:
                    raise ValueError("graph has no valid layering")
                if prefer is not None:
                    # committing to the other kind is only allowed once the
                    # preferred kind is exhausted
                    if any(k == prefer for n, k in self.kind.items() if n not in {o for o, _ in order}):
                        return None
                chosen = fallback
            nid, i = chosen
            order.append((nid, i))
            if self.kind[nid] == SPLIT:
                frontier[i:i + 1] = [(nid, 0), (nid, 1)]
            else:
                frontier[i:i + 2] = [(nid, 0)]
            remaining -= 1
        return order

    def word(self) -> StrandDiagram:
        return StrandDiagram(self.top, tuple((self.kind[n], p) for n, p in self.schedule()))

    def canonical(self) -> "CanonicalWord":
        return CanonicalWord(self.top, tuple((self.kind[n], p) for n, p in self.schedule()))

    def canonical_names(self, prefix: str = "n") -> dict:
        return {nid: f"{prefix}{i}" for i, (nid, _) in enumerate(self.schedule())}

    def canonicalized(self, prefix: str = "n") -> "StrandGraph":
        names = self.canonical_names(prefix)
        return self.renamed(names.__getitem__)


@dataclass(frozen=True)
class CanonicalWord:
    top: int
    layers: tuple

    def __str__(self):
        return str(StrandDiagram(self.top, self.layers))

    def diagram(self) -> StrandDiagram:
        return StrandDiagram(self.top, self.layers)


def as_graph(x, prefix: str = "n") -> StrandGraph:
    if isinstance(x, StrandGraph):
        return x
    return StrandGraph.from_word(x, prefix)


def as_word(x) -> StrandDiagram:
    if isinstance(x, StrandDiagram):
        return x
    return x.word()


# -- operations --------------------------------------------------------------

def compose_graphs(lower: StrandGraph, upper: StrandGraph) -> StrandGraph:
    """Place ``lower`` below ``upper``; node names must be disjoint."""
    if upper.bottom != lower.top:
        raise WidthMismatch(f"cannot stack width {upper.bottom} onto width {lower.top}")
    if set(upper.kind) & set(lower.kind):
        raise ValueError("node names collide")
    g = StrandGraph(upper.top, lower.bottom)
    g.kind = {**upper.kind, **lower.kind}
    for s, d in upper.down.items():
        if d[0] != "B":
            g._link(s, d)
    for s, d in lower.down.items():
        if s[0] != "T":
            g._link(s, d)
    for j in range(upper.bottom):
        g._link(upper.up[("B", j)], lower.down[("T", j)])
    return g


def compose(g2, g1) -> StrandDiagram:
    """g2 o g1: g2 placed below g1."""
    a, b = as_word(g1), as_word(g2)
    if a.bottom != b.top:
        raise WidthMismatch(f"bottom width {a.bottom} does not match top width {b.top}")
    return StrandDiagram(a.top, a.layers + b.layers)


def reflect(g) -> StrandDiagram:
    w = as_word(g)
    flipped = tuple((MERGE if k == SPLIT else SPLIT, p) for k, p in reversed(w.layers))
    return StrandDiagram(w.bottom, flipped)


def reflect_graph(g: StrandGraph) -> StrandGraph:
    out = StrandGraph(g.bottom, g.top)
    out.kind = {n: (MERGE if k == SPLIT else SPLIT) for n, k in g.kind.items()}

    def flip(e):
        if e[0] == "T":
            return ("B", e[1])
        if e[0] == "B":
            return ("T", e[1])
        return e

    for s, d in g.down.items():
        out._link(flip(d), flip(s))
    return out


def canonicalize(g) -> CanonicalWord:
    return as_graph(g).canonical()


def reduce_graph(g: StrandGraph, rng: random.Random | None = None, types=(1, 2)) -> tuple[StrandGraph, list]:
    """Apply Type I/II moves until none remain; returns (graph, moves).

    With ``rng`` the next move is drawn at random from all available redexes,
    otherwise the first one found is taken.  Moves are ``(type, upper, lower)``.
    """
    g = g.copy()
    moves = []
    fuel = (len(g.kind) + 1) ** 2
    while True:
        redexes = []
        if 1 in types:
            redexes += [(1, s, m) for s, m in g.type1_redexes()]
        if 2 in types:
            redexes += [(2, m, s) for m, s in g.type2_redexes()]
        if not redexes:
            return g, moves
        fuel -= 1
        if fuel < 0:
            raise RuntimeError("reduction did not terminate")
        mv = rng.choice(redexes) if rng is not None else redexes[0]
        if mv[0] == 1:
            g.apply_type1(mv[1], mv[2])
        else:
            g.apply_type2(mv[1], mv[2])
        moves.append(mv)


def reduce(g, rng: random.Random | None = None) -> StrandDiagram:
    red, _ = reduce_graph(as_graph(g), rng)
    return red.word()


def star(g2, g1) -> StrandDiagram:
    """Stack g2 below g1 and reduce."""
    return reduce(compose(g2, g1))


def equal(a, b) -> bool:
    return canonicalize(a) == canonicalize(b)


# -- trees and forests as diagrams -------------------------------------------

def forest_diagram(f) -> StrandDiagram:
    """A forest (or a single tree) growing downward as an all-splits diagram."""
    trees = f.trees if isinstance(f, Forest) else (f,)
    layers = []
    offset = 0

    def walk(t, pos):
        if is_leaf(t):
            return 1
        layers.append((SPLIT, pos))
        n = walk(t[0], pos)
        return n + walk(t[1], pos + n)

    for t in trees:
        offset += walk(t, offset)
    return StrandDiagram(len(trees), tuple(layers))


def symmetric_tree(k: int) -> StrandDiagram:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return forest_diagram(fgroup.symmetric(k))


def right_vine(n: int) -> StrandDiagram:
    if n < 1:
        raise ValueError("n must be positive")
    return forest_diagram(fgroup.right_vine_tree(n))


def delta(g: FElement) -> StrandDiagram:
    """The tree-pair diagram: dom's splits above the reflected ran."""
    return compose(reflect(forest_diagram(g.ran)), forest_diagram(g.dom))


def theta(k: int, g: FElement) -> StrandDiagram:
    """Conjugate of the tree-pair diagram by the symmetric tree with 2**k leaves."""
    s = symmetric_tree(k)
    return reduce(compose(s, compose(delta(g), reflect(s))))


def split_forest_of(word: StrandDiagram) -> Forest:
    """Read an all-splits diagram back as a forest."""
    trees = [fgroup.LEAF] * word.top
    # paths from each current strand to its root position in the forest
    where = [(i, ()) for i in range(word.top)]
    for kind, pos in word.layers:
        if kind != SPLIT:
            raise ValueError("diagram contains a merge")
        root, path = where[pos]
        trees[root] = _graft_at(trees[root], path)
        where[pos:pos + 1] = [(root, path + (0,)), (root, path + (1,))]
    return Forest(tuple(trees))


def _graft_at(t, path):
    if not path:
        assert is_leaf(t)
        return (fgroup.LEAF, fgroup.LEAF)
    if path[0] == 0:
        return (_graft_at(t[0], path[1:]), t[1])
    return (t[0], _graft_at(t[1], path[1:]))


def biforest_decompose(g):
    """Split a reduced biforest into (merge part on top, split part below).

    Returns ``None`` when the diagram is not a biforest.
    """
    gr = as_graph(g)
    if not gr.is_reduced():
        raise NotReduced("biforest decomposition needs a reduced diagram")
    order = gr.schedule(prefer=MERGE)
    if order is None:
        return None
    kinds = [gr.kind[n] for n, _ in order]
    nm = kinds.count(MERGE)
    if any(k == SPLIT for k in kinds[:nm]):
        return None
    layers = tuple((gr.kind[n], p) for n, p in order)
    merges = StrandDiagram(gr.top, layers[:nm])
    splits = StrandDiagram(merges.bottom, layers[nm:])
    return merges, splits


def split_merge_decompose(g):
    """Layer a Type II-reduced diagram as (splits on top, merges below)."""
    gr = as_graph(g)
    order = gr.schedule(prefer=SPLIT)
    if order is None:
        raise NotReduced("diagram has a merge feeding a split")
    layers = tuple((gr.kind[n], p) for n, p in order)
    ns = sum(1 for k, _ in layers if k == SPLIT)
    if any(k == SPLIT for k, _ in layers[ns:]):
        raise NotReduced("diagram has a merge feeding a split")
    splits = StrandDiagram(gr.top, layers[:ns])
    merges = StrandDiagram(splits.bottom, layers[ns:])
    return splits, merges


# -- random diagrams and commutation shuffles --------------------------------

def random_diagram(rng: random.Random, nodes: int, top: int | None = None,
                   max_width: int = 6) -> StrandDiagram:
    w = top if top is not None else rng.randint(1, 4)
    start = w
    layers = []
    for _ in range(nodes):
        can_merge = w >= 2
        can_split = w < max_width
        if can_split and (not can_merge or rng.random() < 0.5):
            pos = rng.randrange(w)
            layers.append((SPLIT, pos))
            w += 1
        else:
            pos = rng.randrange(w - 1)
            layers.append((MERGE, pos))
            w -= 1
    return StrandDiagram(start, tuple(layers))


def _span(kind, pos):
    """Strand interval [lo, hi) touched above and below the node."""
    if kind == SPLIT:
        return (pos, pos + 1), (pos, pos + 2)
    return (pos, pos + 2), (pos, pos + 1)


def commute_adjacent(word: StrandDiagram, i: int) -> StrandDiagram | None:
    """Swap layers i and i+1 when they act on disjoint strands, else None."""
    (k1, p1), (k2, p2) = word.layers[i], word.layers[i + 1]
    _, (lo1, hi1) = _span(k1, p1)
    (lo2, hi2), _ = _span(k2, p2)
    d1 = 1 if k1 == SPLIT else -1
    d2 = 1 if k2 == SPLIT else -1
    if hi2 <= lo1:
        # second node lies wholly left of the first one's outputs
        new = ((k2, p2), (k1, p1 + d2))
    elif lo2 >= hi1:
        new = ((k2, p2 - d1), (k1, p1))
    else:
        return None
    layers = word.layers[:i] + new + word.layers[i + 2:]
    return StrandDiagram(word.top, layers)


def shuffle(word: StrandDiagram, rng: random.Random, steps: int = 50) -> StrandDiagram:
    """Random walk through far-commutations of adjacent layers."""
    w = word
    if len(w.layers) < 2:
        return w
    for _ in range(steps):
        i = rng.randrange(len(w.layers) - 1)
        nxt = commute_adjacent(w, i)
        if nxt is not None:
            w = nxt
    return w
