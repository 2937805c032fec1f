"""Type II calculus: admissible paths, Type II reduction and bridge carets.

A Type II move deletes a merge feeding straight into a split.  Reducing with
Type II moves alone reaches a unique diagram, and the moves used are exactly
the (merge, split) pairs joined by an admissible path: a downward path that
starts by entering a merge and whose word in l, r pairs off like brackets,
every split exit undoing the latest unmatched merge entry.  Free-group
triviality alone is too weak: ``l^-1 l`` (a split then a merge) cancels in
the free group but is never produced by Type II moves.  The running exponent
sum of an admissible word is a Dyck path.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from . import fgroup, strand
from .fgroup import FElement, Forest
from .strand import MERGE, StrandGraph, as_graph


class NotTypeTwoReduced(ValueError):
    pass


class Incompatible(ValueError):
    pass


@dataclass(frozen=True)
class AdmissiblePath:
    merge: str
    split: str
    nodes: tuple      # node names along the path, merge first
    word: tuple       # letters like ("l", 1) or ("r", -1)

    @property
    def pair(self) -> tuple:
        return (self.merge, self.split)

    def word_str(self) -> str:
        return " ".join(a if e > 0 else f"{a}^-1" for a, e in self.word)


def dyck_profile(p) -> tuple:
    """Running exponent sums along the word."""
    word = p.word if isinstance(p, AdmissiblePath) else p
    out, w = [], 0
    for _, e in word:
        w += e
        out.append(w)
    return tuple(out)


def free_reduce(word) -> tuple:
    stack = []
    for a, e in word:
        if stack and stack[-1] == (a, -e):
            stack.pop()
        else:
            stack.append((a, e))
    return tuple(stack)


def admissible_paths(g) -> list:
    """All admissible paths of g, one per (starting port, route)."""
    gr = as_graph(g)
    found = []

    def walk(src, nodes, word, stack, weight):
        dst = gr.down[src]
        nid, port = dst
        if nid == "B":
            return
        letter = "l" if port == 0 else "r"
        if gr.kind[nid] == MERGE:
            step = (letter, 1)
            walk((nid, 0), nodes + (nid,), word + (step,), stack + [letter], weight + 1)
            return
        for out_port, out_letter in ((0, "l"), (1, "r")):
            # an exit must undo the most recent unmatched entry
            if stack[-1] != out_letter:
                continue
            nstack = stack[:-1]
            step = (out_letter, -1)
            nword = word + (step,)
            if weight - 1 == 0:
                if not nstack:
                    found.append(AdmissiblePath(nodes[0], nid, nodes + (nid,), nword))
                continue
            walk((nid, out_port), nodes + (nid,), nword, nstack, weight - 1)

    for m, kind in gr.kind.items():
        if kind != MERGE:
            continue
        for port, letter in ((0, "l"), (1, "r")):
            walk((m, 0), (m,), ((letter, 1),), [letter], 1)
    return found


def move_pairs(g) -> set:
    return {p.pair for p in admissible_paths(g)}


def interlaced(p: AdmissiblePath, q: AdmissiblePath) -> bool:
    """True when the two paths share exactly one endpoint of each."""
    shared = set(p.nodes) & set(q.nodes)
    ends_p = {p.merge, p.split} & shared
    ends_q = {q.merge, q.split} & shared
    return len(shared) == 1 and len(ends_p) == 1 and len(ends_q) == 1 and ends_p != ends_q


@dataclass
class TypeTwoResult:
    graph: StrandGraph
    moves: list       # (merge, split) pairs in the order applied

    @property
    def result(self) -> strand.StrandDiagram:
        return self.graph.word()

    def moves_json(self) -> str:
        return json.dumps([list(m) for m in self.moves])


def type2_reduce(g, rng: random.Random | None = None) -> TypeTwoResult:
    red, moves = strand.reduce_graph(as_graph(g), rng, types=(2,))
    return TypeTwoResult(red, [(m, s) for _, m, s in moves])


def is_type2_reduced(g) -> bool:
    return as_graph(g).is_type2_reduced()


def dot_compose(lam, gam, lam_prefix: str = "u.", gam_prefix: str = "g.") -> TypeTwoResult:
    """Lambda . Gamma: stack lam below gam and apply Type II moves only."""
    lg, gg = as_graph(lam), as_graph(gam)
    if not lg.is_type2_reduced() or not gg.is_type2_reduced():
        raise NotTypeTwoReduced("dot_compose needs Type II-reduced inputs")
    both = strand.compose_graphs(lg.prefixed(lam_prefix), gg.prefixed(gam_prefix))
    return type2_reduce(both)


# -- decorations -------------------------------------------------------------

def forest_pair(d):
    """A Type II-reduced diagram as (top split forest, bottom merge forest)."""
    splits, merges = strand.split_merge_decompose(d)
    return strand.split_forest_of(splits), strand.split_forest_of(strand.reflect(merges))


def decorate(d, forest: Forest) -> strand.StrandDiagram:
    """D(L): graft L at the waist of D and mirror it back, F1* L* L F2."""
    splits, merges = strand.split_merge_decompose(d)
    if forest.roots != splits.bottom:
        raise Incompatible(f"forest has {forest.roots} roots, waist has {splits.bottom} strands")
    ld = strand.forest_diagram(forest)
    return strand.compose(merges, strand.compose(strand.reflect(ld), strand.compose(ld, splits)))


def waist(d) -> int:
    splits, _ = strand.split_merge_decompose(d)
    return splits.bottom


def bridge_forest(g: FElement, h: FElement, k: int, U: Forest, V: Forest) -> Forest:
    """The W with Theta_k(h)(V) . Theta_k(g)(U) = Theta_k(hg)(W)."""
    dg = decorate(strand.theta(k, g), U)
    dh = decorate(strand.theta(k, h), V)
    prod = dot_compose(dh, dg).graph
    target = strand.theta(k, fgroup.multiply(h, g))
    top_target, _ = forest_pair(target)
    top_prod, _ = forest_pair(prod)
    subtrees = []
    for t, finer in zip(top_target.trees, top_prod.trees):
        try:
            subtrees += fgroup.subtrees_at_leaves(t, finer)
        except ValueError as e:
            raise Incompatible("product does not refine the target's split forest") from e
    w = Forest(tuple(subtrees))
    if not strand.equal(decorate(target, w), prod):
        raise Incompatible("carets do not sit on bridges of the target")
    return w


def type2_sequences(g, limit: int = 100000) -> list:
    """Every maximal sequence of Type II moves from g, as lists of (m, s)."""
    out = []

    def walk(gr, done):
        red = gr.type2_redexes()
        if not red:
            out.append(list(done))
            return
        for m, s in red:
            if len(out) >= limit:
                return
            nxt = gr.copy()
            nxt.apply_type2(m, s)
            walk(nxt, done + [(m, s)])

    walk(as_graph(g), [])
    return out
