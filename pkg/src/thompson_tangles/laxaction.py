"""The lax action of the oriented Thompson group on truncated complexes.

Everything is realized on strand diagrams.  A complex A is the Khovanov
complex of T(D_A) for an oriented diagram D_A of width 2^k (the identity by
default, giving A = H^(2^k)).  The tensor product over the arc algebra is
realized by stacking tangles, which the contraction ``psi`` identifies with
the tensor product of the factors.  So P_h P_g A, restricted to the summand
(V, U), is the complex of the stack

    D_A
    D_g(U)      level 0
    D_h(V)      level 1

read top to bottom.  Strand composition puts the first factor on top, so the
stack multiplies to hg.  Node names carry their level as a prefix.

The compositor t_{h,g} merges two adjacent levels.  It runs the movie of the
Type II moves that reduce D_g(U) . D_h(V) and renames the result onto the
canonical D_hg(W), where W is the bridge forest.  Maps are computed on
generators and compared as sets, so the axioms are checked on the nose.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import fgroup, khovanov, strand, typetwo
from .fgroup import IDENTITY, FElement, Forest
from .khovanov import Gen, KhTangle
from .orient import NotOrientable, power_double, propagate
from .strand import StrandGraph, as_graph
from .tangle import tangle_of

MAX_BUDGET = 2
EXHAUSTIVE_LIMIT = 10      # crossings up to which every generator is checked


class BudgetError(ValueError):
    pass


# -- decorations ---------------------------------------------------------------

def D_of(d, forest: Forest, k: int = 0):
    """The oriented decoration D(L); raises on bad root count or signs."""
    dec = typetwo.decorate(d, forest)
    nu = power_double(k)
    try:
        o = propagate(dec, top=nu)
    except NotOrientable as e:
        raise typetwo.Incompatible(f"decoration is not orientable: {e}") from e
    if o.bottom_sign != nu:
        raise typetwo.Incompatible(f"decorated bottom sign {o.bottom_sign} differs from {nu}")
    return o


def compatible_forests(d, budget: int, k: int = 0) -> list:
    """Forests with at most ``budget`` carets whose decoration orients."""
    out = []
    for L in fgroup.forests_with_carets(typetwo.waist(d), budget):
        try:
            D_of(d, L, k)
        except typetwo.Incompatible:
            continue
        out.append(L)
    return out


@lru_cache(maxsize=None)
def decorated_graph(g: FElement, k: int, forest: Forest) -> StrandGraph:
    """D_g(L) with canonical node names."""
    return as_graph(typetwo.decorate(strand.theta(k, g), forest)).canonicalized("n")


@dataclass
class TruncatedCStar:
    g: FElement
    k: int
    budget: int
    forests: list

    def summands(self):
        for L in self.forests:
            yield L, decorated_graph(self.g, self.k, L)


def cstar(g: FElement, k: int, budget: int) -> TruncatedCStar:
    if not fgroup.is_oriented_member(g):
        raise typetwo.Incompatible(f"{g} is not in the oriented subgroup")
    if budget > MAX_BUDGET:
        raise khovanov.ResourceGuard(f"caret budget {budget} exceeds {MAX_BUDGET}")
    return TruncatedCStar(g, k, budget, compatible_forests(strand.theta(k, g), budget, k))


# -- stacks ----------------------------------------------------------------------

@dataclass(frozen=True)
class Stack:
    """A summand of P_{g_n} ... P_{g_1} A: the base diagram and the factors top down."""

    base: StrandGraph = field(compare=False, hash=False)
    base_key: str
    factors: tuple            # ((g, forest), ...), level 0 first
    k: int = 0

    def graph(self) -> StrandGraph:
        gr = self.base.prefixed("a.")
        for lvl, (g, L) in enumerate(self.factors):
            gr = strand.compose_graphs(decorated_graph(g, self.k, L).prefixed(f"{lvl}."), gr)
        return gr

    def with_factors(self, factors) -> "Stack":
        return Stack(self.base, self.base_key, tuple(factors), self.k)


def base_stack(base=None, k: int = 0) -> Stack:
    if base is None:
        base = strand.identity(2 ** k)
    gr = as_graph(base).canonicalized("n")
    return Stack(gr, str(gr.word()), (), k)


class Realizer:
    """Builds and caches tangle contexts of graphs under one mirror setting."""

    def __init__(self, mirror: bool = False, graded: bool = False, k: int = 0):
        self.mirror = mirror
        self.graded = graded
        self.nu = power_double(k)
        self._ctx = {}

    def signs(self, gr):
        if not self.graded:
            return None
        return propagate(gr, leftmost=self.nu.seq[0], top=self.nu).signs

    def ctx(self, gr: StrandGraph) -> KhTangle:
        key = (gr.top, tuple(sorted(gr.kind.items())), tuple(sorted(gr.down.items())))
        c = self._ctx.get(key)
        if c is None:
            c = KhTangle(tangle_of(gr, mirror=self.mirror, signs=self.signs(gr)))
            self._ctx[key] = c
        return c

    def stack_ctx(self, s: Stack) -> KhTangle:
        return self.ctx(s.graph())


def rekey(g: Gen, src: KhTangle, tgt: KhTangle, rename) -> Gen:
    """Move a generator between two PD codes of the same picture."""
    v = frozenset(rename(n) for n in g.v)
    anchors = tgt.key_of_anchor(g.b, g.c, v)
    xs = set()
    for key in g.xs:
        if key[0] == "X":
            key = ("X", rename(key[1]), key[2])
        xs.add(anchors[key])
    return Gen(g.b, g.c, v, frozenset(xs))


def _level_rename(shift_from: int, delta: int):
    """Rename ``j.name`` to ``(j+delta).name`` for levels j >= shift_from."""
    def f(n):
        lvl, _, rest = n.partition(".")
        if lvl == "a" or int(lvl) < shift_from:
            return n
        return f"{int(lvl) + delta}.{rest}"
    return f


# -- maps ---------------------------------------------------------------------------

class StackMap:
    """A map from the complex of one stack to another, evaluated on generators.

    ``ops`` records how the map was built (("unit", level) or ("merge", i)),
    so that P_g can rebuild it on a longer stack.
    """

    def __init__(self, src: Stack, tgt: Stack, fn, shift: int = 0, ops: tuple = (),
                 pairs: tuple = (), rename=None):
        self.src, self.tgt, self.fn, self.shift, self.ops = src, tgt, fn, shift, ops
        self.pairs = pairs        # Type II moves (m, s), named as in the source
        self.rename = rename or (lambda n: n)   # source node -> target node or None

    def __call__(self, g: Gen) -> set:
        return self.fn(g)

    def apply(self, vec) -> set:
        out = set()
        for g in vec:
            out ^= self.fn(g)
        return out

    def then(self, other: "StackMap") -> "StackMap":
        if other.src != self.tgt:
            raise ValueError("maps do not compose")
        back = {}
        for n in self.src.graph().kind:
            t = self.rename(n)
            if t is not None:
                back[t] = n
        later = tuple((back[m], back[x]) for m, x in other.pairs)

        def rename(n):
            t = self.rename(n)
            return None if t is None else other.rename(t)

        return StackMap(self.src, other.tgt, lambda g: other.apply(self.fn(g)),
                        self.shift + other.shift, self.ops + other.ops, self.pairs + later, rename)


def identity_map(s: Stack) -> StackMap:
    return StackMap(s, s, lambda g: {g})


def insert_unit(real: Realizer, s: Stack, level: int) -> StackMap:
    """lambda: put the trivial factor (e, no carets) at ``level``."""
    unit = (IDENTITY, Forest.trivial(2 ** s.k))
    tgt = s.with_factors(s.factors[:level] + (unit,) + s.factors[level:])
    # theta(k, e) has no nodes, so the picture is unchanged; only names move
    cs, ct = real.stack_ctx(s), real.stack_ctx(tgt)
    rename = _level_rename(level, 1)
    return StackMap(s, tgt, lambda g: {rekey(g, cs, ct, rename)}, ops=(("unit", level),),
                    rename=rename)


def lambda_map(real: Realizer, s: Stack) -> StackMap:
    """lambda_X : X -> P_e(X), with P_e outermost (the bottom level)."""
    return insert_unit(real, s, len(s.factors))


def merge_levels(real: Realizer, s: Stack, i: int) -> StackMap:
    """t on levels i (g, U, upper) and i+1 (h, V, lower) of the stack."""
    (g, U), (h, V) = s.factors[i], s.factors[i + 1]
    k = s.k
    hg = fgroup.multiply(h, g)
    W = typetwo.bridge_forest(g, h, k, U, V)
    pair = strand.compose_graphs(decorated_graph(h, k, V).prefixed(f"{i + 1}."),
                                 decorated_graph(g, k, U).prefixed(f"{i}."))
    red = typetwo.type2_reduce(pair)
    tgt = s.with_factors(s.factors[:i] + ((hg, W),) + s.factors[i + 2:])
    ctxs, steps, final = khovanov.movie(s.graph(), red.moves, mirror=real.mirror,
                                        signs_of=real.signs if real.graded else None)
    # identify the reduced pair with the canonical D_hg(W)
    target = decorated_graph(hg, k, W)
    got = red.graph.canonical_names("c")
    want = {v: n for n, v in target.canonical_names("c").items()}
    inner = {n: f"{i}.{want[c]}" for n, c in got.items()}
    outer = _level_rename(i + 2, -1)

    def rename(n):
        return inner.get(n) or outer(n)

    src_last = ctxs[-1]
    tgt_ctx = real.stack_ctx(tgt)

    def fn(x: Gen) -> set:
        vec = khovanov.movie_map(steps, {x})
        return {rekey(y, src_last, tgt_ctx, rename) for y in vec}

    gone = {n for pair in red.moves for n in pair}
    return StackMap(s, tgt, fn, shift=-len(red.moves), ops=(("merge", i),),
                    pairs=tuple(red.moves), rename=lambda n: None if n in gone else rename(n))


def t_map(real: Realizer, s: Stack, i: int = 0) -> StackMap:
    return merge_levels(real, s, i)


def stack_generators(real: Realizer, s: Stack, rng: random.Random | None = None,
                     samples: int = 24, pairs=()) -> list:
    """Every generator for small stacks, otherwise a seeded sample.

    Half of a sample is drawn from the support of a movie with moves
    ``pairs``: each move needs exactly one of its two crossings 1-smoothed,
    and uniform samples almost always miss that.
    """
    ctx = real.stack_ctx(s)
    if len(ctx.names) <= EXHAUSTIVE_LIMIT or rng is None:
        return list(ctx.generators())
    out = khovanov.sample_generators(ctx, rng, samples - samples // 2 if pairs else samples)
    paired = {n for p in pairs for n in p}
    for _ in range(samples // 2 if pairs else 0):
        b = rng.choice(ctx.top_matchings)
        c = rng.choice(ctx.bottom_matchings)
        v = {n for n in ctx.names if n not in paired and rng.random() < 0.5}
        v |= {rng.choice(p) for p in pairs}
        v = frozenset(v)
        keys = [k for k, _ in ctx.circles(b, c, v)]
        p = 0.0 if rng.random() < 0.5 else 0.5      # all-1 labels survive every merge
        out.append(Gen(b, c, v, frozenset(k for k in keys if rng.random() < p)))
    return out


# -- axioms ---------------------------------------------------------------------------

@dataclass
class Report:
    name: str
    checked: int = 0
    nonzero: int = 0
    failures: list = field(default_factory=list)
    summands: int = 0
    sampled: int = 0
    max_w_carets: int = 0
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"axiom": self.name, "pass": self.ok, "generators": self.checked, "nonzero_images": self.nonzero,
                "summands": self.summands, "sampled_summands": self.sampled,
                "max_bridge_carets": self.max_w_carets,
                "failures": self.failures[:5], "seconds": round(self.seconds, 3)}


def _compare(rep: Report, left: StackMap, right: StackMap, gens, label):
    if left.tgt != right.tgt:
        rep.failures.append({"summand": label, "reason": "different target summands"})
        return
    for x in gens:
        rep.checked += 1
        a, b = left(x), right(x)
        if a:
            rep.nonzero += 1
        if a != b:
            rep.failures.append({"summand": label, "generator": repr(x)})
            return


def _label(s: Stack) -> str:
    return " | ".join(f"{g} [{L}]" for g, L in s.factors)


def verify_unit(g: FElement, k: int = 0, budget: int = 0, mirror: bool = False,
                base=None, seed: int = 0) -> Report:
    """t_{e,g} . lambda_{P_g A} = Id and t_{g,e} . P_g(lambda_A) = Id."""
    t0 = time.time()
    rep = Report(f"unit g={g}")
    real = Realizer(mirror=mirror, k=k)
    rng = random.Random(seed)
    a = base_stack(base, k)
    for U in cstar(g, k, budget).forests:
        s = a.with_factors(((g, U),))
        rep.summands += 1
        gens = stack_generators(real, s, rng)
        ident = StackMap(s, s, lambda x: {x})
        left = lambda_map(real, s).then(merge_levels(real, lambda_map(real, s).tgt, 0))
        _compare(rep, left, ident, gens, _label(s) + " (left unit)")
        up = insert_unit(real, s, 0)
        right = up.then(merge_levels(real, up.tgt, 0))
        _compare(rep, right, ident, gens, _label(s) + " (right unit)")
    rep.seconds = time.time() - t0
    return rep


def verify_assoc(f: FElement, g: FElement, h: FElement, k: int = 0, budget: int = 0,
                 mirror: bool = False, base=None, seed: int = 0,
                 max_summands: int | None = None) -> Report:
    """t_{hg,f} (t_{h,g} x id) = t_{h,gf} (id x t_{g,f}) on every summand triple."""
    t0 = time.time()
    rep = Report(f"assoc f={f} g={g} h={h}")
    real = Realizer(mirror=mirror, k=k)
    rng = random.Random(seed)
    a = base_stack(base, k)
    triples = [(U, V, X) for U in cstar(f, k, budget).forests
               for V in cstar(g, k, budget).forests for X in cstar(h, k, budget).forests]
    if max_summands is not None and len(triples) > max_summands:
        rep.sampled = max_summands
        triples = [triples[0]] + rng.sample(triples[1:], max_summands - 1)
    for U, V, X in triples:
        s = a.with_factors(((f, U), (g, V), (h, X)))
        rep.summands += 1
        lower = merge_levels(real, s, 1)
        left = lower.then(merge_levels(real, lower.tgt, 0))
        upper = merge_levels(real, s, 0)
        right = upper.then(merge_levels(real, upper.tgt, 0))
        gens = stack_generators(real, s, rng, pairs=left.pairs)
        rep.max_w_carets = max(rep.max_w_carets, left.tgt.factors[0][1].carets,
                               lower.tgt.factors[1][1].carets, upper.tgt.factors[0][1].carets)
        _compare(rep, left, right, gens, _label(s))
    rep.seconds = time.time() - t0
    return rep


def verify_chain_map(m: StackMap, real: Realizer) -> bool:
    """d-commutation of a stack map, on the full source complex."""
    cs, ct = real.stack_ctx(m.src), real.stack_ctx(m.tgt)
    for x in cs.generators():
        if m.apply(cs.d(x)) != ct.d_vec(m(x)):
            return False
    return True


# -- tensor products and P_g ---------------------------------------------------------

def P_apply(g: FElement, s: Stack, budget: int = 0) -> list:
    """The summands of P_g applied to the stack s (one per compatible forest)."""
    return [s.with_factors(s.factors + ((g, L),)) for L in cstar(g, s.k, budget).forests]


def replay(real: Realizer, s: Stack, ops) -> StackMap:
    """Rebuild a recipe of units and merges starting from stack s."""
    out = identity_map(s)
    for op, where in ops:
        cur = out.tgt
        step = insert_unit(real, cur, where) if op == "unit" else merge_levels(real, cur, where)
        out = out.then(step)
    return out


def P_map(m: StackMap, g: FElement, L: Forest, real: Realizer) -> StackMap:
    """P_g(m) = id (x) m on the summand with forest L.

    P_g adds its factor below the others, and m only touches the upper
    levels, so the same recipe applies to the longer stack.
    """
    src = m.src.with_factors(m.src.factors + ((g, L),))
    return replay(real, src, m.ops)


# -- q-shift structure ------------------------------------------------------------------

def shift_decomposition(base: dict, other: dict):
    """Write ``other`` as a sum of q-shifted copies of ``base``; None if impossible.

    Both are (h, q) -> rank tables.  Returns a dict shift -> multiplicity.
    """
    if not base:
        return {} if not other else None
    rest = dict(other)
    bmin = min(q for _, q in base)
    lead = [(h, q) for h, q in base if q == bmin]
    shifts = {}
    while rest:
        qmin = min(q for _, q in rest)
        s = qmin - bmin
        mult = min((rest.get((h, q + s), 0) // base[(h, q)]) for h, q in lead)
        if mult <= 0:
            return None
        for (h, q), r in base.items():
            key = (h, q + s)
            val = rest.get(key, 0) - mult * r
            if val < 0:
                return None
            if val:
                rest[key] = val
            else:
                rest.pop(key, None)
        shifts[s] = shifts.get(s, 0) + mult
    return shifts


def summand_homology(g: FElement, k: int, L: Forest, mirror: bool = False) -> dict:
    real = Realizer(mirror=mirror, graded=True, k=k)
    gr = decorated_graph(g, k, L)
    ctx = real.ctx(gr)
    return khovanov.homology(khovanov.complex_of(ctx))


def shift_report(g: FElement, k: int = 0, budget: int = 1, mirror: bool = False) -> dict:
    cs = cstar(g, k, budget)
    base = summand_homology(g, k, Forest.trivial(typetwo.waist(strand.theta(k, g))), mirror)
    out = {"element": str(g), "base": {f"{h},{q}": r for (h, q), r in sorted(base.items())},
           "summands": []}
    for L in cs.forests:
        if L.carets == 0:
            continue
        hom = summand_homology(g, k, L, mirror)
        out["summands"].append({"forest": str(L), "shifts": shift_decomposition(base, hom)})
    out["pass"] = all(s["shifts"] is not None for s in out["summands"])
    return out


# -- search helpers ---------------------------------------------------------------------

def short_oriented_elements(count: int = 2, max_length: int = 6, k: int = 0) -> list:
    """The ``count`` nontrivial oriented elements with the smallest Theta_k diagrams."""
    import itertools
    gens = ["x0", "x0^-1", "x1", "x1^-1"]
    found = {}
    for n in range(1, max_length + 1):
        for w in itertools.product(gens, repeat=n):
            g = fgroup.parse_element(" ".join(w))
            if g != IDENTITY and fgroup.is_oriented_member(g) and g not in found:
                found[g] = " ".join(w)
    ranked = sorted(found, key=lambda g: (len(as_graph(strand.theta(k, g)).kind), len(found[g]), found[g]))
    return [(found[g], g) for g in ranked[:count]]


def reports_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


# -- independence of the movie ----------------------------------------------------------

def height_two_pairs(max_nodes: int = 8, budget: int = 2, k: int = 0) -> list:
    """Compositions D_g(U) over D_h(V) of decorated Theta_k images, height <= 2.

    Only e is oriented at height <= 2, so the unoriented decorations of x0
    and its inverse are included too; movie maps do not depend on signs.
    """
    from itertools import product
    els = set()
    for n in range(1, 5):
        ts = [t for group in fgroup.trees_by_sign(n, 2).values() for t in group]
        for a, b in product(ts, ts):
            els.add(FElement.from_pair(a, b))
    out = []
    for g in sorted(els, key=str):
        for h in sorted(els, key=str):
            for U in fgroup.forests_with_carets(typetwo.waist(strand.theta(k, g)), budget):
                dg = decorated_graph(g, k, U)
                if len(dg.kind) > max_nodes:
                    continue
                for V in fgroup.forests_with_carets(typetwo.waist(strand.theta(k, h)), budget):
                    dh = decorated_graph(h, k, V)
                    if len(dg.kind) + len(dh.kind) > max_nodes:
                        continue
                    out.append((g, U, h, V, strand.compose_graphs(dh.prefixed("1."), dg.prefixed("0."))))
    return out


def movie_independence(gr: StrandGraph, mirror: bool = False) -> dict:
    """Compare the movie maps of all maximal Type II sequences on every generator."""
    seqs = typetwo.type2_sequences(gr)
    ctx = KhTangle(tangle_of(gr, mirror=mirror))
    gens = list(ctx.generators())
    reference = None
    nonzero = 0
    for seq in seqs:
        _, steps, _ = khovanov.movie(gr, seq, mirror=mirror)
        images = [frozenset(khovanov.movie_map(steps, {x})) for x in gens]
        if reference is None:
            reference = images
            nonzero = sum(1 for im in images if im)
        elif images != reference:
            return {"sequences": len(seqs), "equal": False, "generators": len(gens), "nonzero": nonzero}
    return {"sequences": len(seqs), "equal": True, "generators": len(gens), "nonzero": nonzero}
