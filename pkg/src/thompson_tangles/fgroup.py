"""Thompson's group F as reduced pairs of planar binary trees.

Trees are immutable nested tuples: a leaf is ``LEAF`` (the empty tuple) and an
internal node is a pair ``(left, right)``.  The text syntax uses ``*`` for a
leaf and ``(left right)`` for a node.
"""

from __future__ import annotations

import json
import random
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

LEAF: tuple = ()


class ParseError(ValueError):
    pass


# -- trees -------------------------------------------------------------------

def is_leaf(t) -> bool:
    return t == LEAF


def node(left, right) -> tuple:
    return (left, right)


@lru_cache(maxsize=None)
def leaves(t) -> int:
    if is_leaf(t):
        return 1
    return leaves(t[0]) + leaves(t[1])


@lru_cache(maxsize=None)
def tree_height(t) -> int:
    """Maximum distance from a leaf to the root."""
    if is_leaf(t):
        return 0
    return 1 + max(tree_height(t[0]), tree_height(t[1]))


def leaf_depths(t) -> list[int]:
    out: list[int] = []

    def walk(s, d):
        if is_leaf(s):
            out.append(d)
        else:
            walk(s[0], d + 1)
            walk(s[1], d + 1)

    walk(t, 0)
    return out


def tree_to_str(t) -> str:
    if is_leaf(t):
        return "*"
    return "(" + tree_to_str(t[0]) + " " + tree_to_str(t[1]) + ")"


_TOKEN = re.compile(r"\s*([()*])")


def parse_tree(text: str):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in tree {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    def parse(i):
        if i >= len(tokens):
            raise ParseError(f"unbalanced parentheses in {text!r}")
        tok = tokens[i]
        if tok == "*":
            return LEAF, i + 1
        if tok == "(":
            left, j = parse(i + 1)
            right, j = parse(j)
            if j >= len(tokens) or tokens[j] != ")":
                raise ParseError(f"expected ')' in {text!r}")
            return (left, right), j + 1
        raise ParseError(f"unexpected ')' in {text!r}")

    t, end = parse(0)
    if end != len(tokens):
        raise ParseError(f"trailing tokens in {text!r}")
    return t


def symmetric(k: int):
    t = LEAF
    for _ in range(k):
        t = (t, t)
    return t


def right_vine_tree(n: int):
    t = LEAF
    for _ in range(n - 1):
        t = (LEAF, t)
    return t


def caret_positions(t) -> set[int]:
    """Indices i such that leaves i and i+1 hang from a common node."""
    out = set()

    def walk(s, start):
        if is_leaf(s):
            return 1
        if is_leaf(s[0]) and is_leaf(s[1]):
            out.add(start)
            return 2
        n = walk(s[0], start)
        return n + walk(s[1], start + n)

    walk(t, 0)
    return out


def collapse_caret(t, i: int):
    """Replace the caret over leaves i, i+1 by a single leaf."""

    def walk(s, start):
        if is_leaf(s):
            return s
        if start == i and is_leaf(s[0]) and is_leaf(s[1]):
            return LEAF
        nl = leaves(s[0])
        if i < start + nl:
            return (walk(s[0], start), s[1])
        return (s[0], walk(s[1], start + nl))

    return walk(t, 0)


def refine(t1, t2):
    """Smallest tree whose leaf partition refines both t1 and t2."""
    if is_leaf(t1):
        return t2
    if is_leaf(t2):
        return t1
    return (refine(t1[0], t2[0]), refine(t1[1], t2[1]))


def subtrees_at_leaves(t, finer) -> list:
    """For ``finer`` obtained from ``t`` by grafting, the grafted subtree per leaf."""
    if is_leaf(t):
        return [finer]
    if is_leaf(finer):
        raise ValueError("tree is not a refinement")
    return subtrees_at_leaves(t[0], finer[0]) + subtrees_at_leaves(t[1], finer[1])


def graft(t, subtrees: list):
    it = iter(subtrees)

    def walk(s):
        if is_leaf(s):
            return next(it)
        return (walk(s[0]), walk(s[1]))

    out = walk(t)
    return out


def leaf_intervals(t) -> list[tuple[Fraction, Fraction]]:
    out = []
    x = Fraction(0)
    for d in leaf_depths(t):
        w = Fraction(1, 2 ** d)
        out.append((x, x + w))
        x += w
    return out


def random_tree(n: int, rng: random.Random, max_height: int | None = None):
    """Random tree with n leaves (uniform split point), optionally height-bounded."""
    def build(n, budget):
        if n == 1:
            return LEAF
        lo, hi = 1, n - 1
        if budget is not None:
            cap = 2 ** (budget - 1)
            lo, hi = max(lo, n - cap), min(hi, cap)
            if lo > hi:
                raise ValueError("no tree with that many leaves fits the height bound")
        k = rng.randint(lo, hi)
        nb = None if budget is None else budget - 1
        return (build(k, nb), build(n - k, nb))

    return build(n, max_height)


# -- forests -----------------------------------------------------------------

@dataclass(frozen=True)
class Forest:
    trees: tuple

    @property
    def roots(self) -> int:
        return len(self.trees)

    @property
    def leaves(self) -> int:
        return sum(leaves(t) for t in self.trees)

    @property
    def carets(self) -> int:
        return self.leaves - self.roots

    @classmethod
    def trivial(cls, n: int) -> "Forest":
        return cls((LEAF,) * n)

    @classmethod
    def single_caret(cls, n: int, i: int) -> "Forest":
        return cls(tuple((LEAF, LEAF) if j == i else LEAF for j in range(n)))

    def __str__(self):
        return " ".join(tree_to_str(t) for t in self.trees)


def forests_with_carets(n: int, budget: int) -> list[Forest]:
    """All forests with n roots and at most ``budget`` carets, fewest carets first."""
    @lru_cache(maxsize=None)
    def trees_with(c):
        if c == 0:
            return (LEAF,)
        out = []
        for a in range(c):
            for l in trees_with(a):
                for r in trees_with(c - 1 - a):
                    out.append((l, r))
        return tuple(out)

    def forests(n, c):
        if n == 0:
            return [()] if c == 0 else []
        out = []
        for a in range(c + 1):
            for t in trees_with(a):
                for rest in forests(n - 1, c - a):
                    out.append((t,) + rest)
        return out

    result = []
    for c in range(budget + 1):
        result.extend(Forest(f) for f in forests(n, c))
    return result


# -- dyadics -----------------------------------------------------------------

@dataclass(frozen=True)
class Dyadic:
    """numerator / 2**exponent in lowest terms."""
    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("negative exponent")
        n, e = self.numerator, self.exponent
        if n == 0:
            e = 0
        elif e > 0:
            tz = min((n & -n).bit_length() - 1, e)
            n, e = n >> tz, e - tz
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Dyadic":
        x = Fraction(x)
        d = x.denominator
        e = d.bit_length() - 1
        if d != 1 << e:
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, e)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self):
        return f"{self.numerator}/{1 << self.exponent}"


# -- group elements ----------------------------------------------------------

@dataclass(frozen=True)
class FElement:
    dom: tuple
    ran: tuple

    def __post_init__(self):
        if leaves(self.dom) != leaves(self.ran):
            raise ValueError("trees have different leaf counts")
        if caret_positions(self.dom) & caret_positions(self.ran):
            raise ValueError("tree pair is not reduced")

    @classmethod
    def from_pair(cls, dom, ran) -> "FElement":
        """Reduce an arbitrary tree pair by cancelling common carets."""
        if leaves(dom) != leaves(ran):
            raise ValueError("trees have different leaf counts")
        while True:
            common = caret_positions(dom) & caret_positions(ran)
            if not common:
                return cls(dom, ran)
            i = min(common)
            dom, ran = collapse_caret(dom, i), collapse_caret(ran, i)

    @property
    def leaves(self) -> int:
        return leaves(self.dom)

    def __str__(self):
        return tree_to_str(self.dom) + ";" + tree_to_str(self.ran)

    def to_json(self) -> str:
        return json.dumps({"dom": tree_to_str(self.dom), "ran": tree_to_str(self.ran)})

    @classmethod
    def from_json(cls, text: str) -> "FElement":
        d = json.loads(text)
        return cls.from_pair(parse_tree(d["dom"]), parse_tree(d["ran"]))

    def __mul__(self, other: "FElement") -> "FElement":
        return multiply(self, other)


IDENTITY = FElement(LEAF, LEAF)
X0 = FElement((LEAF, (LEAF, LEAF)), ((LEAF, LEAF), LEAF))
X1 = FElement((LEAF, (LEAF, (LEAF, LEAF))), (LEAF, ((LEAF, LEAF), LEAF)))


def multiply(a: FElement, b: FElement) -> FElement:
    """The composite a o b (apply b first)."""
    common = refine(b.ran, a.dom)
    b_dom = graft(b.dom, subtrees_at_leaves(b.ran, common))
    a_ran = graft(a.ran, subtrees_at_leaves(a.dom, common))
    return FElement.from_pair(b_dom, a_ran)


def inverse(a: FElement) -> FElement:
    return FElement(a.ran, a.dom)


def power(a: FElement, n: int) -> FElement:
    base = a if n >= 0 else inverse(a)
    out = IDENTITY
    for _ in range(abs(n)):
        out = multiply(out, base)
    return out


def evaluate(a: FElement, x) -> Dyadic:
    """Value at x of the PL homeomorphism sending dom's intervals onto ran's."""
    if isinstance(x, Dyadic):
        fx = x.to_fraction()
    else:
        fx = Fraction(x)
    if not 0 <= fx <= 1:
        raise ValueError(f"{fx} is outside [0, 1]")
    src, dst = leaf_intervals(a.dom), leaf_intervals(a.ran)
    for (s0, s1), (t0, t1) in zip(src, dst):
        if s0 <= fx <= s1:
            return Dyadic.from_fraction(t0 + (fx - s0) * (t1 - t0) / (s1 - s0))
    raise AssertionError("unreachable")


def evaluate_many(a: FElement, xs) -> list[Dyadic]:
    """evaluate() at many points, in integer arithmetic.

    Leaf intervals have power-of-two lengths, so with every point scaled to
    a common denominator 2**E each affine piece is an add and a shift.
    """
    pts = [x if isinstance(x, Dyadic) else Dyadic.from_fraction(Fraction(x)) for x in xs]
    dd, rd = leaf_depths(a.dom), leaf_depths(a.ran)
    top = max(dd + rd)
    e = max([p.exponent for p in pts] + [0]) + 2 * top
    starts_d, starts_r, x, y = [], [], 0, 0
    for p, q in zip(dd, rd):
        starts_d.append(x)
        starts_r.append(y)
        x += 1 << (e - p)
        y += 1 << (e - q)
    out = []
    for p in pts:
        if not 0 <= p.numerator <= 1 << p.exponent:
            raise ValueError(f"{p} is outside [0, 1]")
        v = p.numerator << (e - p.exponent)
        i = min(bisect_right(starts_d, v) - 1, len(dd) - 1)
        off = v - starts_d[i]
        off = off << (dd[i] - rd[i]) if dd[i] >= rd[i] else off >> (rd[i] - dd[i])
        out.append(Dyadic(starts_r[i] + off, e))
    return out


def height(a: FElement) -> int:
    return max(tree_height(a.dom), tree_height(a.ran))


def tree_sign(t, left: int = 1) -> tuple[int, ...]:
    """Signs (+1/-1) of the regions left of each leaf, given the region left of the root."""
    if is_leaf(t):
        return (left,)
    return tree_sign(t[0], left) + tree_sign(t[1], -left)


def is_oriented_member(a: FElement) -> bool:
    return tree_sign(a.dom) == tree_sign(a.ran)


_GENERATORS = {"x0": X0, "x1": X1}
_WORD_TOKEN = re.compile(r"^(x[01])(\^-1)?$")


def parse_element(text: str) -> FElement:
    """Parse ``dom;ran`` tree-pair syntax or a word such as ``x0 x1^-1``."""
    text = text.strip()
    if ";" in text:
        dom_s, _, ran_s = text.partition(";")
        dom, ran = parse_tree(dom_s), parse_tree(ran_s)
        if leaves(dom) != leaves(ran):
            raise ParseError("trees have different leaf counts")
        return FElement.from_pair(dom, ran)
    if text in ("", "e", "1", "id"):
        return IDENTITY
    out = IDENTITY
    for tok in text.replace("*", " ").split():
        m = _WORD_TOKEN.match(tok)
        if not m:
            raise ParseError(f"unknown token {tok!r}")
        g = _GENERATORS[m.group(1)]
        out = multiply(out, inverse(g) if m.group(2) else g)
    return out


def random_word(rng: random.Random, length: int) -> list[str]:
    return [rng.choice(["x0", "x0^-1", "x1", "x1^-1"]) for _ in range(length)]


def random_element(rng: random.Random, max_height: int = 4, max_leaves: int = 9) -> FElement:
    """Random reduced element with height at most ``max_height``."""
    n = rng.randint(1, min(max_leaves, 2 ** max_height))
    return FElement.from_pair(random_tree(n, rng, max_height), random_tree(n, rng, max_height))


@lru_cache(maxsize=None)
def trees_by_sign(n: int, max_height: int) -> dict:
    """All trees with n leaves and bounded height, grouped by leaf sign."""
    def build(n, h):
        if n == 1:
            return [LEAF]
        if h == 0:
            return []
        return [(a, b) for k in range(1, n) for a in build(k, h - 1) for b in build(n - k, h - 1)]

    out: dict = {}
    for t in build(n, max_height):
        out.setdefault(tree_sign(t), []).append(t)
    return out


def random_oriented_element(rng: random.Random, max_height: int = 4, max_leaves: int = 10) -> FElement:
    """Random nontrivial element of the oriented subgroup (tree pair with matching signs)."""
    while True:
        n = rng.randint(4, min(max_leaves, 2 ** max_height))
        groups = [ts for ts in trees_by_sign(n, max_height).values() if len(ts) > 1]
        if not groups:
            continue
        ts = rng.choice(groups)
        dom, ran = rng.sample(ts, 2)
        g = FElement.from_pair(dom, ran)
        if g != IDENTITY:
            return g
