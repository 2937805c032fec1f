import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thompson_tangles import fgroup
from thompson_tangles.fgroup import IDENTITY, LEAF, X0, X1, Dyadic, FElement


def test_parse_tree_pair():
    g = fgroup.parse_element("(* (* *));((* *) *)")
    assert g.dom == (LEAF, (LEAF, LEAF))
    assert g.ran == ((LEAF, LEAF), LEAF)
    assert g == X0


def test_parse_words():
    assert fgroup.parse_element("x0 x0^-1") == IDENTITY
    assert fgroup.parse_element("e") == IDENTITY
    assert fgroup.parse_element("x0 x0") == fgroup.power(X0, 2)
    with pytest.raises(fgroup.ParseError):
        fgroup.parse_element("x2")
    with pytest.raises(fgroup.ParseError):
        fgroup.parse_element("(* *);*")


def test_unreduced_pair_cancels_caret():
    # one extra caret hung under the same leaf of both trees
    dom = ((LEAF, LEAF), (LEAF, LEAF))
    ran = (((LEAF, LEAF), LEAF), LEAF)
    assert FElement.from_pair(dom, ran) == X0
    with pytest.raises(ValueError):
        FElement(dom, ran)


def test_group_laws():
    assert fgroup.multiply(X0, fgroup.inverse(X0)) == IDENTITY
    assert fgroup.multiply(IDENTITY, X0) == X0
    assert fgroup.inverse(IDENTITY) == IDENTITY
    assert fgroup.inverse(X0) == FElement(X0.ran, X0.dom)


def test_evaluate_examples():
    assert fgroup.evaluate(X0, Dyadic(1, 1)) == Dyadic(1, 2)
    assert fgroup.evaluate(IDENTITY, Dyadic(3, 3)) == Dyadic(3, 3)
    assert fgroup.evaluate(X1, Fraction(3, 4)) == Dyadic(5, 3)
    with pytest.raises(ValueError):
        fgroup.evaluate(X0, Fraction(3, 2))


def test_product_matches_composition():
    g = fgroup.multiply(X0, X1)
    for i in range(2 ** 12 + 1):
        x = Dyadic(i, 12)
        assert fgroup.evaluate(g, x) == fgroup.evaluate(X0, fgroup.evaluate(X1, x))


def test_evaluate_many_agrees():
    rng = random.Random(5)
    g = fgroup.random_element(rng, 4)
    xs = [Dyadic(i, 7) for i in range(129)]
    assert fgroup.evaluate_many(g, xs) == [fgroup.evaluate(g, x) for x in xs]


def test_dyadic_normalizes():
    assert Dyadic(4, 3) == Dyadic(1, 1)
    assert Dyadic(0, 9) == Dyadic(0, 0)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


def test_height():
    assert fgroup.height(IDENTITY) == 0
    assert fgroup.height(X0) == 2


def test_oriented_membership():
    assert fgroup.is_oriented_member(IDENTITY)
    # the signs of (* (* *)) and ((* *) *) are (+,-,+) and (+,-,-)
    assert fgroup.tree_sign(X0.dom) == (1, -1, 1)
    assert fgroup.tree_sign(X0.ran) == (1, -1, -1)
    assert not fgroup.is_oriented_member(X0)
    rng = random.Random(0)
    for _ in range(20):
        assert fgroup.is_oriented_member(fgroup.random_oriented_element(rng))


def test_forests_with_carets_counts():
    # forests on 2 roots with at most one caret: trivial plus one per root
    assert len(fgroup.forests_with_carets(2, 1)) == 3


words = st.lists(st.sampled_from(["x0", "x0^-1", "x1", "x1^-1"]), max_size=8)


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_multiply_associates_with_parsing(a, b):
    g, h = fgroup.parse_element(" ".join(a)), fgroup.parse_element(" ".join(b))
    assert fgroup.parse_element(" ".join(a + b)) == fgroup.multiply(g, h)
    assert fgroup.inverse(fgroup.inverse(g)) == g
    assert fgroup.height(g) == fgroup.height(fgroup.inverse(g))


@settings(max_examples=40, deadline=None)
@given(words)
def test_json_round_trip(a):
    g = fgroup.parse_element(" ".join(a))
    assert FElement.from_json(g.to_json()) == g
