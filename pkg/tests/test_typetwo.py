import random
from collections import Counter

import pytest

from thompson_tangles import fgroup, strand, typetwo
from thompson_tangles.fgroup import IDENTITY, X0, Forest
from thompson_tangles.strand import MERGE, SPLIT, StrandDiagram


def test_identity_has_no_paths():
    assert typetwo.admissible_paths(strand.identity(3)) == []


def test_dyck_profiles():
    assert typetwo.dyck_profile((("l", 1), ("l", -1))) == (1, 0)
    word = (("l", 1), ("l", 1), ("l", -1), ("r", 1), ("r", -1), ("l", -1))
    assert typetwo.dyck_profile(word) == (1, 2, 1, 2, 1, 0)
    assert typetwo.free_reduce(word) == ()


def test_merge_over_split_is_one_move():
    d = StrandDiagram(2, ((MERGE, 0), (SPLIT, 0)))
    res = typetwo.type2_reduce(d)
    assert strand.equal(res.result, strand.identity(2))
    assert len(res.moves) == 1
    # entering the merge from either side gives a path, both to the same split
    paths = typetwo.admissible_paths(d)
    assert sorted(p.word_str() for p in paths) == ["l l^-1", "r r^-1"]
    assert typetwo.move_pairs(d) == {tuple(res.moves[0])}


def test_bigon_untouched():
    d = StrandDiagram(1, ((SPLIT, 0), (MERGE, 0)))
    res = typetwo.type2_reduce(d)
    assert res.moves == [] and strand.canonicalize(res.result) == strand.canonicalize(d)


def test_paths_well_formed_and_counted():
    rng = random.Random(1)
    for _ in range(100):
        d = strand.random_diagram(rng, rng.randint(0, 12))
        paths = typetwo.admissible_paths(d)
        for p in paths:
            prof = typetwo.dyck_profile(p)
            assert prof[-1] == 0 and min(prof) >= 0
            assert typetwo.free_reduce(p.word) == ()
        res = typetwo.type2_reduce(d)
        assert typetwo.move_pairs(d) == set(res.moves)
        before = len(strand.as_graph(d).kind)
        assert before - len(res.graph.kind) == 2 * len(res.moves)


def test_confluence_with_move_multisets():
    rng = random.Random(2)
    for _ in range(200):
        d = strand.random_diagram(rng, rng.randint(0, 14))
        ref = typetwo.type2_reduce(d)
        for _ in range(5):
            other = typetwo.type2_reduce(d, random.Random(rng.random()))
            assert strand.canonicalize(other.result) == strand.canonicalize(ref.result)
            assert Counter(other.moves) == Counter(ref.moves)


def test_sequences_all_maximal():
    rng = random.Random(3)
    for _ in range(30):
        d = strand.random_diagram(rng, rng.randint(0, 8))
        seqs = typetwo.type2_sequences(d)
        ref = typetwo.type2_reduce(d)
        assert seqs
        assert all(Counter(s) == Counter(ref.moves) for s in seqs)


def test_dot_compose():
    res = typetwo.dot_compose(strand.identity(2), strand.identity(2))
    assert res.moves == [] and strand.equal(res.result, strand.identity(2))
    rng = random.Random(4)
    for _ in range(20):
        g, h = fgroup.random_element(rng, 2), fgroup.random_element(rng, 2)
        lam, gam = strand.theta(0, h), strand.theta(0, g)
        prod = typetwo.dot_compose(lam, gam)
        assert strand.equal(strand.reduce(prod.result), strand.star(lam, gam))
        assert prod.graph.is_type2_reduced()
    with pytest.raises(typetwo.NotTypeTwoReduced):
        typetwo.dot_compose(StrandDiagram(2, ((MERGE, 0), (SPLIT, 0))), strand.identity(2))


def test_decorate_reduces_back():
    d = strand.theta(0, X0)
    w = typetwo.waist(d)
    for L in fgroup.forests_with_carets(w, 2):
        assert strand.equal(strand.reduce(typetwo.decorate(d, L)), d)
    with pytest.raises(typetwo.Incompatible):
        typetwo.decorate(d, Forest.trivial(w + 1))


def test_bridge_forest_trivial_cases():
    w = typetwo.waist(strand.theta(0, IDENTITY))
    triv = Forest.trivial(w)
    assert typetwo.bridge_forest(IDENTITY, IDENTITY, 0, triv, triv) == triv
    for U in fgroup.forests_with_carets(w, 2):
        assert typetwo.bridge_forest(IDENTITY, IDENTITY, 0, U, triv) == U


def test_bridge_forest_equation():
    rng = random.Random(5)
    checked = 0
    for _ in range(40):
        g, h = fgroup.random_element(rng, 2), fgroup.random_element(rng, 2)
        U = rng.choice(fgroup.forests_with_carets(typetwo.waist(strand.theta(0, g)), 1))
        V = rng.choice(fgroup.forests_with_carets(typetwo.waist(strand.theta(0, h)), 1))
        try:
            W = typetwo.bridge_forest(g, h, 0, U, V)
        except typetwo.Incompatible:
            continue
        checked += 1
        lhs = typetwo.dot_compose(typetwo.decorate(strand.theta(0, h), V),
                                  typetwo.decorate(strand.theta(0, g), U)).result
        rhs = typetwo.decorate(strand.theta(0, fgroup.multiply(h, g)), W)
        assert strand.equal(lhs, rhs)
    assert checked > 10
