"""The eleven acceptance criteria, each with its time budget.

Every test prints one line: PASS/FAIL, the criterion number, elapsed time
and a short summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time
from itertools import product

import pytest

from thompson_tangles import fgroup, khovanov, laxaction, orient, strand, tangle
from thompson_tangles.fgroup import IDENTITY, Dyadic
from thompson_tangles.strand import MERGE, SPLIT, StrandDiagram

pytestmark = pytest.mark.acceptance


def _line(say, n, title, ok, seconds, budget, detail=""):
    status = "PASS" if ok and seconds < budget else "FAIL"
    say(f"[{status}] criterion {n:>2}: {title} ({seconds:.2f}s of {budget}s) {detail}")
    assert ok, detail
    assert seconds < budget, f"took {seconds:.1f}s, budget {budget}s"


# -- 1. group law against piecewise-linear composition ---------------------------------

SCALE = 64          # oracle points are integers over 2**SCALE


def _x0(t):
    half, one = 1 << (SCALE - 1), 1 << SCALE
    if t <= half:
        return t >> 1
    if t <= half + (half >> 1):
        return t - (half >> 1)
    return 2 * t - one


def _x0_inv(t):
    half, one = 1 << (SCALE - 1), 1 << SCALE
    if t <= half >> 1:
        return 2 * t
    if t <= half:
        return t + (half >> 1)
    return (t + one) >> 1


def _on_right_half(f):
    half, one = 1 << (SCALE - 1), 1 << SCALE
    return lambda t: t if t <= half else (one + f(2 * t - one)) >> 1


PL = {"x0": _x0, "x0^-1": _x0_inv, "x1": _on_right_half(_x0), "x1^-1": _on_right_half(_x0_inv)}


def test_1_group_law(say):
    t0 = time.time()
    rng = random.Random(1)
    points = [Dyadic(i, 12) for i in range(2 ** 12 + 1)]
    bad = 0
    for _ in range(200):
        word = fgroup.random_word(rng, rng.randint(1, 12))
        g = fgroup.parse_element(" ".join(word))
        values = fgroup.evaluate_many(g, points)
        for x, fx in zip(points, values):
            y = x.numerator << (SCALE - x.exponent)
            for letter in reversed(word):
                y = PL[letter](y)
            if fx != Dyadic(y, SCALE):
                bad += 1
                break
    spot = all(fgroup.evaluate(g, p) == v for p, v in zip(points[::97], values[::97]))
    _line(say, 1, "group law vs PL oracle", bad == 0 and spot, time.time() - t0, 10,
          f"200 words, {len(points)} dyadics, {bad} mismatches")


# -- 2. confluence of the rewriting system ---------------------------------------------

def test_2_confluence(say):
    t0 = time.time()
    rng = random.Random(2)
    bad = 0
    for _ in range(500):
        d = strand.random_diagram(rng, rng.randint(0, 20))
        ref = strand.canonicalize(strand.reduce(d))
        variants = [strand.reduce(d, random.Random(rng.random())) for _ in range(5)]
        variants += [strand.reduce(strand.shuffle(d, rng)) for _ in range(5)]
        bad += any(strand.canonicalize(v) != ref for v in variants)
    _line(say, 2, "rewriting confluence", bad == 0, time.time() - t0, 30,
          f"500 diagrams x 10 reductions, {bad} disagreements")


# -- 3. Theta_k is a homomorphism and lands in biforests --------------------------------

def test_3_theta_homomorphism(say):
    t0 = time.time()
    rng = random.Random(3)
    els = [fgroup.random_element(rng, max_height=4) for _ in range(50)]
    bad_hom = bad_bif = 0
    for k in range(5):
        th = {g: strand.theta(k, g) for g in els}
        for g in els:
            if k >= fgroup.height(g) and strand.biforest_decompose(th[g]) is None:
                bad_bif += 1
        for g, h in product(els, els):
            # star(Theta(g), Theta(h)) puts Theta(g) below, which is apply h then g
            if not strand.equal(strand.star(th[g], th[h]), strand.theta(k, fgroup.multiply(g, h))):
                bad_hom += 1
    _line(say, 3, "Theta_k homomorphism + biforests", bad_hom == bad_bif == 0, time.time() - t0, 60,
          f"2500 pairs x k<=4, {bad_hom} product and {bad_bif} biforest failures")


# -- 4. asymptotic faithfulness -----------------------------------------------------------

def _faithfulness(mirror):
    rng = random.Random(4)
    least, bad = {}, 0
    pairs = 0
    while pairs < 100:
        g = fgroup.random_element(rng, max_height=4)
        h = fgroup.random_element(rng, max_height=4)
        if g == h:
            continue
        pairs += 1
        sig = [tangle.turnback_signature(tangle.theta_tangle(4, x, mirror)) for x in (g, h)]
        bad += sig[0] == sig[1]
        d = tangle.distinguish(g, h, kmax=4, mirror=mirror)
        least[d.k] = least.get(d.k, 0) + 1
    return bad, least


@pytest.mark.parametrize("mirror", [False, True], ids=["plain", "mirror"])
def test_4_faithfulness(say, mirror):
    t0 = time.time()
    bad, least = _faithfulness(mirror)
    n = "11" if mirror else "4"
    _line(say, n, f"turnbacks differ at k=4{' (mirror)' if mirror else ''}", bad == 0, time.time() - t0, 60,
          f"100 pairs, {bad} undistinguished, least k histogram {dict(sorted(least.items(), key=str))}")


# -- 5. the symmetric tree has sign 2^k + ------------------------------------------------

def test_5_symmetric_sign(say):
    t0 = time.time()
    bad = [k for k in range(9) if orient.leaf_sign(fgroup.symmetric(k)) != orient.power_double(k)]
    _line(say, 5, "sigma(S_k) = 2^k +", not bad, time.time() - t0, 1, f"k<=8, failures at {bad}")


# -- 6. oriented doubling --------------------------------------------------------------

def test_6_oriented_doubling(say):
    t0 = time.time()
    rng = random.Random(6)
    bad = 0
    for _ in range(50):
        g = fgroup.random_oriented_element(rng, max_height=4)
        for k in range(3):
            t = tangle.oriented_tangle_of(orient.oriented_theta(k, g))
            want = orient.power_double(k + 1).seq
            bad += t.top_signs != want or t.bottom_signs != want
    o = orient.propagate(StrandDiagram(3, ((MERGE, 0),)), top=(1, -1, -1))
    t = tangle.oriented_tangle_of(o)
    fig = (str(o.top_sign), str(o.bottom_sign), t.top_signs, t.bottom_signs)
    fig_ok = fig == ("+--", "+-", (1, -1, -1, 1, -1, 1), (1, -1, -1, 1))
    _line(say, 6, "oriented doubling", bad == 0 and fig_ok, time.time() - t0, 30,
          f"50 elements x k<=2, {bad} failures; (+,-,-)->(+,-) example ok={fig_ok}")


# -- 7. Euler characteristic against the bracket -------------------------------------

def random_closures(count, max_crossings=8, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = strand.random_diagram(rng, rng.randint(1, 8))
        t = tangle.tangle_of(d)
        if len(t.top) != len(t.bottom) or not 0 < len(t.crossings) <= max_crossings:
            continue
        out.append(d)
    return out


def _closure(d, mirror):
    return tangle.orient_closed(tangle.closure(tangle.tangle_of(d, mirror=mirror)))


def kink_unknots():
    """One-crossing diagrams of the unknot, both kinks, plus a free loop."""
    kinks = [tangle.Tangle((), (), (("1", "1", "2", "2"),)), tangle.Tangle((), (), (("1", "2", "2", "1"),))]
    out = [tangle.orient_closed(t) for t in kinks]
    return out + [tangle.mirror_tangle(t) for t in out] + [tangle.Tangle((), (), (), loops=1)]


def test_7_euler_characteristic(say):
    t0 = time.time()
    bad, seen = 0, []
    for d in random_closures(20):
        link = _closure(d, False)
        seen.append(len(link.crossings))
        chi = khovanov.chi_in_A(khovanov.euler_characteristic(khovanov.tangle_homology(link)))
        bad += chi != khovanov.bracket_prediction(link)
    unknots = [khovanov.homology(khovanov.complex_of(khovanov.KhTangle(u))) for u in kink_unknots()]
    unknot_ok = all(u == {(0, 1): 1, (0, -1): 1} for u in unknots)
    unknot = unknots[0]
    _line(say, 7, "chi(Kh) = bracket", bad == 0 and unknot_ok, time.time() - t0, 300,
          f"20 closures with {min(seen)}-{max(seen)} crossings, {bad} mismatches; unknot {unknot}")


def test_11_bracket_mirror(say):
    t0 = time.time()
    bad = 0
    for d in random_closures(20):
        plain, mirrored = _closure(d, False), _closure(d, True)
        chi_p = khovanov.chi_in_A(khovanov.euler_characteristic(khovanov.tangle_homology(plain)))
        chi_m = khovanov.chi_in_A(khovanov.euler_characteristic(khovanov.tangle_homology(mirrored)))
        bad += chi_m != tangle.invert_variable(chi_p)
        bad += tangle.kauffman_bracket(mirrored) != tangle.invert_variable(tangle.kauffman_bracket(plain))
    _line(say, 11, "mirror sends A to 1/A (criterion 7)", bad == 0, time.time() - t0, 300,
          f"20 closures, {bad} failures")


# -- 8. the movie map does not depend on the Type II sequence ----------------------------

def _independence(mirror):
    checked = nontrivial = 0
    bad = []
    for k in (0, 1):
        for g, U, h, V, gr in laxaction.height_two_pairs(max_nodes=8, k=k):
            res = laxaction.movie_independence(gr, mirror)
            checked += 1
            nontrivial += res["sequences"] > 1
            if not res["equal"]:
                bad.append(f"k={k} {g}[{U}] / {h}[{V}]")
    return checked, nontrivial, bad


@pytest.mark.parametrize("mirror", [False, True], ids=["plain", "mirror"])
def test_8_movie_independence(say, mirror):
    t0 = time.time()
    checked, nontrivial, bad = _independence(mirror)
    n = "11" if mirror else "8"
    _line(say, n, f"movie independent of Type II order{' (mirror)' if mirror else ''}", not bad,
          time.time() - t0, 300, f"{checked} diagrams, {nontrivial} with several sequences, failures {bad[:3]}")


# -- 9. decorated summands are q-shifted copies --------------------------------------------

def test_9_q_shifts(say):
    t0 = time.time()
    elements = [g for _, g in laxaction.short_oriented_elements(10, 6, 0)]
    reports = [laxaction.shift_report(g, 0, 1) for g in elements]
    bad = [r["element"] for r in reports if not r["pass"]]
    summands = sum(len(r["summands"]) for r in reports)
    shifts = sorted({s for r in reports for x in r["summands"] for s in (x["shifts"] or {})})
    _line(say, 9, "q-shifted copies", not bad and summands > 0, time.time() - t0, 300,
          f"10 elements, {summands} decorated summands, shifts seen {shifts}, failures {bad}")


# -- 10. unit and associativity of the lax action -------------------------------------------

def _axioms(mirror):
    elements = [IDENTITY] + [g for _, g in laxaction.short_oriented_elements(2, 6, 0)]
    reports = []
    for budget in (0, 1):
        for g in elements:
            reports.append(laxaction.verify_unit(g, 0, budget, mirror))
        for f, g, h in product(elements, repeat=3):
            reports.append(laxaction.verify_assoc(f, g, h, 0, budget, mirror, max_summands=40))
    return reports


@pytest.mark.parametrize("mirror", [False, True], ids=["plain", "mirror"])
def test_10_lax_axioms(say, mirror):
    t0 = time.time()
    reports = _axioms(mirror)
    bad = [r.name for r in reports if not r.ok]
    checked = sum(r.checked for r in reports)
    nonzero = sum(r.nonzero for r in reports)
    n = "11" if mirror else "10"
    _line(say, n, f"unit and associativity{' (mirror)' if mirror else ''}", not bad, time.time() - t0, 600,
          f"{len(reports)} checks over budgets 0,1, {checked} generators ({nonzero} nonzero images), "
          f"failures {bad[:3]}")
