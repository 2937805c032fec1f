"""
Khovanov homology of tangles and closures
=========================================

The cube of resolutions over GF(2) for a small tangle, its homology, and a
check that the graded Euler characteristic of a closure matches the
Kauffman bracket.
"""

from thompson_tangles import Tangle, closure, kauffman_bracket, orient, parse_element, tangle
from thompson_tangles import khovanov

# the complex needs orientations, so use an element of the oriented subgroup
og = orient.oriented_theta(0, parse_element("x0 x1"))
t = tangle.oriented_tangle_of(og)
ranks = khovanov.tangle_homology(t)
print("homology of T(x0 x1), (h, q) -> rank:")
for (h, q), r in sorted(ranks.items()):
    print(f"  h={h:+d} q={q:+d}: {r}")

# close it up and compare with the bracket
link = closure(t)
print("bracket:", kauffman_bracket(link))
print("chi    :", khovanov.chi_in_A(khovanov.euler_characteristic(khovanov.tangle_homology(link))))
print("predicted from bracket:", khovanov.bracket_prediction(link))

# a genuine Reidemeister II pair cancels down to the trivial tangle
r2 = Tangle(("a", "b"), ("e", "f"), (("a", "b", "c", "d"), ("c", "f", "e", "d")))
c = khovanov.complex_of(khovanov.KhTangle(r2))
s = khovanov.r2_simplify(c)
print("R2 tangle:", c.dim(), "generators before cancellation,", s.simplified.dim(), "after")
