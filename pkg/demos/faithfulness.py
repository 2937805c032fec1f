"""
Telling elements of F apart by their tangles
============================================

Two different elements of F can give tangles that look alike at k = 0.
Raising k adds more strands to the left and eventually the turnback
signature of T(Theta_k(g)) separates them.
"""

from thompson_tangles import X0, X1, parse_element, tangle_of, theta
from thompson_tangles import tangle

# x0 x1 x0^-1 equals x2, a generator of the usual infinite presentation
g = parse_element("x0 x1 x0^-1")
h = parse_element("x1")
print("g =", g)
print("h =", h)

# the tangle of Theta_1(g): boundary points, crossings, PD code
t = tangle_of(theta(1, g))
print(len(t.top), "top points,", len(t.crossings), "crossings")
print(t.crossings[:3], "...")

# find the least k that tells them apart, with a witness
res = tangle.distinguish(g, h, kmax=6)
print("least k:", res.k)
print("witness:", res.witness)

# the same holds after mirroring every crossing
print("mirror least k:", tangle.distinguish(g, h, kmax=6, mirror=True).k)

# x0 and x1 already differ by the number of strands they are drawn with
print("x0 vs x1:", tangle.distinguish(X0, X1).k)
