"""
Oriented tangles from the doubling map
======================================

Elements of the oriented subgroup preserve the sign pattern that the
doubling map produces, so their diagrams carry region signs that make the
tangle oriented.
"""

from thompson_tangles import fgroup, orient, parse_element, strand, tangle

# doubling +  gives  + -,  doubling again gives  + - - +
print(orient.power_double(2))

# a merge of the first two strands, with signs fixed on the top boundary
og = orient.propagate(strand.StrandDiagram(3, ((strand.MERGE, 0),)), top=(1, -1, -1))
print(og)
t = tangle.oriented_tangle_of(og)
print("top signs", t.top_signs, "bottom signs", t.bottom_signs)

# x0 x1 is in the oriented subgroup, x0 on its own is not
for w in ("x0 x1", "x0"):
    g = parse_element(w)
    print(w, "oriented member:", fgroup.is_oriented_member(g))

og = orient.oriented_theta(0, parse_element("x0 x1"))
print("positive splits:", sum(orient.is_positive_split(og, n) for n in orient.split_signs(og)))
print(tangle.oriented_tangle_of(og).to_json()[:120], "...")
