"""
The lax action of F on tangle complexes
=======================================

Each element g acts by tensoring with the complex of a decorated tangle,
summed over compatible forests.  The unit and associativity maps should
satisfy the lax axioms; here they are checked on a few short elements.
"""

from thompson_tangles import IDENTITY, laxaction, parse_element

g = parse_element("x0 x1")
cs = laxaction.cstar(g, k=0, budget=1)
print("summands of C*(g) with at most one extra caret:", len(cs.forests))
for L in cs.forests:
    print("  forest", L)

rep = laxaction.verify_unit(g, k=0, budget=1)
print(rep.to_dict())

(_, h), = laxaction.short_oriented_elements(1)
rep = laxaction.verify_assoc(g, h, IDENTITY, k=0, budget=0)
print(rep.name, "pass" if rep.ok else "FAIL", rep.checked, "generators")

# homology of each extra summand is a shifted copy of the base summand
print(laxaction.shift_report(g, k=0, budget=1))
