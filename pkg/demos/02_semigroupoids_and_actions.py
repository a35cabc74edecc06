"""Finite composition structures: validation, classification, actions.

Elements compose only when the domain symbol of the left factor matches the
codomain symbol of the right one, and a star reverses products while
swapping domain and codomain. Everything is a finite table, so validity and
structure class are decided by exhaustive search with explicit witnesses.
"""

from kgl import classify, validate, validate_action
from kgl.sgpd import StarSemigroupoid, orbit, pair_groupoid, partial_bijections

# The pair groupoid on two symbols: elements are ordered pairs, composition
# glues matching endpoints, star swaps them.
sg, act = pair_groupoid(("s", "t"), action="self")
report = validate(sg)
print("pair groupoid valid:", report.ok)

cls = classify(sg)
print("  has unit      ", cls.has_unit, " units:", cls.units)
print("  is groupoid   ", cls.is_groupoid)
print("  is inverse    ", cls.is_inverse)
print("  star = inverse", cls.star_matches_inverse)

print("\naction of the pair groupoid on itself:")
print("  valid:", validate_action(act).ok)
seen = []
for x in act.base:
    o = sorted(orbit(act, x))
    if o not in seen:
        seen.append(o)
print("  orbits:", seen)

# Partial bijections between small fibers form an inverse structure that is
# not a groupoid: composition can shrink the graph down to the empty map.
sg_pb, act_pb = partial_bijections((2, 1))
cls_pb = classify(sg_pb)
print(f"\npartial bijections on fibers (2, 1): {len(sg_pb.elements)} elements")
print("  is inverse :", cls_pb.is_inverse)
print("  is groupoid:", cls_pb.is_groupoid)
sample = [e for e in sg_pb.elements if not e.endswith("[]")][:4]
print("  sample elements:", sample)

# Corrupting one entry of the star table breaks the involution axioms; the
# validator names the offending element instead of just failing.
star = dict(sg.star)
star["(s,t)"] = "(s,t)"  # should be "(t,s)"
broken = StarSemigroupoid(
    symbols=sg.symbols, elements=sg.elements, d=sg.d, c=sg.c,
    compose=sg.compose, star=star, units=sg.units,
)
bad = validate(broken)
print("\ncorrupted star table valid:", bad.ok)
for v in bad.entries[:2]:
    print("  violated:", v.axiom, "witness:", v.witness)
