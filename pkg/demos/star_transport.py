"""Transporting an action across a co-induction.

Two commuting systems on one finite set (a dot action of lam1 x K and a
star action of lam0 x K with the same orbits) transport to the co-induced
space: the free factor acts as before, the other factor acts through the
pointwise-solved transport cocycle.  Orbits agree on the K-quotient in both
directions, witnessed by explicit cocycles.

Run:  python3 demos/star_transport.py
"""

from orbitlab.constructions import (StarAction, component_twist_system,
                                    star_conjugation_report,
                                    star_injectivity_report, star_orbit_report,
                                    star_relation_report)
from orbitlab.groups import cyclic, s3
from orbitlab.spaces import sample

lam, K = cyclic(2, "p"), cyclic(2, "k")
system = component_twist_system(lam, K, [((0, 1), [0, 0]), ((0, 1), [0, 1])])
star = StarAction(cyclic(2, "c"), system)

y = sample(star.space, 3)
lam_letter = star.spec0.finite_element(star.lam0, 1)
word, k = star.omega().evaluate(lam_letter, y)
print("transport of the lam0 generator at a sample:",
      word.tokens(), "with K-part", K.names[k])

for report in (star_relation_report(star, 3, 10, seed=1),
               star_orbit_report(star, 2, 10, seed=2),
               star_injectivity_report(star, 2, 10, seed=3),
               star_conjugation_report(star)):
    print(f"{report.name}: {report.verdict}")

# With a nonabelian K the conjugation relation eta(l0, k.x) = k eta k^-1
# is exercised nontrivially.
K6 = s3()
transposition = K6.names.index("102")
system6 = component_twist_system(
    lam, K6, [((0, 1), [K6.identity, K6.identity]),
              ((0, 1), [K6.identity, transposition])])
star6 = StarAction(cyclic(2, "c"), system6)
print("nonabelian conjugation relation:",
      star_conjugation_report(star6).verdict)

# Mixing per-component automorphisms of Z/3 makes the word part of the
# transport genuinely point-dependent.
lam3 = cyclic(3, "p")
system3 = component_twist_system(
    lam3, cyclic(2, "k"), [((0, 1, 2), [0, 0, 0]), ((0, 2, 1), [0, 0, 0])])
star3 = StarAction(cyclic(2, "c"), system3)
letter = star3.spec0.finite_element(star3.lam0, 1)
images = {star3.omega().evaluate(letter, sample(star3.space, s))[0].tokens()
          for s in range(12)}
print("point-dependent transport images:", sorted(images))
