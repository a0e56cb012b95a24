"""Sections of free finite actions, and the selector independence engine.

Run:  python3 demos/sections_and_selectors.py
"""

from orbitlab.constructions import (free_action_on_cosets, orbit_section,
                                    section_report)
from orbitlab.groups import cyclic
from orbitlab.verify import Selector, selector_independence_exact

# A free action of Z/2 on six points splits as group x representatives.
K = cyclic(2)
action = free_action_on_cosets(K, 3)
reps, theta = orbit_section(K, action)
print("orbit representatives:", [action.alphabet.names[y] for y in reps])
print("section report:", section_report(K, action).verdict)

# A fixed point is rejected with a witness.
from orbitlab.actions import FiniteGroupAlphabetAction
from orbitlab.groups import Alphabet

broken = FiniteGroupAlphabetAction(
    K, Alphabet(["p0", "p1", "p2"], label="3pts"), [(0, 1, 2), (1, 0, 2)])
report = section_report(K, broken)
print("non-free action:", report.verdict, "|", report.counterexample["reason"])

# The selector engine decides, by full enumeration, that twisted lookups
# y -> h(x) . y_{i(x)} are jointly uniform and independent of x, provided
# the selected indices never collide.
flip, ident = (1, 0), (0, 1)
act = lambda h, v: h[v] if h is not None else v
family = [
    Selector("twisted-by-x", lambda x: (flip if x("x") else ident, x("x"))),
    Selector("fixed-slot", lambda x: (ident, 2)),
]
report = selector_independence_exact([("x", 2)], [0, 1, 2], 2, act, family)
print("selector independence over", report.statistics["states"], "states:",
      report.verdict)

clash = [Selector("first", lambda x: (ident, x("x"))),
         Selector("second", lambda x: (ident, x("x")))]
report = selector_independence_exact([("x", 2)], [0, 1, 2], 2, act, clash)
print("colliding selectors:", report.verdict, "|", report.notes[0])
