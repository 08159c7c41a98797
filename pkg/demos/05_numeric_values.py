"""
First result wins
=================

Measures are compared with a 1% relative tolerance. Once a length is known,
recomputing it from other facts reuses the stored value instead of adding a
near-duplicate fact. Here the hypotenuse is given as 5 while the legs 3 and
4.02 would give about 5.016.
"""

import hpdic
from hpdic.geometry import Value

print("90 vs 90.5:", hpdic.values_equal(Value(90, "degrees"), Value(90.5, "degrees")))
print("90 vs 92:  ", hpdic.values_equal(Value(90, "degrees"), Value(92, "degrees")))

problem = hpdic.load_example("pythagoras_tolerance")
result = hpdic.saturate(problem, hpdic.builtin_referential())
for s in result.kb.statements:
    if s.predicate == "segmentLength":
        rules = [i.rule_id for i in result.kb.derivations(s)]
        print(f"{s}  [{result.kb.statements[s]}, rederived by {rules}]")
print("values reused:", result.stats["values_reused"])
