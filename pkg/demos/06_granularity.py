"""
Shortcuts and detailed steps
============================

Some properties summarise a whole proof, such as the angle sum of a
triangle. They are tagged ``high`` and coexist with the detailed properties,
so both routes appear in the graph. Filtering the referential shows what a
class that has not seen the shortcut yet could prove.
"""

import hpdic

r = hpdic.builtin_referential()
for rule in r.select(granularity="high"):
    print(rule.id, "-", rule.justification)

problem = hpdic.load_example("rectangle")
for name, referential in (("all properties", r), ("without shortcuts", r.select(granularity="low"))):
    res = hpdic.saturate(problem, referential)
    graph = hpdic.construct_graph(res, problem.conclusion, referential)
    print(f"{name}: {len(hpdic.enumerate_proofs(graph, 1000))} proofs")
