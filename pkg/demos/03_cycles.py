"""
Cycles between reciprocal properties
====================================

Perpendicular legs make a right triangle, and a right triangle has a right
angle, which in turn makes the legs perpendicular. Each reciprocal pair of
properties shows up as a short cycle in the statement graph. Saturation still
terminates because a statement is only explored once.
"""

import hpdic

problem = hpdic.load_example("right_triangle")
r = hpdic.builtin_referential()
graph = hpdic.construct_graph(hpdic.saturate(problem, r), problem.conclusion, r)
text = {s.id: s.text for s in graph.statements}

for cycle in hpdic.detect_cycles(graph, max_length=3):
    print(" -> ".join(text[x] for x in cycle + cycle[:1]))
