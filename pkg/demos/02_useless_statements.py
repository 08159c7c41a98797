"""
Valid but useless
=================

Saturation keeps every derivable fact. Backward marking from the conclusion
separates the facts that feed some proof from those that lead nowhere, which
is what a tutor needs to answer "this is true, but does it help?".
"""

import hpdic

problem = hpdic.load_example("rectangle")
r = hpdic.builtin_referential()
graph = hpdic.construct_graph(hpdic.saturate(problem, r), problem.conclusion, r)

for useful in (True, False):
    print("useful:" if useful else "\nvalid but useless:")
    for s in graph.statements:
        if s.useful == useful and s.kind not in ("implicit",):
            print(f"  [{s.kind}] {s.text}")
