"""
Every proof of the rectangle problem
====================================

A quadrilateral with three right angles is a rectangle. This script parses
the bundled problem, saturates it with the built-in properties and prints
each distinct proof found in the resulting graph.
"""

import hpdic

problem = hpdic.load_example("rectangle")
print(hpdic.serialize_problem(problem))

referential = hpdic.builtin_referential()
result = hpdic.saturate(problem, referential)
print("conclusion reached:", result.conclusion_reached)
print(result.stats)

graph = hpdic.construct_graph(result, problem.conclusion, referential)
text = {s.id: s.text for s in graph.statements}

# A proof picks one inference for every derived statement it needs.
proofs = hpdic.enumerate_proofs(graph, limit=1000)
print(f"\n{len(proofs)} proofs; the two shortest:")
for proof in sorted(proofs, key=lambda p: len(p.inferences))[:2]:
    print("-" * 60)
    for inf in proof.inferences:
        premises = ", ".join(text[p] for p in inf.premises)
        print(f"{text[inf.result]}\n    by {inf.justification}\n    from {premises}")
