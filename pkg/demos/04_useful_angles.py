"""
Why useful angles matter
========================

Eight rays leave one vertex. Any two of them form an angle, and any two
angles sharing a ray are adjacent, so an unrestricted run drowns in facts
nobody asked for. Declaring the two angles of interest keeps the run small.
"""

import hpdic

problem = hpdic.load_example("fan")
r = hpdic.builtin_referential()

gated = hpdic.saturate(problem, r)
ungated = hpdic.saturate(problem, r, hpdic.EngineConfig(gate_angles=False))

print("useful angles:", ", ".join(map(str, sorted(problem.useful_angles, key=str))))
print("statements with gating:   ", gated.stats["statements"])
print("statements without gating:", ungated.stats["statements"])
