"""
Writing your own properties
===========================

A referential is a plain text file of rules. Guards filter matches and can
compute values; ``angleAt`` only returns angles the problem declared useful.
"""

import hpdic

RULES = '''
rule perpPerpParallel
  premises { perp(line(L1), line(L3)). perp(line(L2), line(L3)). }
  guards { L1 \\= L2. }
  result parallel(line(L1), line(L2))
  justification "If two lines are perpendicular to a third, they are parallel".
'''

r = hpdic.parse_rules(RULES)
problem = hpdic.load_example("perp_perp_parallel")
res = hpdic.saturate(problem, r)
graph = hpdic.construct_graph(res, problem.conclusion, r)
print(hpdic.export_json(graph))
print(hpdic.export_dot(graph))
