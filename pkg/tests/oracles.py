"""Slow, obviously-correct reference implementations used by the tests."""

from __future__ import annotations

import itertools
import random

from hpdic.engine import EngineConfig, Inference
from hpdic.geometry import MEASURES, Statement
from hpdic.graph import HpdicGraph, InferenceNode, StatementNode
from hpdic.matching import MatchContext, evaluate_guards, instantiate, match
from hpdic.problem import Problem, angles_in


def _measured(s):
    pos = MEASURES.get(s.predicate)
    return None if pos is None else (s.args[pos], s.args[-1])


def naive_saturate(problem: Problem, r, cfg: EngineConfig | None = None):
    """Re-run every rule on every tuple of statements until nothing changes.

    Returns ``(statements, inferences, triggers, waves)`` where ``triggers``
    counts every (statement, rule, position) considered across all rounds.
    """
    cfg = cfg or EngineConfig()
    ctx = MatchContext(problem.useful_angles, cfg.tolerance, cfg.gate_angles)
    statements = dict.fromkeys(s for s, _ in problem.origins())
    registry = {}
    for s in statements:
        m = _measured(s)
        if m is not None:
            registry.setdefault(m[0], m[1])
    inferences = set()
    triggers = 0
    waves = 0
    while True:
        snapshot = list(statements)
        new_statements, new_inferences = [], []
        for rule in r:
            pools = [[s for s in snapshot if s.predicate == p.functor] for p in rule.premises]
            triggers += sum(len(pool) for pool in pools)
            for combo in itertools.product(*pools):
                for b in _match_all(rule.premises, combo):
                    for final in evaluate_guards(rule.guards, b, ctx):
                        result = instantiate(rule.result, final)
                        if result is None:
                            continue
                        if cfg.gate_angles and any(a not in problem.useful_angles for a in angles_in(result)):
                            continue
                        m = _measured(result)
                        if m is not None:
                            known = registry.setdefault(m[0], m[1])
                            if known != m[1]:
                                args = list(result.args)
                                args[-1] = known
                                result = Statement(result.predicate, tuple(args))
                        if result in combo:
                            continue
                        inf = Inference(result, rule.id, tuple(combo))
                        if inf not in inferences:
                            new_inferences.append(inf)
                            inferences.add(inf)
                        if result not in statements:
                            statements[result] = None
                            new_statements.append(result)
        if not new_inferences:
            break
        if new_statements:
            waves += 1
    return set(statements), inferences, triggers, waves


def _match_all(patterns, grounds, i=0, binding=None):
    binding = {} if binding is None else binding
    if i == len(patterns):
        yield binding
        return
    for b in match(patterns[i], grounds[i], binding):
        yield from _match_all(patterns, grounds, i + 1, b)


# ---------------------------------------------------------------- graphs


def random_hypergraph(rng: random.Random, n_statements: int, n_inferences: int, n_hypotheses: int) -> HpdicGraph:
    """A random bipartite graph; every non-hypothesis statement may have any
    number of derivations, and cycles are allowed."""
    ids = [f"s{i:02d}" for i in range(n_statements)]
    statements = [
        StatementNode(sid, f"fact{i}", "fact", "explicit" if i < n_hypotheses else "intermediate")
        for i, sid in enumerate(ids)
    ]
    derived = ids[n_hypotheses:]
    inferences = []
    for k in range(n_inferences if derived else 0):
        result = rng.choice(derived)
        others = [s for s in ids if s != result]
        premises = tuple(rng.sample(others, rng.randint(1, min(3, len(others)))))
        inferences.append(InferenceNode(f"i{k:02d}", f"rule{k % 3}", "", "low", premises, result))
    conclusion = rng.choice(derived) if derived else ids[-1]
    statements = [
        StatementNode(s.id, s.text, s.predicate, "conclusion" if s.id == conclusion and s.kind == "intermediate" else s.kind)
        for s in statements
    ]
    return HpdicGraph(tuple(statements), tuple(inferences), conclusion)


def useful_by_paths(g: HpdicGraph) -> tuple[set[str], set[str]]:
    """Useful statements are those with a premise->result path to the
    conclusion; checked by a separate search from every statement."""
    succ = {s.id: set() for s in g.statements}
    for inf in g.inferences:
        for p in inf.premises:
            succ[p].add(inf.result)

    def reaches(start):
        seen, stack = set(), [start]
        while stack:
            x = stack.pop()
            if x == g.conclusion:
                return True
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        return False

    statements = {s.id for s in g.statements if reaches(s.id)}
    inferences = {i.id for i in g.inferences if i.result in statements}
    return statements, inferences


def cycles_by_permutation(g: HpdicGraph, max_length: int) -> set[tuple[str, ...]]:
    """Every elementary cycle, found by trying all vertex sequences."""
    edges = {(p, inf.result) for inf in g.inferences for p in inf.premises}
    ids = sorted(s.id for s in g.statements)
    out = set()
    for k in range(1, max_length + 1):
        for seq in itertools.permutations(ids, k):
            if seq[0] != min(seq):
                continue
            if all((seq[i], seq[(i + 1) % k]) in edges for i in range(k)):
                out.add(seq)
    return out


def proofs_by_choice(g: HpdicGraph) -> set[frozenset[str]]:
    """Try every assignment of one derivation (or none) per statement and keep
    the acyclic, premise-closed ones rooted at the conclusion."""
    by_id = {s.id: s for s in g.statements}
    derivs = {s.id: [i for i in g.inferences if i.result == s.id] for s in g.statements}
    derived = [s.id for s in g.statements if not s.is_hypothesis and derivs[s.id]]
    options = [[None] + derivs[s] for s in derived]
    proofs = set()
    for assignment in itertools.product(*options):
        chosen = dict(zip(derived, assignment))
        used, stack, ok = set(), [g.conclusion], True
        while stack and ok:
            s = stack.pop()
            if s in used or by_id[s].is_hypothesis:
                continue
            used.add(s)
            if chosen.get(s) is None:
                ok = False
                break
            stack.extend(chosen[s].premises)
        if not ok:
            continue
        # drop choices for statements the proof does not reach
        picked = {s: chosen[s] for s in used}
        if _has_cycle(picked):
            continue
        proofs.add(frozenset(inf.id for inf in picked.values()))
    return proofs


def _has_cycle(picked: dict) -> bool:
    state = {}

    def visit(s):
        if state.get(s) == 1:
            return True
        if state.get(s) == 2 or s not in picked:
            return False
        state[s] = 1
        if any(visit(p) for p in picked[s].premises):
            return True
        state[s] = 2
        return False

    return any(visit(s) for s in picked)
