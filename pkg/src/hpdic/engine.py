"""Premise-triggered saturation.

Every statement is explored exactly once. Exploring a statement only looks
at the rules that use its predicate as a premise, with the statement pinned
at that premise position; the other premises are joined against the knowledge
base. Work is therefore proportional to the number of (statement, rule,
position) trigger events instead of re-running every rule on every round.

Measured quantities follow a first-result-wins policy: once an angle or a
segment has a value, every later inference about it reuses that value.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .geometry import MEASURES, Angle, Statement, Value, relative_close, sort_key
from .matching import MatchContext, evaluate_guards, instantiate, match, rule_instances
from .problem import Problem, angles_in
from .referential import PropertyRule, Referential, rules_using

__all__ = [
    "Inference",
    "KnowledgeBase",
    "EngineConfig",
    "SaturationResult",
    "StatementCapExceeded",
    "UnitMismatchError",
    "infer_using",
    "saturate",
    "register_value",
    "values_equal",
    "verify_inference",
]

logger = logging.getLogger(__name__)

ORIGINS = ("implicit", "explicit", "auxiliary", "derived")


class StatementCapExceeded(RuntimeError):
    pass


class UnitMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Inference:
    """One application of a rule. Identity ignores premise order."""

    result: Statement
    rule_id: str
    premises: tuple[Statement, ...]

    def __post_init__(self):
        if not self.premises:
            raise ValueError("an inference needs at least one premise")
        if self.result in self.premises:
            raise ValueError(f"inference result {self.result} is one of its premises")

    @property
    def key(self) -> tuple:
        return (self.rule_id, tuple(sorted(sort_key(p) for p in self.premises)), self.result)

    def __eq__(self, other):
        return isinstance(other, Inference) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        prem = ", ".join(str(p) for p in self.premises)
        return f"Inference({self.result}, {self.rule_id}, [{prem}])"


@dataclass
class EngineConfig:
    tolerance: float = 0.01
    max_statements: int = 100_000
    allow_reversal: bool = False  # display only: accept ABC and CBA as names of one angle
    exploration_order: str = "fifo"  # fifo | lifo | random
    seed: int | None = None  # for exploration_order="random"
    gate_angles: bool = True  # off: rules may create any angle (testing hook)

    def __post_init__(self):
        if not 0 < self.tolerance <= 0.1:
            raise ValueError(f"tolerance must lie in (0, 0.1], got {self.tolerance}")
        if self.max_statements <= 0:
            raise ValueError("max_statements must be positive")
        if self.exploration_order not in ("fifo", "lifo", "random"):
            raise ValueError(f"unknown exploration order {self.exploration_order!r}")


@dataclass
class KnowledgeBase:
    statements: dict[Statement, str] = field(default_factory=dict)  # statement -> origin
    inferences: dict[Inference, Inference] = field(default_factory=dict)
    value_registry: dict = field(default_factory=dict)
    by_predicate: dict[str, list[Statement]] = field(default_factory=dict)
    useful_angles: frozenset = frozenset()

    @classmethod
    def from_problem(cls, problem: Problem) -> "KnowledgeBase":
        kb = cls(useful_angles=problem.useful_angles)
        for s, origin in problem.origins():
            if kb.add_statement(s, origin):
                measured = _measure(s)
                if measured is not None:
                    register_value(kb, *measured)
        return kb

    def __contains__(self, s: Statement) -> bool:
        return s in self.statements

    def add_statement(self, s: Statement, origin: str = "derived") -> bool:
        if s in self.statements:
            return False
        if origin not in ORIGINS:
            raise ValueError(f"unknown origin {origin!r}")
        self.statements[s] = origin
        self.by_predicate.setdefault(s.predicate, []).append(s)
        return True

    def add_inference(self, inf: Inference) -> bool:
        if inf in self.inferences:
            return False
        for s in (*inf.premises, inf.result):
            if s not in self.statements:
                raise ValueError(f"{s} is not in the knowledge base")
        self.inferences[inf] = inf
        return True

    def lookup(self, predicate: str) -> list[Statement]:
        return self.by_predicate.get(predicate, [])

    def derivations(self, s: Statement) -> list[Inference]:
        return [inf for inf in self.inferences if inf.result == s]


@dataclass
class SaturationResult:
    kb: KnowledgeBase
    conclusion: Statement
    conclusion_reached: bool
    stats: dict


def values_equal(a: Value, b: Value, cfg: EngineConfig | None = None) -> bool:
    if a.unit != b.unit:
        raise UnitMismatchError(f"cannot compare {a.unit} with {b.unit}")
    tolerance = cfg.tolerance if cfg is not None else EngineConfig.tolerance
    return relative_close(a.magnitude, b.magnitude, tolerance)


def register_value(kb: KnowledgeBase, entity, v: Value) -> tuple[str, Value]:
    """First result wins: ``("stored", v)`` or ``("reused", registered)``."""
    known = kb.value_registry.get(entity)
    if known is None:
        kb.value_registry[entity] = v
        return "stored", v
    return "reused", known


def _measure(s: Statement):
    pos = MEASURES.get(s.predicate)
    if pos is None:
        return None
    return s.args[pos], s.args[-1]


def _context(kb: KnowledgeBase, cfg: EngineConfig) -> MatchContext:
    return MatchContext(kb.useful_angles, cfg.tolerance, cfg.gate_angles)


def _apply_value_policy(kb: KnowledgeBase, result: Statement, stats: dict | None) -> Statement:
    measured = _measure(result)
    if measured is None:
        return result
    entity, v = measured
    status, registered = register_value(kb, entity, v)
    if status == "stored" or registered == v:
        return result
    if stats is not None:
        stats["values_reused"] += 1
        if not relative_close(registered.magnitude, v.magnitude, 0.1):
            stats["value_conflicts"] += 1
            logger.warning("%s recomputed as %s; keeping the first value", entity, v)
    args = list(result.args)
    args[-1] = registered
    return Statement(result.predicate, tuple(args))


def _gated_out(result: Statement, kb: KnowledgeBase, cfg: EngineConfig) -> bool:
    if not cfg.gate_angles:
        return False
    # hypothesis angles are promoted to useful, so this only rejects fresh angles
    return any(a not in kb.useful_angles for a in angles_in(result))


def infer_using(
    new_premise: Statement,
    kb: KnowledgeBase,
    r: Referential,
    cfg: EngineConfig | None = None,
    stats: dict | None = None,
) -> list[Inference]:
    """Every new inference that has ``new_premise`` among its premises.

    Values of measured results go through the first-result-wins registry,
    which is updated as a side effect.
    """
    cfg = cfg or EngineConfig()
    ctx = _context(kb, cfg)
    found: dict[tuple, Inference] = {}
    for rule, pos in rules_using(new_premise.predicate, r):
        if stats is not None:
            stats["matcher_invocations"] += 1
            trigger = (new_premise, rule.id, pos)
            if trigger in stats["_triggers"]:
                stats["repeated_triggers"] += 1
            stats["_triggers"].add(trigger)
        for premises, result in rule_instances(rule, pos, new_premise, kb.lookup, ctx):
            if _gated_out(result, kb, cfg):
                continue
            result = _apply_value_policy(kb, result, stats)
            if result in premises:
                continue
            inf = Inference(result, rule.id, premises)
            if inf in kb.inferences:
                continue
            # a rule with two premises of one predicate finds the same inference
            # at both positions; keep the smallest ordering so exploration order
            # cannot leak into the result
            old = found.get(inf.key)
            if old is None or _order_key(inf) < _order_key(old):
                found[inf.key] = inf
    return list(found.values())


def _order_key(inf: Inference) -> tuple:
    return tuple(sort_key(p) for p in inf.premises)


def _new_stats() -> dict:
    return {
        "statements": 0,
        "inferences": 0,
        "matcher_invocations": 0,
        "repeated_triggers": 0,
        "explored": 0,
        "values_reused": 0,
        "value_conflicts": 0,
        "_triggers": set(),
    }


def saturate(problem: Problem, r: Referential, cfg: EngineConfig | None = None) -> SaturationResult:
    """Forward-chain from the hypotheses to the least fixed point of ``r``."""
    cfg = cfg or EngineConfig()
    kb = KnowledgeBase.from_problem(problem)
    if len(kb.statements) > cfg.max_statements:
        raise StatementCapExceeded(f"hypotheses alone exceed max_statements={cfg.max_statements}")
    stats = _new_stats()
    rng = random.Random(cfg.seed)
    to_explore = deque(kb.statements)
    queued = set(to_explore)

    while to_explore:
        if cfg.exploration_order == "fifo":
            s = to_explore.popleft()
        elif cfg.exploration_order == "lifo":
            s = to_explore.pop()
        else:
            i = rng.randrange(len(to_explore))
            to_explore.rotate(-i)
            s = to_explore.popleft()
        stats["explored"] += 1
        for inf in infer_using(s, kb, r, cfg, stats):
            if kb.add_statement(inf.result, "derived"):
                if len(kb.statements) > cfg.max_statements:
                    raise StatementCapExceeded(
                        f"saturation exceeded max_statements={cfg.max_statements}"
                    )
                if inf.result not in queued:
                    queued.add(inf.result)
                    to_explore.append(inf.result)
            kb.add_inference(inf)
            logger.debug("%s  [%s]  <- %s", inf.result, inf.rule_id, ", ".join(map(str, inf.premises)))

    stats["statements"] = len(kb.statements)
    stats["inferences"] = len(kb.inferences)
    stats.pop("_triggers")
    return SaturationResult(kb, problem.conclusion, problem.conclusion in kb.statements, stats)


def verify_inference(
    inf: Inference,
    rule: PropertyRule,
    useful_angles: Iterable[Angle] = frozenset(),
    cfg: EngineConfig | None = None,
) -> bool:
    """Re-check ``inf`` against ``rule`` from scratch.

    A measured result may carry a previously registered value instead of the
    one the rule computes; it is accepted when the two agree within tolerance.
    """
    cfg = cfg or EngineConfig()
    if inf.rule_id != rule.id or len(inf.premises) != len(rule.premises):
        return False
    ctx = MatchContext(frozenset(useful_angles), cfg.tolerance, cfg.gate_angles)

    def bindings(i, b):
        if i == len(rule.premises):
            yield b
            return
        for b2 in match(rule.premises[i], inf.premises[i], b):
            yield from bindings(i + 1, b2)

    for b in bindings(0, {}):
        for final in evaluate_guards(rule.guards, b, ctx):
            result = instantiate(rule.result, final)
            if result is None:
                continue
            if result == inf.result:
                return True
            m1, m2 = _measure(result), _measure(inf.result)
            if m1 and m2 and m1[0] == m2[0] and values_equal(m1[1], m2[1], cfg):
                return True
    return False
