"""Property rules, the rule-file format and the premise index.

Rule file syntax (terms as in problem files, uppercase-initial tokens are
variables)::

    rule rightTrPerp granularity low
      premises { perp(line(L1), line(L2)). triangle(A, B, C). }
      guards   { on(A, L1). on(B, L1). on(A, L2). on(C, L2). }
      result   rightTriangle(triangle(A, B, C), A)
      justification "A triangle that has a right angle is a right triangle".

The ``guards`` block is optional. Guards run left to right after all premises
match:

* ``X is Expr`` binds ``X`` (arithmetic, ``sqrt``, ``meet(L1, L2)``,
  ``angleAt(P, V, Q)``)
* ``X in Expr`` binds ``X`` to each element (``anglesBetween(L1, L2)``)
* ``<  >  =<  >=  ~=  ==  \\=``, ``on(P, L)``, ``subset(S, L)``, ``distinct(...)``
  filter; ``~=`` is equality within the engine tolerance.

``angleAt`` and ``anglesBetween`` only return useful angles, which is how a
rule is prevented from producing results about angles nobody asked for.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .geometry import DECLARATIONS, ENTITY_TYPES, VOCABULARY
from .matching import EXPRESSION_FUNCTORS, GUARD_FUNCTORS
from .problem import Diagnostic
from .terms import Quoted, Struct, TermSyntaxError, TokenStream, Var, format_term, parse_expr, parse_term, term_variables

__all__ = [
    "PropertyRule",
    "Referential",
    "ReferentialError",
    "parse_rules",
    "format_rule",
    "builtin_referential",
    "rules_using",
]

GRANULARITIES = ("low", "high")

_ENTITY_ARITY = {"line": 1, "angle": 3, "quad": 4, "triangle": 3, "segment": 2, "circle": 1, "value": 1}


@dataclass(frozen=True)
class PropertyRule:
    id: str
    justification: str
    premises: tuple[Struct, ...]
    result: Struct
    guards: tuple[Struct, ...] = ()
    granularity: str = "low"

    @property
    def premise_predicates(self) -> tuple[str, ...]:
        return tuple(p.functor for p in self.premises)

    @property
    def value_computation(self) -> tuple[Struct, ...]:
        """The ``is`` guards that compute a number used in the result."""
        result_vars = term_variables(self.result)
        return tuple(
            g for g in self.guards
            if g.functor == "is" and isinstance(g.args[0], Var) and g.args[0].name in result_vars
            and not _is_angle_lookup(g.args[1])
        )

    def __str__(self) -> str:
        return format_rule(self)


def _is_angle_lookup(expr) -> bool:
    return isinstance(expr, Struct) and expr.functor == "angleAt"


class ReferentialError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Referential:
    rules: tuple[PropertyRule, ...] = ()
    premise_index: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_rules(cls, rules: Iterable[PropertyRule]) -> "Referential":
        rules = tuple(rules)
        seen = set()
        for rule in rules:
            if rule.id in seen:
                raise ValueError(f"duplicate rule id {rule.id!r}")
            seen.add(rule.id)
        index: dict[str, list] = {}
        for rule in rules:
            for pos, pred in enumerate(rule.premise_predicates):
                index.setdefault(pred, []).append((rule, pos))
        return cls(rules, {k: tuple(v) for k, v in index.items()})

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def rule(self, rule_id: str) -> PropertyRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def result_predicates(self) -> set[str]:
        return {r.result.functor for r in self.rules}

    def select(self, *, ids=None, granularity=None, predicate=None) -> "Referential":
        """A sub-referential; ``predicate`` keeps rules that mention it anywhere."""
        kept = [
            r for r in self.rules
            if (ids is None or r.id in ids)
            and (granularity is None or r.granularity == granularity)
            and (predicate is None or predicate in r.premise_predicates or r.result.functor == predicate)
        ]
        return Referential.from_rules(kept)


def rules_using(predicate: str, r: Referential) -> list[tuple[PropertyRule, int]]:
    return list(r.premise_index.get(predicate, ()))


class _RuleProblem(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _check_pattern(term, sort: str | None = None) -> None:
    """Check a premise/result pattern against the vocabulary."""
    if sort is None:
        if not isinstance(term, Struct):
            raise _RuleProblem(f"{format_term(term)} is not a statement pattern", "syntax")
        if term.functor in DECLARATIONS and term.functor != "point":
            _check_pattern(term, term.functor)
            return
        sig = VOCABULARY.get(term.functor)
        if sig is None:
            raise _RuleProblem(f"unknown predicate {term.functor!r}", "unknown-predicate")
        if len(term.args) != len(sig.sorts):
            raise _RuleProblem(f"{term.functor}/{len(sig.sorts)} given {len(term.args)} arguments", "arity")
        for arg, s in zip(term.args, sig.sorts):
            _check_pattern(arg, s)
        return
    if isinstance(term, Var):
        return
    if sort == "point":
        if not isinstance(term, str):
            raise _RuleProblem(f"expected a point, got {format_term(term)}", "sort")
        return
    if not isinstance(term, Struct) or term.functor != sort:
        raise _RuleProblem(f"expected {sort}(...), got {format_term(term)}", "sort")
    if len(term.args) != _ENTITY_ARITY[sort]:
        raise _RuleProblem(f"{sort}/{_ENTITY_ARITY[sort]} given {len(term.args)} arguments", "arity")


def _check_expr(expr) -> None:
    if isinstance(expr, Struct):
        if expr.functor not in EXPRESSION_FUNCTORS and expr.functor not in ENTITY_TYPES:
            raise _RuleProblem(f"unknown function {expr.functor!r} in guard", "unknown-function")
        for a in expr.args:
            _check_expr(a)
    elif isinstance(expr, tuple):
        for a in expr:
            _check_expr(a)


def _check_rule(rule: PropertyRule) -> None:
    if not rule.premises:
        raise _RuleProblem("a rule needs at least one premise", "no-premises")
    if rule.granularity not in GRANULARITIES:
        raise _RuleProblem(f"granularity must be low or high, got {rule.granularity!r}", "granularity")
    for p in rule.premises:
        _check_pattern(p)
    _check_pattern(rule.result)
    bound = set().union(*(term_variables(p) for p in rule.premises))
    for g in rule.guards:
        if not isinstance(g, Struct) or g.functor not in GUARD_FUNCTORS:
            raise _RuleProblem(f"unknown guard {format_term(g)}", "unknown-guard")
        if g.functor in ("is", "in"):
            target, source = g.args
            _check_expr(source)
            unbound = term_variables(source) - bound
            bound |= term_variables(target)
        else:
            for a in g.args:
                _check_expr(a)
            unbound = term_variables(g) - bound
        if unbound:
            raise _RuleProblem(f"unbound variable {sorted(unbound)[0]} in guard {format_term(g)}", "unbound-variable")
    unbound = term_variables(rule.result) - bound
    if unbound:
        raise _RuleProblem(f"unbound variable {sorted(unbound)[0]} in result", "unbound-variable")


def _block(ts: TokenStream, *, expressions: bool) -> list:
    ts.expect("{")
    items = []
    while not ts.at("}"):
        items.append(parse_expr(ts) if expressions else parse_term(ts, allow_variables=True))
        ts.expect(".")
    ts.expect("}")
    return items


def _parse_one(ts: TokenStream) -> PropertyRule:
    ts.expect("rule")
    tok = ts.next()
    if tok.kind != "ident":
        ts.fail("expected a rule id", tok)
    rule_id = tok.text
    granularity = "low"
    if ts.at("granularity"):
        ts.next()
        granularity = ts.next().text
    ts.expect("premises")
    premises = _block(ts, expressions=False)
    guards = []
    if ts.at("guards"):
        ts.next()
        guards = _block(ts, expressions=True)
    ts.expect("result")
    result = parse_term(ts, allow_variables=True)
    ts.expect("justification")
    tok = ts.next()
    if tok.kind != "string":
        ts.fail("expected a quoted justification", tok)
    ts.expect(".")
    return PropertyRule(rule_id, json.loads(tok.text), tuple(premises), result, tuple(guards), granularity)


def parse_rules(text: str) -> Referential:
    """Parse a rule file; raise :class:`ReferentialError` on any problem."""
    ts = TokenStream(text) if text.strip() else None
    rules, diags, seen = [], [], set()
    while ts is not None and ts.peek().kind != "eof":
        start = ts.peek()
        try:
            rule = _parse_one(ts)
        except TermSyntaxError as exc:
            diags.append(Diagnostic("error", exc.line, f"syntax error at column {exc.column}: {exc.message}", "syntax"))
            break
        try:
            if rule.id in seen:
                raise _RuleProblem(f"duplicate rule id {rule.id!r}", "duplicate-id")
            _check_rule(rule)
        except _RuleProblem as exc:
            diags.append(Diagnostic("error", start.line, f"rule {rule.id}: {exc}", exc.code))
            continue
        seen.add(rule.id)
        rules.append(rule)
    if diags:
        raise ReferentialError(diags)
    return Referential.from_rules(rules)


def format_rule(rule: PropertyRule) -> str:
    lines = [f"rule {rule.id} granularity {rule.granularity}"]
    lines.append("  premises { " + " ".join(f"{format_term(p)}." for p in rule.premises) + " }")
    if rule.guards:
        lines.append("  guards { " + " ".join(f"{format_term(g)}." for g in rule.guards) + " }")
    lines.append(f"  result {format_term(rule.result)}")
    lines.append(f"  justification {Quoted(rule.justification)}.")
    return "\n".join(lines)


_BUILTIN: Referential | None = None


def builtin_referential() -> Referential:
    global _BUILTIN
    if _BUILTIN is None:
        text = resources.files("hpdic.data").joinpath("builtin.rules").read_text(encoding="utf-8")
        _BUILTIN = parse_rules(text)
    return _BUILTIN
