"""One-way matching of rule patterns against ground canonical statements.

A pattern matches a statement if it matches *any* presentation of it: both
orientations of an angle, the eight rotations/reflections of a quad, every
vertex order of a triangle, both argument orders of ``perp`` and so on. Rules
can therefore be written naturally (``triangle(A, B, C)`` binds ``A`` to each
vertex in turn) while the knowledge base keeps one fact per object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .geometry import (
    Angle,
    GeometryError,
    Line,
    Segment,
    Statement,
    build_statement,
    relative_close,
    sort_key,
)
from .terms import Struct, Var

__all__ = [
    "MatchContext",
    "match",
    "substitute",
    "evaluate_guards",
    "instantiate",
    "rule_instances",
    "GUARD_FUNCTORS",
    "EXPRESSION_FUNCTORS",
]

Binding = dict

GUARD_FUNCTORS = frozenset({"is", "in", "<", ">", "=<", ">=", "~=", "\\=", "==", "on", "subset", "distinct"})
EXPRESSION_FUNCTORS = frozenset({"+", "-", "*", "/", "sqrt", "abs", "meet", "angleAt", "anglesBetween"})


@dataclass
class MatchContext:
    """What guards may consult besides the binding itself.

    With ``gate_angles`` on, angles can only be created from ``useful_angles``.
    With it off, any two rays through a vertex give an angle.
    """

    useful_angles: frozenset = frozenset()
    tolerance: float = 0.01
    gate_angles: bool = True
    _sorted: list = field(default=None, init=False, repr=False)

    def approx_equal(self, a: float, b: float) -> bool:
        return relative_close(a, b, self.tolerance)

    def _useful(self) -> list[Angle]:
        if self._sorted is None:
            self._sorted = sorted(self.useful_angles, key=sort_key)
        return self._sorted

    def angle_at(self, p: str, v: str, q: str) -> Angle | None:
        for a in self._useful():
            if a.vertex == v and ((p in a.left and q in a.right) or (q in a.left and p in a.right)):
                return a
        if self.gate_angles or p == q or v in (p, q):
            return None
        return Angle((p,), v, (q,))

    def angles_between(self, l1: tuple, l2: tuple) -> list[Angle]:
        common = set(l1) & set(l2)
        if len(common) != 1 or set(l1) == set(l2):
            return []
        (v,) = common
        s1, s2 = set(l1), set(l2)
        found = [
            a for a in self._useful()
            if a.vertex == v
            and ((set(a.left) <= s1 and set(a.right) <= s2) or (set(a.left) <= s2 and set(a.right) <= s1))
        ]
        if self.gate_angles:
            return found
        for p in sorted(s1 - {v}):
            for q in sorted(s2 - {v}):
                if not any((p in a.left and q in a.right) or (q in a.left and p in a.right) for a in found):
                    found.append(Angle((p,), v, (q,)))
        return found


def match(pattern: Any, ground: Any, binding: Binding) -> Iterator[Binding]:
    """Yield every extension of ``binding`` under which ``pattern`` equals ``ground``."""
    if isinstance(pattern, Var):
        if pattern.name in binding:
            if binding[pattern.name] == ground:
                yield binding
        else:
            extended = dict(binding)
            extended[pattern.name] = ground
            yield extended
    elif isinstance(pattern, Struct):
        if getattr(ground, "functor", None) != pattern.functor:
            return
        for args in ground.presentations():
            if len(args) == len(pattern.args):
                yield from _match_seq(pattern.args, args, 0, binding)
    elif isinstance(pattern, tuple):
        if isinstance(ground, tuple) and len(ground) == len(pattern):
            yield from _match_seq(pattern, ground, 0, binding)
    elif isinstance(pattern, (int, float)) and not isinstance(ground, (str, tuple)):
        if isinstance(ground, (int, float)) and float(pattern) == float(ground):
            yield binding
    elif pattern == ground:
        yield binding


def _match_seq(patterns, grounds, i, binding):
    if i == len(patterns):
        yield binding
        return
    for b in match(patterns[i], grounds[i], binding):
        yield from _match_seq(patterns, grounds, i + 1, b)


def substitute(term: Any, binding: Binding) -> Any:
    if isinstance(term, Var):
        return binding[term.name]
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(substitute(a, binding) for a in term.args))
    if isinstance(term, tuple):
        return tuple(substitute(a, binding) for a in term)
    return term


class _Fail(Exception):
    pass


def _points(x) -> tuple:
    if isinstance(x, tuple):
        return x
    if isinstance(x, Line):
        return x.points
    if isinstance(x, Segment):
        return x.ends
    if isinstance(x, str):
        return (x,)
    raise _Fail


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise _Fail
    return float(x)


def _eval(expr: Any, b: Binding, ctx: MatchContext) -> Any:
    if isinstance(expr, Var):
        if expr.name not in b:
            raise _Fail
        return b[expr.name]
    if isinstance(expr, tuple):
        return tuple(_eval(e, b, ctx) for e in expr)
    if not isinstance(expr, Struct):
        return expr
    f, args = expr.functor, expr.args
    vals = [_eval(a, b, ctx) for a in args]
    if f in ("+", "*", "/") or (f == "-" and len(vals) == 2):
        x, y = _number(vals[0]), _number(vals[1])
        if f == "+":
            return x + y
        if f == "-":
            return x - y
        if f == "*":
            return x * y
        if y == 0:
            raise _Fail
        return x / y
    if f == "-":
        return -_number(vals[0])
    if f == "sqrt":
        x = _number(vals[0])
        if x < 0:
            raise _Fail
        return math.sqrt(x)
    if f == "abs":
        return abs(_number(vals[0]))
    if f == "meet":
        common = set(_points(vals[0])) & set(_points(vals[1]))
        if len(common) != 1:
            raise _Fail
        return common.pop()
    if f == "angleAt":
        a = ctx.angle_at(*vals)
        if a is None:
            raise _Fail
        return a
    if f == "anglesBetween":
        return ctx.angles_between(_points(vals[0]), _points(vals[1]))
    raise _Fail


def _test(goal: Struct, b: Binding, ctx: MatchContext) -> bool:
    f, args = goal.functor, goal.args
    if f in ("<", ">", "=<", ">=", "~="):
        x, y = _number(_eval(args[0], b, ctx)), _number(_eval(args[1], b, ctx))
        if f == "<":
            return x < y
        if f == ">":
            return x > y
        if f == "=<":
            return x <= y
        if f == ">=":
            return x >= y
        return ctx.approx_equal(x, y)
    if f == "==":
        return _eval(args[0], b, ctx) == _eval(args[1], b, ctx)
    if f == "\\=":
        return _eval(args[0], b, ctx) != _eval(args[1], b, ctx)
    if f == "on":
        return _eval(args[0], b, ctx) in _points(_eval(args[1], b, ctx))
    if f == "subset":
        return set(_points(_eval(args[0], b, ctx))) <= set(_points(_eval(args[1], b, ctx)))
    if f == "distinct":
        vals = [_eval(a, b, ctx) for a in args]
        return len(set(vals)) == len(vals)
    raise _Fail


def evaluate_guards(guards: tuple, binding: Binding, ctx: MatchContext, i: int = 0) -> Iterator[Binding]:
    """Run guards left to right; ``is`` binds, ``in`` enumerates, others filter."""
    if i == len(guards):
        yield binding
        return
    goal = guards[i]
    try:
        if goal.functor in ("is", "in"):
            target, source = goal.args
            value = _eval(source, binding, ctx)
            candidates = value if goal.functor == "in" else [value]
            for v in candidates:
                yield from _extend(target, v, guards, binding, ctx, i)
            return
        ok = _test(goal, binding, ctx)
    except _Fail:
        return
    if ok:
        yield from evaluate_guards(guards, binding, ctx, i + 1)


def _extend(target, value, guards, binding, ctx, i):
    for b in match(target, value, binding):
        yield from evaluate_guards(guards, b, ctx, i + 1)


def instantiate(result: Struct, binding: Binding) -> Statement | None:
    """Ground the result pattern; ``None`` when it names a degenerate object."""
    try:
        return build_statement(substitute(result, binding))
    except GeometryError:
        return None


def rule_instances(
    rule,
    position: int,
    trigger: Statement,
    lookup: Callable[[str], Iterable[Statement]],
    ctx: MatchContext,
) -> Iterator[tuple[tuple[Statement, ...], Statement]]:
    """Yield ``(premises, result)`` for every firing of ``rule`` with ``trigger``
    pinned at premise ``position`` and the other premises drawn from ``lookup``.
    """
    patterns = rule.premises
    order = [i for i in range(len(patterns)) if i != position]

    def join(k, binding, chosen):
        if k == len(order):
            for final in evaluate_guards(rule.guards, binding, ctx):
                result = instantiate(rule.result, final)
                if result is not None:
                    yield tuple(chosen[i] for i in range(len(patterns))), result
            return
        i = order[k]
        for s in lookup(patterns[i].functor):
            for b in match(patterns[i], s, binding):
                chosen[i] = s
                yield from join(k + 1, b, chosen)

    for b in match(patterns[position], trigger, {}):
        yield from join(0, b, {position: trigger})
