"""Reading, writing and checking problem files.

A problem file is a sequence of facts, one per ``.``::

    hypothese(point(a)).                  % implicit (points, lines, circles)
    hypothese(isAQuad(quad(a,b,c,d))).    % explicit
    auxiliary(line([a,c])).               % auxiliary: part of the super-figure
    conclusion(rectangle(quad(a,b,c,d))).
    usefulAngle([a],b,[c]).
    dictionary(line([a,b]), "l").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .geometry import (
    Angle,
    Circle,
    GeometryError,
    Line,
    Quad,
    Segment,
    Statement,
    Triangle,
    VOCABULARY,
    build_entity,
    build_statement,
    canonicalize_statement,
    check_point,
    sort_key,
)
from .terms import Quoted, Struct, TermSyntaxError, format_term, parse_facts

if TYPE_CHECKING:
    from .referential import Referential

__all__ = [
    "Diagnostic",
    "Problem",
    "ProblemError",
    "parse_problem",
    "serialize_problem",
    "validate_problem",
    "angles_in",
    "points_in",
]

IMPLICIT_PREDICATES = frozenset({"point", "line", "circle"})

_ERROR_CODES = {"VocabularyError": "unknown-predicate", "ArityError": "arity", "InvalidEntityError": "invalid-entity"}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    location: int  # 1-based line number, 0 when unknown
    message: str
    code: str

    def __str__(self) -> str:
        where = f"line {self.location}: " if self.location else ""
        return f"{self.severity}: {where}{self.message} [{self.code}]"


class ProblemError(ValueError):
    """Raised by :func:`parse_problem`; carries every diagnostic found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Problem:
    implicit_hypotheses: tuple[Statement, ...]
    explicit_hypotheses: tuple[Statement, ...]
    auxiliary_hypotheses: tuple[Statement, ...]
    conclusion: Statement
    useful_angles: frozenset[Angle]
    dictionary: tuple[tuple[object, str], ...] = ()
    # statement/entity -> source line; not part of equality
    locations: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def hypotheses(self) -> tuple[Statement, ...]:
        return self.implicit_hypotheses + self.explicit_hypotheses + self.auxiliary_hypotheses

    def origins(self) -> list[tuple[Statement, str]]:
        return (
            [(s, "implicit") for s in self.implicit_hypotheses]
            + [(s, "explicit") for s in self.explicit_hypotheses]
            + [(s, "auxiliary") for s in self.auxiliary_hypotheses]
        )

    @property
    def points(self) -> list[str]:
        return [s.args[0] for s in self.implicit_hypotheses if s.predicate == "point"]


def angles_in(x) -> Iterable[Angle]:
    if isinstance(x, Angle):
        yield x
    elif isinstance(x, Statement):
        for a in x.args:
            yield from angles_in(a)


def points_in(x) -> set[str]:
    if isinstance(x, str):
        return {x}
    if isinstance(x, Statement):
        return set().union(*(points_in(a) for a in x.args)) if x.args else set()
    if isinstance(x, Line):
        return set(x.points)
    if isinstance(x, Angle):
        return set(x.left) | set(x.right) | {x.vertex}
    if isinstance(x, (Quad, Triangle)):
        return set(x.vertices)
    if isinstance(x, Segment):
        return set(x.ends)
    return set()  # circles and values name no points


def _promoted_angles(explicit, auxiliary, conclusion) -> set[Angle]:
    out = set()
    for s in (*explicit, *auxiliary, conclusion):
        out.update(angles_in(s))
    return out


def parse_problem(text: str) -> Problem:
    """Parse a problem file; raise :class:`ProblemError` listing every error."""
    errors: list[Diagnostic] = []
    implicit, explicit, auxiliary, conclusions = [], [], [], []
    useful: list[Angle] = []
    dictionary: list[tuple[object, str]] = []
    locations: dict = {}

    def err(line, message, code):
        errors.append(Diagnostic("error", line, message, code))

    try:
        facts = list(parse_facts(text))
    except TermSyntaxError as exc:
        raise ProblemError([Diagnostic("error", exc.line, f"syntax error at column {exc.column}: {exc.message}", "syntax")])

    for term, tok in facts:
        line = tok.line
        if not isinstance(term, Struct):
            err(line, f"expected a wrapped fact, found {format_term(term)}", "syntax")
            continue
        wrapper, args = term.functor, term.args
        try:
            if wrapper in ("hypothese", "auxiliary", "conclusion"):
                if len(args) != 1:
                    err(line, f"{wrapper}/1 takes exactly one statement", "arity")
                    continue
                inner = args[0]
                if isinstance(inner, Struct) and inner.functor not in VOCABULARY:
                    err(line, f"unknown predicate {inner.functor!r}", "unknown-predicate")
                    continue
                s = build_statement(inner)
                locations.setdefault(s, line)
                if wrapper == "conclusion":
                    conclusions.append(s)
                elif wrapper == "auxiliary":
                    auxiliary.append(s)
                elif s.predicate in IMPLICIT_PREDICATES:
                    implicit.append(s)
                else:
                    explicit.append(s)
            elif wrapper == "usefulAngle":
                if len(args) != 3:
                    err(line, "usefulAngle/3 expects (side, vertex, side)", "arity")
                    continue
                a = Angle(*args)
                locations.setdefault(a, line)
                useful.append(a)
            elif wrapper == "dictionary":
                if len(args) != 2 or not isinstance(args[1], Quoted):
                    err(line, 'dictionary/2 expects (entity, "alias")', "arity")
                    continue
                target = args[0]
                entity = build_entity(target) if isinstance(target, Struct) else target
                if isinstance(entity, str):
                    check_point(entity)
                dictionary.append((entity, args[1].value))
                locations.setdefault(("alias", len(dictionary) - 1), line)
            else:
                err(line, f"unknown fact wrapper {wrapper!r}", "unknown-wrapper")
        except GeometryError as exc:
            err(line, str(exc), _ERROR_CODES.get(type(exc).__name__, "invalid-entity"))

    if not conclusions:
        err(0, "no conclusion given", "no-conclusion")
    elif len(conclusions) > 1:
        err(locations.get(conclusions[1], 0), "more than one conclusion given", "multiple-conclusions")
    if not (implicit or explicit or auxiliary):
        err(0, "no hypotheses given", "no-hypotheses")

    declared = {s.args[0] for s in implicit + auxiliary if s.predicate == "point"}
    for s in implicit + explicit + auxiliary + conclusions[:1]:
        missing = sorted(_referenced_points(s) - declared)
        if missing:
            err(locations.get(s, 0), f"undeclared points {', '.join(missing)} in {s}", "undeclared-point")
    for a in useful:
        missing = sorted(_referenced_points(a) - declared)
        if missing:
            err(locations.get(a, 0), f"undeclared points {', '.join(missing)} in useful angle {a}", "undeclared-point")

    if errors:
        raise ProblemError(errors)

    useful_set = set(useful) | _promoted_angles(explicit, auxiliary, conclusions[0])
    return Problem(
        tuple(_dedup(implicit)),
        tuple(_dedup(explicit)),
        tuple(_dedup(auxiliary)),
        conclusions[0],
        frozenset(useful_set),
        tuple(dictionary),
        locations,
    )


def _referenced_points(x) -> set[str]:
    if isinstance(x, Statement) and x.predicate == "point":
        return set()
    if isinstance(x, Statement) and x.predicate == "circle":
        return set()
    return points_in(x)


def _dedup(items):
    return list(dict.fromkeys(items))


def _entity_text(e) -> str:
    return e if isinstance(e, str) else format_term(e.to_term())


def serialize_problem(p: Problem) -> str:
    """Write ``p`` in canonical order; re-parsing yields an equal Problem."""
    out = []
    sections = [
        [f"hypothese({s})." for s in p.implicit_hypotheses],
        [f"hypothese({s})." for s in p.explicit_hypotheses],
        [f"auxiliary({s})." for s in p.auxiliary_hypotheses],
        [f"conclusion({p.conclusion})."],
    ]
    promoted = _promoted_angles(p.explicit_hypotheses, p.auxiliary_hypotheses, p.conclusion)
    extra = sorted(p.useful_angles - promoted, key=sort_key)
    sections.append([
        "usefulAngle({},{},{}).".format(format_term(a.left), a.vertex, format_term(a.right)) for a in extra
    ])
    sections.append([f"dictionary({_entity_text(e)}, {Quoted(alias)})." for e, alias in p.dictionary])
    for block in sections:
        if block:
            out.append("\n".join(block))
    return "\n\n".join(out) + "\n"


def validate_problem(p: Problem, r: "Referential") -> list[Diagnostic]:
    """Soft checks of a problem against a referential. Never raises."""
    diags: list[Diagnostic] = []
    loc = p.locations.get

    concl = p.conclusion
    if concl.predicate not in VOCABULARY:
        diags.append(Diagnostic("error", loc(concl, 0), f"unknown predicate {concl.predicate!r} in conclusion", "unknown-predicate"))
    else:
        try:
            canonicalize_statement(concl)
        except GeometryError as exc:
            diags.append(Diagnostic("error", loc(concl, 0), str(exc), "invalid-statement"))
        if concl not in p.hypotheses and concl.predicate not in r.result_predicates():
            diags.append(Diagnostic(
                "warning", loc(concl, 0),
                f"no rule concludes {concl.predicate!r}; the conclusion cannot be derived", "underivable-conclusion",
            ))

    for s in p.hypotheses:
        if s.predicate not in VOCABULARY:
            diags.append(Diagnostic("error", loc(s, 0), f"unknown predicate {s.predicate!r}", "unknown-predicate"))
        for a in angles_in(s):
            if a not in p.useful_angles:
                diags.append(Diagnostic(
                    "warning", loc(s, 0), f"angle {a} used in a hypothesis is not useful; added", "angle-not-useful",
                ))

    lines = [s.entity for s in p.hypotheses if s.predicate == "line"]
    for a in sorted(p.useful_angles, key=sort_key):
        for side in (a.left, a.right):
            if not any(a.vertex in ln and set(side) <= set(ln.points) for ln in lines):
                diags.append(Diagnostic(
                    "warning", loc(a, 0),
                    f"useful angle {a}: side {format_term(side)} lies on no declared line through {a.vertex}",
                    "angle-off-line",
                ))

    seen: dict[str, object] = {}
    for i, (entity, alias) in enumerate(p.dictionary):
        other = seen.setdefault(alias, entity)
        if other != entity:
            diags.append(Diagnostic(
                "warning", loc(("alias", i), 0),
                f"alias {alias!r} names both {_entity_text(other)} and {_entity_text(entity)}", "alias-collision",
            ))
    return diags
