"""Geometric entities and statements, each with exactly one canonical encoding.

Entity constructors canonicalize their input, so any ``Line``, ``Angle``,
``Quad``... that exists is already in canonical form. Statements are built
through :func:`canonicalize_statement` (or :func:`build_statement` from a parsed
term), which checks the predicate vocabulary and sorts the arguments of
symmetric predicates.

Points are plain lowercase strings. Every other entity is wrapped in a typed
constructor (``line([a,b])``, ``circle(k)``), so a point ``c`` and a circle
``circle(c)`` never collide.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Any, ClassVar, Iterable, Sequence, Union

from .terms import Struct, format_term

__all__ = [
    "GeometryError",
    "InvalidEntityError",
    "VocabularyError",
    "ArityError",
    "Line",
    "Ray",
    "Angle",
    "Quad",
    "Triangle",
    "Segment",
    "Circle",
    "Value",
    "Statement",
    "Signature",
    "VOCABULARY",
    "DECLARATIONS",
    "MEASURES",
    "check_point",
    "canonicalize_line",
    "canonicalize_statement",
    "build_entity",
    "build_statement",
    "angle_names",
    "line_names",
    "entities_in",
    "sort_key",
    "relative_close",
]

POINT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class GeometryError(ValueError):
    pass


class InvalidEntityError(GeometryError):
    pass


class VocabularyError(GeometryError):
    pass


class ArityError(GeometryError):
    pass


def check_point(p: Any) -> str:
    if not isinstance(p, str) or not POINT_RE.match(p):
        raise InvalidEntityError(f"invalid point name {p!r}")
    return p


def _points(seq: Any, what: str) -> tuple[str, ...]:
    if isinstance(seq, str) or not isinstance(seq, Iterable):
        raise InvalidEntityError(f"{what} expects a list of points, got {seq!r}")
    return tuple(sorted({check_point(p) for p in seq}))


@dataclass(frozen=True)
class Line:
    """A line, identified by the sorted list of every point known to lie on it."""

    points: tuple[str, ...]
    functor: ClassVar[str] = "line"

    def __post_init__(self):
        pts = _points(self.points, "line")
        if len(pts) < 2:
            raise InvalidEntityError(f"a line needs at least 2 distinct points, got {list(self.points)}")
        object.__setattr__(self, "points", pts)

    def term_args(self) -> tuple:
        return (self.points,)

    def presentations(self) -> list[tuple]:
        return [(self.points,)]

    def to_term(self) -> Struct:
        return Struct("line", (self.points,))

    def __contains__(self, point: str) -> bool:
        return point in self.points

    def __str__(self) -> str:
        return format_term(self.to_term())


@dataclass(frozen=True)
class Ray:
    vertex: str
    side_points: tuple[str, ...]

    def __post_init__(self):
        pts = _points(self.side_points, "ray")
        if not pts:
            raise InvalidEntityError("a ray needs at least one point besides its vertex")
        if check_point(self.vertex) in pts:
            raise InvalidEntityError(f"ray side points {list(pts)} contain the vertex {self.vertex}")
        object.__setattr__(self, "side_points", pts)


@dataclass(frozen=True)
class Angle:
    """An angle: two rays (as point lists) sharing a vertex.

    The smaller side list is stored first; orientation is a display concern.
    """

    left: tuple[str, ...]
    vertex: str
    right: tuple[str, ...]
    functor: ClassVar[str] = "angle"

    def __post_init__(self):
        left = Ray(self.vertex, self.left).side_points
        right = Ray(self.vertex, self.right).side_points
        if set(left) & set(right):
            raise InvalidEntityError(f"angle sides {list(left)} and {list(right)} overlap")
        if right < left:
            left, right = right, left
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def rays(self) -> tuple[Ray, Ray]:
        return Ray(self.vertex, self.left), Ray(self.vertex, self.right)

    def term_args(self) -> tuple:
        return (self.left, self.vertex, self.right)

    def presentations(self) -> list[tuple]:
        return [(self.left, self.vertex, self.right), (self.right, self.vertex, self.left)]

    def to_term(self) -> Struct:
        return Struct("angle", self.term_args())

    def __str__(self) -> str:
        return format_term(self.to_term())


def _dihedral(cycle: tuple) -> list[tuple]:
    n = len(cycle)
    out = []
    for seq in (cycle, tuple(reversed(cycle))):
        for k in range(n):
            out.append(seq[k:] + seq[:k])
    return out


@dataclass(frozen=True)
class Quad:
    """Quadrilateral; vertices in cyclic order, minimal rotation/reflection stored."""

    vertices: tuple[str, str, str, str]
    functor: ClassVar[str] = "quad"

    def __post_init__(self):
        vs = tuple(check_point(p) for p in self.vertices)
        if len(vs) != 4 or len(set(vs)) != 4:
            raise InvalidEntityError(f"a quad needs 4 distinct vertices, got {list(self.vertices)}")
        object.__setattr__(self, "vertices", min(_dihedral(vs)))

    def term_args(self) -> tuple:
        return self.vertices

    def presentations(self) -> list[tuple]:
        return _dihedral(self.vertices)

    def to_term(self) -> Struct:
        return Struct("quad", self.vertices)

    def __str__(self) -> str:
        return format_term(self.to_term())


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[str, str, str]
    functor: ClassVar[str] = "triangle"

    def __post_init__(self):
        vs = tuple(sorted(check_point(p) for p in self.vertices))
        if len(vs) != 3 or len(set(vs)) != 3:
            raise InvalidEntityError(f"a triangle needs 3 distinct vertices, got {list(self.vertices)}")
        object.__setattr__(self, "vertices", vs)

    def term_args(self) -> tuple:
        return self.vertices

    def presentations(self) -> list[tuple]:
        return list(itertools.permutations(self.vertices))

    def to_term(self) -> Struct:
        return Struct("triangle", self.vertices)

    def __str__(self) -> str:
        return format_term(self.to_term())


@dataclass(frozen=True)
class Segment:
    """Segment between two points; only used as the subject of a length."""

    ends: tuple[str, str]
    functor: ClassVar[str] = "segment"

    def __post_init__(self):
        ends = tuple(sorted(check_point(p) for p in self.ends))
        if len(ends) != 2 or ends[0] == ends[1]:
            raise InvalidEntityError(f"a segment needs 2 distinct ends, got {list(self.ends)}")
        object.__setattr__(self, "ends", ends)

    def term_args(self) -> tuple:
        return self.ends

    def presentations(self) -> list[tuple]:
        return [self.ends, self.ends[::-1]]

    def to_term(self) -> Struct:
        return Struct("segment", self.ends)

    def __str__(self) -> str:
        return format_term(self.to_term())


@dataclass(frozen=True)
class Circle:
    name: str
    functor: ClassVar[str] = "circle"

    def __post_init__(self):
        check_point(self.name)

    def term_args(self) -> tuple:
        return (self.name,)

    def presentations(self) -> list[tuple]:
        return [(self.name,)]

    def to_term(self) -> Struct:
        return Struct("circle", (self.name,))

    def __str__(self) -> str:
        return format_term(self.to_term())


UNITS = ("degrees", "length", "ratio")


def relative_close(a: float, b: float, tolerance: float) -> bool:
    """``|a - b| / max(|a|, |b|) <= tolerance``; two zeros are equal."""
    scale = max(abs(a), abs(b))
    if scale == 0:
        return True
    return abs(a - b) / scale <= tolerance


@dataclass(frozen=True)
class Value:
    magnitude: float
    unit: str = field(default="length")
    functor: ClassVar[str] = "value"

    def __post_init__(self):
        if isinstance(self.magnitude, bool) or not isinstance(self.magnitude, (int, float)):
            raise InvalidEntityError(f"value magnitude must be a number, got {self.magnitude!r}")
        mag = float(self.magnitude)
        if not math.isfinite(mag):
            raise InvalidEntityError(f"value magnitude must be finite, got {mag}")
        if self.unit not in UNITS:
            raise InvalidEntityError(f"unknown unit {self.unit!r}")
        if self.unit == "degrees" and not 0 < mag < 360:
            raise InvalidEntityError(f"angle measure must lie in (0, 360), got {mag}")
        object.__setattr__(self, "magnitude", mag)

    def term_args(self) -> tuple:
        return (self.magnitude,)

    def presentations(self) -> list[tuple]:
        return [(self.magnitude,)]

    def to_term(self) -> Struct:
        return Struct("value", (self.magnitude,))

    def __str__(self) -> str:
        return format_term(self.to_term())


Entity = Union[str, Line, Angle, Quad, Triangle, Segment, Circle, Value]

ENTITY_TYPES: dict[str, type] = {
    cls.functor: cls for cls in (Line, Angle, Quad, Triangle, Segment, Circle, Value)
}


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    symmetric: bool = False
    unit: str | None = None  # unit of the trailing value argument, if any


# argument sorts: point, line, angle, quad, triangle, segment, circle, value
VOCABULARY: dict[str, Signature] = {
    "point": Signature(("point",)),
    "line": Signature(("line",)),
    "circle": Signature(("circle",)),
    "triangle": Signature(("triangle",)),
    "isAQuad": Signature(("quad",)),
    "isAnAngle": Signature(("angle",)),
    "angleValue": Signature(("angle", "value"), unit="degrees"),
    "segmentLength": Signature(("segment", "value"), unit="length"),
    "perp": Signature(("line", "line"), symmetric=True),
    "parallel": Signature(("line", "line"), symmetric=True),
    "concurrent": Signature(("line", "line", "line"), symmetric=True),
    "parallelogram": Signature(("quad",)),
    "rectangle": Signature(("quad",)),
    "rightTriangle": Signature(("triangle", "point")),
    "isosceles": Signature(("triangle", "point")),
    "adjacentAngles": Signature(("angle", "angle"), symmetric=True),
    "supplementaryAngles": Signature(("angle", "angle"), symmetric=True),
    "equalAngles": Signature(("angle", "angle"), symmetric=True),
    "midpoint": Signature(("point", "segment")),
    "perpBisector": Signature(("line", "segment")),
    "median": Signature(("line", "triangle", "point")),
    "altitude": Signature(("line", "triangle", "point")),
    "bisector": Signature(("line", "triangle", "point")),
    "circumcenter": Signature(("point", "triangle")),
    "equidistant": Signature(("point", "triangle")),
    "onCircle": Signature(("point", "circle")),
    "centerOf": Signature(("circle", "point")),
}

# Declaration statements are written as the entity itself: line([a,b]), triangle(a,b,c).
DECLARATIONS = frozenset({"point", "line", "circle", "triangle"})

# predicate -> position of the measured entity; the value is the last argument
MEASURES = {"angleValue": 0, "segmentLength": 0}


def sort_key(x: Any) -> tuple:
    if isinstance(x, str):
        return ("point", (x,))
    if isinstance(x, Statement):
        return (x.predicate, tuple(sort_key(a) for a in x.args))
    if isinstance(x, (int, float)):
        return ("number", (float(x),))
    return (x.functor, x.term_args())


@dataclass(frozen=True)
class Statement:
    """A ground fact: predicate plus canonical arguments.

    The constructor does not validate; use :func:`canonicalize_statement`.
    """

    predicate: str
    args: tuple = ()

    @property
    def functor(self) -> str:
        return self.predicate

    def term_args(self) -> tuple:
        return self.args

    def presentations(self) -> list[tuple]:
        if self.predicate in DECLARATIONS and self.predicate != "point":
            return self.args[0].presentations()
        sig = VOCABULARY.get(self.predicate)
        if sig is not None and sig.symmetric:
            return list(dict.fromkeys(itertools.permutations(self.args)))
        return [self.args]

    @property
    def entity(self) -> Entity:
        """The declared entity of a declaration statement."""
        return self.args[0]

    def to_term(self) -> Struct:
        if self.predicate in DECLARATIONS and self.predicate != "point":
            return self.args[0].to_term()
        return Struct(self.predicate, tuple(a if isinstance(a, str) else a.to_term() for a in self.args))

    @property
    def text(self) -> str:
        return format_term(self.to_term())

    def __str__(self) -> str:
        return self.text


def canonicalize_line(points: Sequence[str]) -> Line:
    return Line(tuple(points))


def _convert(sort: str, arg: Any, unit: str | None) -> Entity:
    if sort == "point":
        return check_point(arg)
    if sort == "value":
        if isinstance(arg, Value):
            return arg if arg.unit == unit else Value(arg.magnitude, unit)
        if isinstance(arg, Struct) and arg.functor == "value" and len(arg.args) == 1:
            return Value(arg.args[0], unit)
        raise InvalidEntityError(f"expected value(...), got {format_term(arg)}")
    cls = ENTITY_TYPES[sort]
    if isinstance(arg, cls):
        return arg
    if isinstance(arg, Struct) and arg.functor == sort:
        return build_entity(arg)
    raise InvalidEntityError(f"expected {sort}(...), got {format_term(arg)}")


def build_entity(term: Struct) -> Entity:
    cls = ENTITY_TYPES.get(term.functor)
    if cls is None:
        raise VocabularyError(f"unknown entity constructor {term.functor!r}")
    args = term.args
    if cls is Line:
        if len(args) != 1:
            raise ArityError("line/1 expects one point list")
        return Line(args[0])
    if cls is Angle:
        if len(args) != 3:
            raise ArityError("angle/3 expects (side, vertex, side)")
        return Angle(args[0], args[1], args[2])
    if cls is Quad:
        if len(args) != 4:
            raise ArityError("quad/4 expects four vertices")
        return Quad(args)
    if cls is Triangle:
        if len(args) != 3:
            raise ArityError("triangle/3 expects three vertices")
        return Triangle(args)
    if cls is Segment:
        if len(args) != 2:
            raise ArityError("segment/2 expects two ends")
        return Segment(args)
    if cls is Circle:
        if len(args) != 1:
            raise ArityError("circle/1 expects a name")
        return Circle(args[0])
    if len(args) != 1:
        raise ArityError("value/1 expects a number")
    return Value(args[0])


def canonicalize_statement(s: Statement) -> Statement:
    """Validate ``s`` against the vocabulary and return its canonical form."""
    sig = VOCABULARY.get(s.predicate)
    if sig is None:
        raise VocabularyError(f"unknown predicate {s.predicate!r}")
    if len(s.args) != len(sig.sorts):
        raise ArityError(f"{s.predicate}/{len(sig.sorts)} given {len(s.args)} arguments")
    args = tuple(_convert(sort, a, sig.unit) for sort, a in zip(sig.sorts, s.args))
    if sig.symmetric:
        args = tuple(sorted(args, key=sort_key))
    return Statement(s.predicate, args)


def build_statement(term: Any) -> Statement:
    """Turn a ground parsed term into a canonical statement."""
    if isinstance(term, Statement):
        return canonicalize_statement(term)
    if isinstance(term, str):
        raise VocabularyError(f"{term!r} is not a statement")
    if not isinstance(term, Struct):
        raise VocabularyError(f"{format_term(term)} is not a statement")
    if term.functor in DECLARATIONS and term.functor != "point":
        return Statement(term.functor, (build_entity(term),))
    return canonicalize_statement(Statement(term.functor, term.args))


def entities_in(x: Any) -> Iterable[Entity]:
    """Every entity occurring in a statement (points excluded)."""
    if isinstance(x, Statement):
        for a in x.args:
            if not isinstance(a, str):
                yield a


def angle_names(a: Angle, allow_reversal: bool = False) -> set[str]:
    names = {p + a.vertex + q for p in a.left for q in a.right}
    if allow_reversal:
        names |= {q + a.vertex + p for p in a.left for q in a.right}
    return names


def line_names(line: Line) -> set[str]:
    return {p + q for p in line.points for q in line.points if p != q}
