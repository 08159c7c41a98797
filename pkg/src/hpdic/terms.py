"""Prolog-flavoured term syntax shared by problem files and rule files.

Terms are plain Python values:

* atoms are ``str`` (``a``, ``rightTrPerp``)
* numbers are ``int`` / ``float``
* lists are ``tuple``
* compound terms are :class:`Struct`
* variables (rule files only) are :class:`Var`
* double-quoted strings are :class:`Quoted`

Infix operators (``+ - * / < > =< >= ~= \\= == is in``) are only accepted by
:func:`parse_expr`; facts in problem files use :func:`parse_term`.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from typing import Any, Iterator

__all__ = [
    "Struct",
    "Var",
    "Quoted",
    "Token",
    "TermSyntaxError",
    "TokenStream",
    "tokenize",
    "parse_term",
    "parse_expr",
    "parse_facts",
    "format_term",
    "format_number",
    "term_variables",
    "INFIX_OPERATORS",
]


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple = ()

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Quoted:
    value: str

    def __str__(self) -> str:
        return json.dumps(self.value)


class TermSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # ident, var, number, string, punct, op, eof
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
  | (?P<var>[A-Z_][a-zA-Z0-9_]*)
  | (?P<op>=<|>=|~=|\\=|==|[+\-*/<>])
  | (?P<punct>[()\[\]{},.])
    """,
    re.VERBOSE,
)

# precedence: comparison < additive < multiplicative
INFIX_OPERATORS = {
    "is": 1, "in": 1, "<": 1, ">": 1, "=<": 1, ">=": 1, "~=": 1, "\\=": 1, "==": 1,
    "+": 2, "-": 2,
    "*": 3, "/": 3,
}


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self._fresh = itertools.count()

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("punct", "op", "ident") and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind in ("string", "eof"):
            shown = tok.text or "end of input"
            raise TermSyntaxError(f"expected {text!r}, found {shown!r}", tok.line, tok.column)
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise TermSyntaxError(message, tok.line, tok.column)

    def fresh_var(self) -> Var:
        return Var(f"_G{next(self._fresh)}")


def parse_term(ts: TokenStream, *, allow_variables: bool = False) -> Any:
    """Parse one primary term: atom, number, string, list or compound."""
    tok = ts.next()
    if tok.kind == "number":
        return _number(tok.text)
    if tok.kind == "string":
        return Quoted(json.loads(tok.text))
    if tok.kind == "var":
        if not allow_variables:
            ts.fail(f"constant {tok.text!r} must start with a lowercase letter", tok)
        if tok.text == "_":
            return ts.fresh_var()
        return Var(tok.text)
    if tok.kind == "op" and tok.text == "-" and ts.peek().kind == "number":
        return -_number(ts.next().text)
    if tok.kind == "punct" and tok.text == "[":
        items = []
        if not ts.at("]"):
            items.append(parse_term(ts, allow_variables=allow_variables))
            while ts.at(","):
                ts.next()
                items.append(parse_term(ts, allow_variables=allow_variables))
        ts.expect("]")
        return tuple(items)
    if tok.kind == "ident":
        if ts.at("("):
            ts.next()
            args = [parse_term(ts, allow_variables=allow_variables)]
            while ts.at(","):
                ts.next()
                args.append(parse_term(ts, allow_variables=allow_variables))
            ts.expect(")")
            return Struct(tok.text, tuple(args))
        return tok.text
    ts.fail(f"unexpected {tok.text or 'end of input'!r}", tok)


def parse_expr(ts: TokenStream, min_prec: int = 1) -> Any:
    """Parse a term with infix operators (variables always allowed)."""
    left = _parse_unary(ts)
    while True:
        tok = ts.peek()
        op = tok.text if tok.kind in ("op", "ident") else None
        prec = INFIX_OPERATORS.get(op) if op else None
        if prec is None or prec < min_prec:
            return left
        ts.next()
        # comparisons do not chain; arithmetic is left-associative
        right = parse_expr(ts, prec + 1)
        left = Struct(op, (left, right))
        if prec == 1:
            return left


def _parse_unary(ts: TokenStream) -> Any:
    if ts.at("-"):
        ts.next()
        operand = _parse_unary(ts)
        if isinstance(operand, (int, float)):
            return -operand
        return Struct("-", (operand,))
    if ts.at("("):
        ts.next()
        inner = parse_expr(ts)
        ts.expect(")")
        return inner
    tok = ts.peek()
    if tok.kind == "ident" and ts.tokens[ts.pos + 1].text == "(":
        # compound whose arguments may themselves be expressions, e.g. sqrt(X * X)
        ts.next()
        ts.next()
        args = [parse_expr(ts)]
        while ts.at(","):
            ts.next()
            args.append(parse_expr(ts))
        ts.expect(")")
        return Struct(tok.text, tuple(args))
    return parse_term(ts, allow_variables=True)


def parse_facts(text: str) -> Iterator[tuple[Any, Token]]:
    """Yield ``(term, first_token)`` for every ``term.`` in ``text``."""
    ts = TokenStream(text)
    while ts.peek().kind != "eof":
        start = ts.peek()
        term = parse_term(ts)
        ts.expect(".")
        yield term, start


def _number(text: str) -> int | float:
    if re.fullmatch(r"\d+", text):
        return int(text)
    return float(text)


def format_number(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_term(t: Any) -> str:
    if isinstance(t, Struct):
        if t.functor in INFIX_OPERATORS and len(t.args) == 2:
            prec = INFIX_OPERATORS[t.functor]
            left = _operand(t.args[0], prec, right=False)
            right = _operand(t.args[1], prec, right=True)
            return f"{left} {t.functor} {right}"
        if t.functor == "-" and len(t.args) == 1:
            return "-" + _operand(t.args[0], 4, right=True)
        return f"{t.functor}({','.join(format_term(a) for a in t.args)})"
    if isinstance(t, tuple):
        return "[" + ",".join(format_term(a) for a in t) + "]"
    if isinstance(t, bool):
        raise TypeError("booleans are not terms")
    if isinstance(t, (int, float)):
        if not math.isfinite(t):
            raise ValueError(f"non-finite number {t!r}")
        return format_number(t)
    if hasattr(t, "to_term"):
        return format_term(t.to_term())
    return str(t)


def _operand(t: Any, prec: int, right: bool) -> str:
    text = format_term(t)
    if isinstance(t, Struct) and len(t.args) == 2 and t.functor in INFIX_OPERATORS:
        inner = INFIX_OPERATORS[t.functor]
        if inner < prec or (right and inner == prec):
            return f"({text})"
    return text


def term_variables(t: Any) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Struct):
        return set().union(*(term_variables(a) for a in t.args)) if t.args else set()
    if isinstance(t, tuple):
        return set().union(*(term_variables(a) for a in t)) if t else set()
    return set()
