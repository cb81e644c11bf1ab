"""Text form of a FunctionExpr.

Grammar (whitespace-insensitive)::

    expr   := [sign] term (sign term)*
    term   := number ['*'] atom | number | atom
    atom   := 'x' ['^' ['('] [sign] number [')']] | ('sin'|'cos'|'exp') '(' 'x' ')'
    sign   := '+' | '-'

``x`` alone means ``x^1``.  There is no division: write ``sin(x) - 0.025*x^1``
for ``sin(x) - x/40``.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .funcmodel import FunctionExpr, PowerTerm, SeriesKind, SeriesTerm

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_MINUS = "-−"


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.i = 0

    def error(self, msg: str):
        offset = len(self.src[: self.i].encode("utf-8"))
        raise ParseError(msg, offset, self.src)

    def skip(self):
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.i] if self.i < len(self.src) else ""

    def accept(self, token: str) -> bool:
        self.skip()
        if self.src.startswith(token, self.i):
            self.i += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.accept(token):
            self.error(f"expected {token!r}")

    def sign(self) -> float | None:
        c = self.peek()
        if c == "+":
            self.i += 1
            return 1.0
        if c and c in _MINUS:
            self.i += 1
            return -1.0
        return None

    def number(self) -> float | None:
        self.skip()
        m = _NUMBER.match(self.src, self.i)
        if not m:
            return None
        self.i = m.end()
        return float(m.group())

    def exponent(self) -> float:
        paren = self.accept("(")
        s = self.sign() or 1.0
        p = self.number()
        if p is None:
            self.error("expected exponent")
        if paren:
            self.expect(")")
        return s * p

    def atom(self, coef: float, powers: list, series: list) -> bool:
        for kind in SeriesKind:
            if self.accept(kind.value):
                self.expect("(")
                self.expect("x")
                self.expect(")")
                series.append(SeriesTerm(kind, coef))
                return True
        if self.accept("x"):
            p = self.exponent() if self.accept("^") else 1.0
            powers.append(PowerTerm(coef, p))
            return True
        return False

    def term(self, sign: float, powers: list, series: list):
        c = self.number()
        if c is None:
            if not self.atom(sign, powers, series):
                self.error("expected number, 'x', sin(x), cos(x) or exp(x)")
            return
        coef = sign * c
        starred = self.accept("*")
        if not self.atom(coef, powers, series):
            if starred:
                self.error("expected 'x' or a function after '*'")
            powers.append(PowerTerm(coef, 0.0))

    def parse(self) -> FunctionExpr:
        powers: list[PowerTerm] = []
        series: list[SeriesTerm] = []
        if not self.peek():
            self.error("empty expression")
        self.term(self.sign() or 1.0, powers, series)
        while self.peek():
            s = self.sign()
            if s is None:
                self.error("expected '+' or '-'")
            self.term(s, powers, series)
        return FunctionExpr(tuple(powers), tuple(series))


def parse_function(src: str) -> FunctionExpr:
    """Parse DSL text into a FunctionExpr.

    >>> parse_function("x^2 - 1").coefficients()
    [(1.0, 2.0), (-1.0, 0.0)]
    """
    return _Parser(src).parse()


def _num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def render_function(f: FunctionExpr) -> str:
    """Inverse of :func:`parse_function` (up to term order and spacing)."""
    parts: list[tuple[float, str]] = []
    for t in f.power_terms:
        if t.exponent == 0.0:
            parts.append((t.coefficient, ""))
        else:
            parts.append((t.coefficient, f"x^{_num(t.exponent)}"))
    for s in f.series_terms:
        parts.append((s.coefficient, f"{s.kind.value}(x)"))
    if not parts:
        return "0"
    out = []
    for k, (c, atom) in enumerate(parts):
        mag = _num(abs(c))
        if not atom:
            body = mag
        else:
            body = atom if mag == "1" else f"{mag}*{atom}"
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)
