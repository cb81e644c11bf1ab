"""Generalized polynomials with optional sin/cos/exp terms.

A :class:`FunctionExpr` is a finite sum of power terms ``c * x**p`` (real,
possibly negative or non-integer ``p``) plus series terms ``c * sin(x)``,
``c * cos(x)``, ``c * exp(x)``.  Fractional differentiation uses the
Riemann-Liouville rule with lower limit 0 on each monomial::

    D^a x**p = Γ(p+1) / Γ(p-a+1) * x**(p-a)

Series terms are expanded into their Maclaurin monomials before
differentiating, except at non-negative integer orders where the classical
derivative is exact and the closed form is kept.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConstructionError, PoleError
from .specfun import complex_pow, gamma, rgamma

DEFAULT_TRUNCATION = 120


class SeriesKind(enum.Enum):
    SIN = "sin"
    COS = "cos"
    EXP = "exp"


class EvalPrecision(enum.Enum):
    """Summation mode for the power-term part of an evaluation."""

    #: plain left-to-right floating point sum
    STANDARD = "standard"
    #: error-free summation of real and imaginary parts (``math.fsum``)
    COMPENSATED = "compensated"


def _is_negative_integer(p: float) -> bool:
    return p < 0 and float(p).is_integer()


@dataclass(frozen=True)
class PowerTerm:
    coefficient: float
    exponent: float

    def __post_init__(self):
        c, p = float(self.coefficient), float(self.exponent)
        if not (math.isfinite(c) and math.isfinite(p)):
            raise ConstructionError(f"non-finite term {c!r} * x^{p!r}")
        if _is_negative_integer(p):
            raise ConstructionError(f"negative integer exponent {p!r} is not supported")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "exponent", p)


_CLOSED_FORM = {SeriesKind.SIN: cmath.sin, SeriesKind.COS: cmath.cos, SeriesKind.EXP: cmath.exp}

# Successive classical derivatives: kind -> (kind', sign).
_ROTATE = {
    SeriesKind.SIN: (SeriesKind.COS, 1.0),
    SeriesKind.COS: (SeriesKind.SIN, -1.0),
    SeriesKind.EXP: (SeriesKind.EXP, 1.0),
}


@dataclass(frozen=True)
class SeriesTerm:
    kind: SeriesKind
    coefficient: float = 1.0
    truncation_order: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "kind", SeriesKind(self.kind))
        c = float(self.coefficient)
        if not math.isfinite(c):
            raise ConstructionError(f"non-finite coefficient {c!r}")
        object.__setattr__(self, "coefficient", c)
        if int(self.truncation_order) < 1:
            raise ConstructionError("truncation_order must be >= 1")
        object.__setattr__(self, "truncation_order", int(self.truncation_order))

    def maclaurin_powers(self) -> list[tuple[float, int]]:
        """``(sign, k)`` pairs: the term equals ``c * sum(sign * x**k / k!)``.

        ``truncation_order`` counts the nonzero monomials retained.
        """
        n = self.truncation_order
        if self.kind is SeriesKind.EXP:
            return [(1.0, k) for k in range(n)]
        start = 1 if self.kind is SeriesKind.SIN else 0
        return [((-1.0) ** j, start + 2 * j) for j in range(n)]

    def frac_power_terms(self, alpha: float) -> list[PowerTerm]:
        """Term-wise order-``alpha`` derivative of the truncated expansion."""
        out = []
        for sign, k in self.maclaurin_powers():
            # c/k! * Γ(k+1)/Γ(k-a+1) with the factorials cancelled
            coef = self.coefficient * sign * rgamma(k - alpha + 1.0)
            d = _term(coef, k - alpha) if math.isfinite(coef) else None
            if d is not None:
                out.append(d)
        return out

    def closed_form(self, z: complex) -> complex:
        return self.coefficient * _CLOSED_FORM[self.kind](z)

    def derivative(self, order: int = 1) -> "SeriesTerm":
        kind, coef = self.kind, self.coefficient
        for _ in range(order):
            kind, sign = _ROTATE[kind]
            coef *= sign
        return SeriesTerm(kind, coef, self.truncation_order)


def _merge_powers(terms: Iterable[PowerTerm]) -> tuple[PowerTerm, ...]:
    acc: dict[float, float] = {}
    for t in terms:
        acc[t.exponent] = acc.get(t.exponent, 0.0) + t.coefficient
    merged = [PowerTerm(c, p) for p, c in acc.items() if c != 0.0]
    merged.sort(key=lambda t: -t.exponent)
    return tuple(merged)


def _merge_series(terms: Iterable[SeriesTerm]) -> tuple[SeriesTerm, ...]:
    acc: dict[tuple[SeriesKind, int], float] = {}
    for t in terms:
        key = (t.kind, t.truncation_order)
        acc[key] = acc.get(key, 0.0) + t.coefficient
    return tuple(SeriesTerm(k, c, n) for (k, n), c in acc.items() if c != 0.0)


@dataclass(frozen=True)
class FunctionExpr:
    """Immutable sum of power and series terms.

    Power terms are merged by exact exponent and kept sorted by descending
    exponent.  An expression with no terms is the zero function; it only
    arises as a derivative (e.g. of a constant at integer order).
    """

    power_terms: tuple[PowerTerm, ...] = ()
    series_terms: tuple[SeriesTerm, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "power_terms", _merge_powers(self.power_terms))
        object.__setattr__(self, "series_terms", _merge_series(self.series_terms))

    @property
    def is_zero(self) -> bool:
        return not self.power_terms and not self.series_terms

    @property
    def has_series(self) -> bool:
        return bool(self.series_terms)

    def coefficients(self) -> list[tuple[float, float]]:
        return [(t.coefficient, t.exponent) for t in self.power_terms]

    def __add__(self, other: "FunctionExpr") -> "FunctionExpr":
        if not isinstance(other, FunctionExpr):
            return NotImplemented
        return FunctionExpr(
            self.power_terms + other.power_terms, self.series_terms + other.series_terms
        )

    def __mul__(self, k: float) -> "FunctionExpr":
        if not isinstance(k, (int, float)):
            return NotImplemented
        k = float(k)
        return FunctionExpr(
            tuple(PowerTerm(k * t.coefficient, t.exponent) for t in self.power_terms),
            tuple(SeriesTerm(s.kind, k * s.coefficient, s.truncation_order) for s in self.series_terms),
        )

    __rmul__ = __mul__

    def __neg__(self) -> "FunctionExpr":
        return self * -1.0

    def __sub__(self, other: "FunctionExpr") -> "FunctionExpr":
        return self + (-other)

    def __call__(self, z: complex, precision: EvalPrecision = EvalPrecision.STANDARD) -> complex:
        return evaluate(self, z, precision)


def make_polynomial(coeffs: Sequence[tuple[float, float]]) -> FunctionExpr:
    """Build a generalized polynomial from ``(coefficient, exponent)`` pairs.

    >>> make_polynomial([(1, 2), (2, 2)]).coefficients()
    [(3.0, 2.0)]
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise ConstructionError("empty term list")
    return FunctionExpr(tuple(PowerTerm(c, p) for c, p in coeffs))


def series(kind: SeriesKind | str, coefficient: float = 1.0,
           truncation_order: int = DEFAULT_TRUNCATION) -> FunctionExpr:
    return FunctionExpr((), (SeriesTerm(SeriesKind(kind), coefficient, truncation_order),))


def _falling_factorial(p: float, n: int) -> float:
    out = 1.0
    for j in range(n):
        out *= p - j
    return out


def _term(coef: float, exponent: float) -> PowerTerm | None:
    # A negative-integer result exponent means 1/Γ(p-a+1) vanishes exactly;
    # anything left there is rounding (e.g. p = 1e-300, a = 1).
    if coef == 0.0 or _is_negative_integer(exponent):
        return None
    return PowerTerm(coef, exponent)


def _power_rule(t: PowerTerm, alpha: float) -> PowerTerm | None:
    p = t.exponent
    if alpha >= 0 and alpha.is_integer():
        # Γ(p+1)/Γ(p-n+1) is a falling factorial; exact for integer orders
        return _term(t.coefficient * _falling_factorial(p, int(alpha)), p - alpha)
    if p + 1.0 <= 0 and float(p + 1.0).is_integer():
        raise PoleError(f"Γ({p + 1.0!r}) is a pole")
    r = rgamma(p - alpha + 1.0)
    if r == 0.0:
        return None
    g = gamma(p + 1.0)
    coef = t.coefficient * g * r
    if not math.isfinite(coef):
        # Γ overflow for large p; take the ratio in log space
        sign = math.copysign(1.0, t.coefficient) * math.copysign(1.0, r)
        coef = sign * math.exp(
            math.log(abs(t.coefficient)) + math.lgamma(p + 1.0) - math.lgamma(p - alpha + 1.0)
        )
    return _term(coef, p - alpha)


def frac_derivative(f: FunctionExpr, alpha: float) -> FunctionExpr:
    """Riemann-Liouville derivative of order ``alpha`` with lower limit 0.

    Negative ``alpha`` gives the fractional integral.  Terms whose new
    coefficient vanishes (``1/Γ`` at a pole) are dropped, so constants are
    annihilated exactly at ``alpha = 1, 2``.
    """
    alpha = float(alpha)
    key = ("frac", alpha)
    cached = f._cache.get(key)
    if cached is not None:
        return cached
    powers = []
    for t in f.power_terms:
        d = _power_rule(t, alpha)
        if d is not None:
            powers.append(d)
    series_out = []
    if alpha >= 0 and alpha.is_integer():
        series_out = [s.derivative(int(alpha)) for s in f.series_terms]
    else:
        for s in f.series_terms:
            powers.extend(s.frac_power_terms(alpha))
    out = FunctionExpr(tuple(powers), tuple(series_out))
    f._cache[key] = out
    return out


def classical_derivative(f: FunctionExpr) -> FunctionExpr:
    """First derivative by the ordinary power rule; series kinds rotate."""
    powers = [_term(t.coefficient * t.exponent, t.exponent - 1.0) for t in f.power_terms]
    return FunctionExpr(tuple(d for d in powers if d is not None), tuple(s.derivative(1) for s in f.series_terms))


def evaluate(f: FunctionExpr, z: complex,
             precision: EvalPrecision = EvalPrecision.STANDARD) -> complex:
    """Value of ``f`` at ``z``; non-integer powers use the principal branch.

    Undifferentiated series terms use the library sin/cos/exp, never their
    truncated expansion.
    """
    z = complex(z)
    values = [t.coefficient if t.exponent == 0.0 else t.coefficient * complex_pow(z, t.exponent)
              for t in f.power_terms]
    values.extend(s.closed_form(z) for s in f.series_terms)
    if precision is EvalPrecision.COMPENSATED:
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    total = 0j
    for v in values:
        total += v
    return total
