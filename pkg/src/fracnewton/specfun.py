"""Gamma, reciprocal gamma and principal-branch complex powers.

Real gamma is delegated to :func:`math.gamma` (which already handles negative
non-integer arguments); this module adds the pole contract, a total reciprocal
gamma, and a complex power with a fixed branch cut.
"""

from __future__ import annotations

import cmath
import math

from .errors import DomainError, PoleError

#: Absolute distance from a non-positive integer treated as a pole.
POLE_TOL = 1e-12

_MAX_INT_POW = 100


def _near_pole(x: float) -> bool:
    if x > POLE_TOL:
        return False
    return abs(x - round(x)) <= POLE_TOL


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`PoleError` within ``POLE_TOL`` of ``0, -1, -2, ...``.
    Overflows to ``inf`` for large positive arguments.
    """
    x = float(x)
    if _near_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    try:
        return math.gamma(x)
    except OverflowError:
        return math.inf


def rgamma(x: float) -> float:
    """Reciprocal gamma ``1/Γ(x)``, an entire function.

    Exactly ``0.0`` at non-positive integers and once ``Γ(x)`` overflows.
    """
    x = float(x)
    if _near_pole(x):
        return 0.0
    if x > 171.7:
        return 0.0
    try:
        g = math.gamma(x)
    except OverflowError:
        g = math.inf
    if math.isinf(g) or g == 0.0:
        # far negative non-integers: 1/Γ(x) = Γ(1-x) sin(πx) / π
        lg = math.lgamma(1.0 - x)
        s = math.sin(math.pi * x)
        if lg > 709.0:
            return math.copysign(math.inf, s)
        return math.exp(lg) * s / math.pi
    return 1.0 / g


def complex_pow(z: complex, e: float) -> complex:
    """``z ** e`` on the principal branch, ``arg z`` in ``(-π, π]``.

    Unlike :func:`cmath.exp` of :func:`cmath.log`, a negative real ``z`` always
    maps to ``+π`` regardless of the sign of its zero imaginary part.
    Positive reals give exactly real results.
    """
    z = complex(z)
    e = float(e)
    re, im = z.real, z.imag
    if re == 0.0 and im == 0.0:
        if e > 0.0:
            return 0j
        raise DomainError(f"0 ** {e!r} is undefined")
    if e == 0.0:
        return 1 + 0j
    if e.is_integer() and abs(e) <= _MAX_INT_POW:
        # integer powers are single-valued; avoid cos(k*pi) rounding noise
        if im == 0.0:
            return complex(_pow_mag(re, e), 0.0)
        if e == 1.0:
            return z
        try:
            return z ** int(e)
        except (OverflowError, ZeroDivisionError):
            pass
    if im == 0.0:
        if re > 0.0:
            return complex(_pow_mag(re, e), 0.0)
        theta = math.pi
        r = -re
    else:
        theta = math.atan2(im, re)
        r = math.hypot(re, im)
    mag = _pow_mag(r, e)
    phi = e * theta
    return complex(mag * math.cos(phi), mag * math.sin(phi))


def _pow_mag(r: float, e: float) -> float:
    try:
        return math.pow(r, e)
    except OverflowError:
        return math.copysign(math.inf, r) if e.is_integer() and e % 2 else math.inf


def principal_log(z: complex) -> complex:
    """Principal logarithm with ``Log(-r) = ln r + iπ`` for ``r > 0``."""
    z = complex(z)
    if z == 0:
        raise DomainError("log(0) is undefined")
    if z.imag == 0.0 and z.real < 0.0:
        return complex(math.log(-z.real), math.pi)
    return cmath.log(z)
