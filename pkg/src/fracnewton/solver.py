"""Fractional Newton-Raphson iteration.

One run iterates ``x <- x - f(x) / D^a f(x)`` from a fixed start, where
``D^a`` is the Riemann-Liouville derivative of order ``a`` (``-2 < a < 2``).
At ``a = 1`` this is ordinary Newton's method; for other orders a real
start can leave the real axis through the principal-branch powers.

Iteration counting follows the result tables this method is usually
reported with: ``x0`` is iterate 1, and ``iterations`` is the index of the
iterate that passed the residual test.  ``steps`` is the number of Newton
updates actually applied, always ``iterations - 1`` for a converged run.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DenominatorVanished, DomainError, PreconditionError
from .funcmodel import (EvalPrecision, FunctionExpr, classical_derivative, evaluate,
                        frac_derivative)

ALPHA_MIN, ALPHA_MAX = -2.0, 2.0


class Status(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITER_EXCEEDED = "MaxIterExceeded"
    DIVERGED = "Diverged"
    DENOMINATOR_VANISHED = "DenominatorVanished"
    DOMAIN_ERROR = "DomainError"


@dataclass(frozen=True)
class SolverConfig:
    tol_residual: float = 1e-8
    max_iter: int = 300
    divergence_radius: float = 1e10
    min_denominator: float = 1e-14
    #: None picks COMPENSATED when f carries series terms, STANDARD otherwise
    precision: EvalPrecision | None = None

    def __post_init__(self):
        if not (self.tol_residual > 0 and self.divergence_radius > 0 and self.min_denominator > 0):
            raise PreconditionError("solver tolerances must be positive")
        if int(self.max_iter) < 1:
            raise PreconditionError("max_iter must be >= 1")

    def precision_for(self, f: FunctionExpr) -> EvalPrecision:
        if self.precision is not None:
            return self.precision
        return EvalPrecision.COMPENSATED if f.has_series else EvalPrecision.STANDARD


@dataclass(frozen=True)
class IterationOutcome:
    status: Status
    root: complex
    residual: float
    iterations: int
    alpha: float
    steps: int

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED


def fnr_step(f: FunctionExpr, dfa: FunctionExpr, z: complex,
             cfg: SolverConfig = SolverConfig()) -> complex:
    """One update ``z - f(z) / dfa(z)``.

    Raises :class:`DenominatorVanished` when ``|dfa(z)| < cfg.min_denominator``
    and lets :class:`DomainError` through from the power evaluation.
    """
    prec = cfg.precision_for(f)
    den = evaluate(dfa, z, prec)
    if not abs(den) >= cfg.min_denominator:
        raise DenominatorVanished(f"|D f({z})| = {abs(den):.3e}")
    return z - evaluate(f, z, prec) / den


def _run(f: FunctionExpr, dfa: FunctionExpr, alpha: float, x0: complex,
         cfg: SolverConfig) -> IterationOutcome:
    prec = cfg.precision_for(f)
    z = complex(x0)
    residual = math.inf
    status = Status.MAX_ITER_EXCEEDED
    index = 1
    for index in range(1, cfg.max_iter + 1):
        try:
            residual = abs(evaluate(f, z, prec))
        except DomainError:
            status = Status.DOMAIN_ERROR
            break
        if residual <= cfg.tol_residual:
            status = Status.CONVERGED
            break
        if index == cfg.max_iter:
            break
        try:
            z_next = fnr_step(f, dfa, z, cfg)
        except DenominatorVanished:
            status = Status.DENOMINATOR_VANISHED
            break
        except DomainError:
            status = Status.DOMAIN_ERROR
            break
        except ZeroDivisionError:
            status = Status.DENOMINATOR_VANISHED
            break
        if not (math.isfinite(z_next.real) and math.isfinite(z_next.imag)) \
                or abs(z_next) > cfg.divergence_radius:
            z = z_next
            status = Status.DIVERGED
            try:
                residual = abs(evaluate(f, z, prec))
            except (DomainError, OverflowError):
                residual = math.inf
            if math.isnan(residual):
                residual = math.inf
            break
        z = z_next
    return IterationOutcome(status, z, residual, index, float(alpha), index - 1)


def _check_start(x0: complex) -> complex:
    x0 = complex(x0)
    if x0 == 0:
        raise PreconditionError("initial condition must be nonzero")
    return x0


def iterate(f: FunctionExpr, alpha: float, x0: complex,
            cfg: SolverConfig = SolverConfig()) -> IterationOutcome:
    """Run the fractional Newton iteration of order ``alpha`` from ``x0``.

    >>> from fracnewton.funcmodel import make_polynomial
    >>> out = iterate(make_polynomial([(1, 2), (-1, 0)]), 1.0, 0.5)
    >>> out.status.value, round(out.root.real, 12), out.iterations
    ('Converged', 1.0, 6)
    """
    alpha = float(alpha)
    if not ALPHA_MIN < alpha < ALPHA_MAX:
        raise PreconditionError(f"alpha={alpha!r} outside (-2, 2)")
    x0 = _check_start(x0)
    return _run(f, frac_derivative(f, alpha), alpha, x0, cfg)


def classical_newton(f: FunctionExpr, x0: complex,
                     cfg: SolverConfig = SolverConfig()) -> IterationOutcome:
    """Ordinary Newton-Raphson; same loop as ``iterate`` with ``alpha = 1``."""
    return _run(f, classical_derivative(f), 1.0, complex(x0), cfg)
