"""Fractional Newton-Raphson root finding with Riemann-Liouville derivatives."""

from .dsl import parse_function, render_function
from .errors import (ConjugateResidualError, ConstructionError, DenominatorVanished,
                     DomainError, ParseError, PoleError, PreconditionError)
from .funcmodel import (EvalPrecision, FunctionExpr, PowerTerm, SeriesKind, SeriesTerm,
                        classical_derivative, evaluate, frac_derivative, make_polynomial,
                        series)
from .solver import (IterationOutcome, SolverConfig, Status, classical_newton, fnr_step,
                     iterate)
from .specfun import complex_pow, gamma, rgamma
from .sweep import (BasinGrid, RootRecord, RootTable, SweepConfig, alpha_grid, basin_scan,
                    conjugate_closure, dedup_filter, run_sweep)

__version__ = "0.1.0"
