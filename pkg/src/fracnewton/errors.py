"""Exception types raised across the package."""


class FracNewtonError(Exception):
    """Base class for all package errors."""


class PoleError(FracNewtonError, ValueError):
    """Gamma evaluated at (or numerically at) a non-positive integer."""


class DomainError(FracNewtonError, ValueError):
    """Power or evaluation requested outside its domain, e.g. 0 ** -0.5."""


class ConstructionError(FracNewtonError, ValueError):
    """Invalid term list handed to a FunctionExpr constructor."""


class PreconditionError(FracNewtonError, ValueError):
    pass


class ConjugateResidualError(FracNewtonError):
    """A synthesized conjugate root fails the residual check."""


class ParseError(FracNewtonError, ValueError):
    """DSL parse failure; ``offset`` is the byte offset into the source."""

    def __init__(self, message: str, offset: int, source: str = ""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class DenominatorVanished(FracNewtonError, ArithmeticError):
    """The derivative in a Newton step fell below the configured floor."""
