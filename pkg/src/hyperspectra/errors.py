"""Exception hierarchy shared by the library and the CLI."""


class HyperspectraError(Exception):
    """Base class for all library errors."""


class InputError(HyperspectraError, ValueError):
    """Malformed input or a parameter outside its valid range."""


class CapacityError(HyperspectraError):
    """A request exceeds a configured size cap (canonicalization, enumeration)."""


class ClassificationError(InputError):
    """A hypergraph does not satisfy the preconditions of ``classify``."""


class StructureError(HyperspectraError):
    """A structural operation would create multiple edges or unsupported cycles."""


class ConvergenceError(HyperspectraError, ArithmeticError):
    """Power iteration exhausted its budget before the bracket closed."""

    def __init__(self, message, lower=None, upper=None, iterations=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.iterations = iterations


class SolverError(HyperspectraError, ArithmeticError):
    """A certificate system could not be solved (e.g. no sign change)."""


class CertificateError(SolverError):
    """A solved or derived certificate failed its own verification."""
