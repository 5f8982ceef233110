"""Exception hierarchy.

Three families, mirrored by the command line exit codes: validation
errors (malformed or structurally invalid input, exit 2), precondition
errors (valid input outside an operation's domain, exit 3), and
numerical errors (requested accuracy not reached, exit 4).
"""


class ParseError(Exception):
    """Input file is not well-formed (I/O or JSON syntax level)."""


class ValidationError(ValueError):
    """Input fails structural validation (shape, finiteness, algebra)."""


class DimensionError(ValidationError):
    """Operands have incompatible or non-square shapes."""


class NotPositiveSemidefiniteError(ValidationError):
    """Hermitian input has an eigenvalue below the allowed floor."""


class InvalidDensityError(ValidationError):
    """Matrix is not Hermitian, positive semidefinite, and unit trace."""


class PreconditionError(Exception):
    """Input is structurally valid but outside an operation's domain."""


class NotPTSymmetricError(PreconditionError):
    """Hamiltonian fails the PT-symmetry identity for the given pair."""


class BrokenSymmetryError(PreconditionError):
    """Operation requires an unbroken Hamiltonian."""


class BrokenRegimeError(PreconditionError):
    """Parameters lie outside the closed-form eigenstate regime."""


class CriticalPointError(PreconditionError):
    """Normalization diverges at the critical point."""


class DegeneratePostSelectionError(PreconditionError):
    """Post-selection success probability is numerically zero."""


class NumericalError(Exception):
    """Computation could not reach the requested accuracy."""


class IllConditionedError(NumericalError):
    """Structure could not be resolved at the requested tolerance.

    Carries the achieved residual (when one was computed) so callers
    can decide whether to retry with looser tolerances.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class SingularMatrixError(NumericalError):
    """Matrix is numerically singular at the working precision."""
