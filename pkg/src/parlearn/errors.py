"""Exception types shared across the package."""


class ParlearnError(Exception):
    """Base class for all package-specific errors."""


class ArityMismatchError(ParlearnError, ValueError):
    """Two labeled graphs or quantum graphs with different arities were combined."""


class SingularMatrixError(ParlearnError):
    """A square system had no unique solution."""


class DegenerateBlocksError(ParlearnError):
    """The flattened block matrices of a matrix equation are linearly dependent."""


class DegenerateColumnsError(ParlearnError):
    """Least squares was asked to solve a system with dependent columns."""


class DegenerateIdempotentError(ParlearnError):
    """A diagonal entry of the idempotent Gram system vanished."""


class PoolExhaustedError(ParlearnError):
    """No candidate graph increases the rank of the connection submatrix."""


class BoundExhaustedError(ParlearnError):
    """The teacher found no counterexample within its enumeration bounds."""


class IterationCapError(ParlearnError):
    """The learning loop exceeded its configured iteration cap."""


class SamplingCapError(ParlearnError):
    """Rejection sampling failed to produce a valid target within its try budget."""


class ValidationError(ParlearnError, ValueError):
    """An input file or target violates a documented contract."""


class RootSearchOverflowError(ParlearnError):
    """Rational root extraction gave up because the divisor search space was too large."""
