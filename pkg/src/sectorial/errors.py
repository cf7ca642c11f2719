"""Exception types shared across the library."""


class MatrixDomainError(Exception):
    """An input matrix violates the domain of the requested operation."""


class NotHermitianError(MatrixDomainError):
    """Matrix expected to be Hermitian is not (beyond tolerance)."""


class NotAccretiveError(MatrixDomainError):
    """Matrix expected to be accretive has lambda_min(Re A) <= 0."""


class SingularMatrixError(MatrixDomainError):
    """Matrix is numerically singular (pivot below threshold)."""


class NoConvergenceError(MatrixDomainError):
    """Eigensolver failed to converge within its iteration budget."""


class DimensionMismatchError(ValueError):
    """Operands do not have compatible dimensions."""


class DomainError(ValueError):
    """Scalar parameter outside the documented range."""
