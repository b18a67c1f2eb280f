"""Exception taxonomy shared across the package."""

from __future__ import annotations


class GeoipmError(Exception):
    """Base class for all errors raised by this package."""


class ConeMismatchError(GeoipmError):
    """Two elements (or an element and an operator) live on different cones."""


class DomainError(GeoipmError):
    """Argument outside the mathematical domain of an operation.

    Carries the offending eigenvalue when one exists (e.g. a non-positive
    eigenvalue passed to log/inverse/sqrt, or a non-interior point).
    """

    def __init__(self, message: str, eigenvalue: float | None = None):
        if eigenvalue is not None:
            message = f"{message} (offending eigenvalue {eigenvalue:.6g})"
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NumericalFailureError(GeoipmError):
    """A numerical kernel (eigensolver, factorization) failed to converge."""


class IllConditionedBasisError(GeoipmError):
    """Rank loss while orthonormalizing a subspace basis."""


class DegenerateConstraintsError(GeoipmError):
    """The constraint data yields a singular saddle system."""


class ParameterError(GeoipmError):
    """Algorithm parameters outside their admissible range."""


class IterationLimitError(GeoipmError):
    """An iteration cap was exceeded; carries the partial trace and iterate."""

    def __init__(self, message: str, trace=None, iterate=None):
        super().__init__(message)
        self.trace = trace
        self.iterate = iterate


class OracleFailureError(GeoipmError):
    """The high-accuracy centering oracle failed to converge (test infrastructure)."""


class ProblemFormatError(GeoipmError):
    """A problem file or problem description failed to parse or validate."""
