from __future__ import annotations

from typing import Optional


class DomainError(Exception):
    """Base class for homgrow domain errors."""


class ValidationError(DomainError):
    """A value or a construction violates a domain invariant."""


class DimensionMismatch(ValidationError):
    """Operands have incompatible shapes or vector lengths."""


class DegreeOutOfRange(ValidationError):
    """A chain degree lies outside 0..top_degree."""


class NonSquareMatrix(ValidationError):
    """A square matrix was required."""


class SingularMatrix(ValidationError):
    """An invertible matrix (or a nonzero determinant) was required."""


class InvalidComplex(ValidationError):
    """Consecutive differentials do not compose to zero, or shapes disagree."""

    def __init__(self, message: str, degree: Optional[int] = None) -> None:
        super().__init__(message)
        self.degree = degree


class IncompatibleAction(ValidationError):
    """A group action does not descend to the module or has the wrong order."""


class InconsistentProfile(ValidationError):
    """A rank-gradient profile violates b1_Q <= b1_Fp <= d_H1 <= d_H."""


class VerificationError(DomainError):
    """An identity or bound that must always hold failed."""


class IdentityViolation(VerificationError):
    """Two sides of an exact identity disagree."""


class BoundViolation(VerificationError):
    """A proven inequality or a configured threshold was exceeded."""


class HypothesisViolated(DomainError):
    """A caller-checked hypothesis (nilpotency, trivial rational action) fails."""


class DegenerateLevel(DomainError):
    """A tower level where the torsion oracle det(A^i - I) vanishes."""

    def __init__(self, message: str, level: Optional[int] = None) -> None:
        super().__init__(message)
        self.level = level


class ParseError(DomainError):
    """Input document is malformed."""

    def __init__(
        self, message: str, field: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        where = []
        if field is not None:
            where.append(f"field={field}")
        if line is not None:
            where.append(f"line={line}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line
