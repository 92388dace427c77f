from __future__ import annotations

# ---- IDs
from .ids import Degree, LevelIndex, Prime

# ---- Enums
from .enums import Command, OutputFormat, DeterminantRoute, Suite

# ---- Value Objects
from .value_objects import SquaredLog, FKDet, QuotientSpec, GroupProfile

# ---- Entities
from .entities.matrix import IntMatrix, SmithForm
from .entities.chain import IntChainComplex, HomologySummary, DegreeHomology, AlphaData
from .entities.laurent import LaurentPoly, LaurentMatrix, LaurentChainComplex, QuotientComplex
from .entities.modules import ModuleWithAction, FinAbGroup, Resolution
from .entities.reports import (
    AbelianStructure, Filtration, RhoIdentityReport, FKFactorization,
    TowerReport, TowerLevel, EstimateReport, NuReport, CoinvariantReport,
)

# ---- Errors
from .errors import (
    DomainError, ValidationError, DimensionMismatch, DegreeOutOfRange, NonSquareMatrix,
    SingularMatrix, InvalidComplex, IncompatibleAction, InconsistentProfile,
    VerificationError, IdentityViolation, BoundViolation, HypothesisViolated,
    DegenerateLevel, ParseError,
)

__all__ = [
    # IDs
    "Degree", "LevelIndex", "Prime",
    # Enums
    "Command", "OutputFormat", "DeterminantRoute", "Suite",
    # VOs
    "SquaredLog", "FKDet", "QuotientSpec", "GroupProfile",
    # Entities
    "IntMatrix", "SmithForm",
    "IntChainComplex", "HomologySummary", "DegreeHomology", "AlphaData",
    "LaurentPoly", "LaurentMatrix", "LaurentChainComplex", "QuotientComplex",
    "ModuleWithAction", "FinAbGroup", "Resolution",
    "AbelianStructure", "Filtration", "RhoIdentityReport", "FKFactorization",
    "TowerReport", "TowerLevel", "EstimateReport", "NuReport", "CoinvariantReport",
    # Errors
    "DomainError", "ValidationError", "DimensionMismatch", "DegreeOutOfRange", "NonSquareMatrix",
    "SingularMatrix", "InvalidComplex", "IncompatibleAction", "InconsistentProfile",
    "VerificationError", "IdentityViolation", "BoundViolation", "HypothesisViolated",
    "DegenerateLevel", "ParseError",
]
