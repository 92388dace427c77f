from __future__ import annotations
from enum import Enum


class Command(str, Enum):
    HOMOLOGY = "homology"
    TOWER    = "tower"
    VERIFY   = "verify"
    EXPORT   = "export"


class OutputFormat(str, Enum):
    CSV  = "csv"
    JSON = "json"


class DeterminantRoute(str, Enum):
    """How the square of a Fuglede-Kadison determinant was obtained."""
    EMPTY         = "empty"
    CAUCHY_BINET  = "cauchy_binet"
    LATTICE       = "lattice"


class Suite(str, Enum):
    RHO_IDENTITY     = "rho-identity"
    FK_FACTORIZATION = "fk-factorization"
    SMITH            = "smith"
    MIN_GENERATORS   = "min-generators"
    GROUP_HOMOLOGY   = "group-homology"
    MU_NU_ESTIMATE   = "mu-nu-estimate"
    FILTRATION       = "filtration"
    BASE_CHANGE      = "base-change"
    MAPPING_TORUS    = "mapping-torus"
    RANK_GRADIENT    = "rank-gradient"
    ALPHA_VANISHING  = "alpha-vanishing"


__all__ = ["Command", "OutputFormat", "DeterminantRoute", "Suite"]
