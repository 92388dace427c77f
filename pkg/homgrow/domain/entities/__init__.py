from .matrix import IntMatrix, SmithForm
from .chain import IntChainComplex, DegreeHomology, HomologySummary, AlphaData
from .laurent import LaurentPoly, LaurentMatrix, LaurentChainComplex, QuotientComplex
from .modules import ModuleWithAction, FinAbGroup, Resolution
from .reports import (
    FKFactorization, RhoIdentityReport,
    AbelianStructure, Filtration, GroupHomologyBounds, CoinvariantReport, NuReport,
    EstimateConstants, EstimateRow, EstimateReport,
    DegreeGrowth, TowerLevel, TailEstimate, TowerReport,
    AlphaVanishingRow, AlphaVanishingReport, TorsionGrowthRow, TorsionGrowthReport,
    RankGradientRow, RankGradientReport,
)

__all__ = [
    "IntMatrix", "SmithForm",
    "IntChainComplex", "DegreeHomology", "HomologySummary", "AlphaData",
    "LaurentPoly", "LaurentMatrix", "LaurentChainComplex", "QuotientComplex",
    "ModuleWithAction", "FinAbGroup", "Resolution",
    "FKFactorization", "RhoIdentityReport",
    "AbelianStructure", "Filtration", "GroupHomologyBounds", "CoinvariantReport", "NuReport",
    "EstimateConstants", "EstimateRow", "EstimateReport",
    "DegreeGrowth", "TowerLevel", "TailEstimate", "TowerReport",
    "AlphaVanishingRow", "AlphaVanishingReport", "TorsionGrowthRow", "TorsionGrowthReport",
    "RankGradientRow", "RankGradientReport",
]
