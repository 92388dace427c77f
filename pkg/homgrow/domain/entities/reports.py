from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..value_objects import FKDet, GroupProfile, QuotientSpec, SquaredLog


@dataclass(frozen=True)
class FKFactorization:
    det_u: FKDet
    det_inclusion: FKDet
    torsion_order: int
    det_projection: FKDet


@dataclass(frozen=True)
class RhoIdentityReport:
    rho_z: SquaredLog
    rho_2: SquaredLog
    alpha_alternating: SquaredLog

    @property
    def lhs(self) -> float:
        return self.rho_z.log_value - self.rho_2.log_value

    @property
    def rhs(self) -> float:
        return self.alpha_alternating.log_value


@dataclass(frozen=True)
class AbelianStructure:
    """Z^free_rank + sum Z/d_j (chained, d_j >= 2)."""
    free_rank: int
    factors: Tuple[int, ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        return math.prod(self.factors) if self.is_finite else None

    @property
    def d(self) -> int:
        return self.free_rank + len(self.factors)

    @property
    def log_order(self) -> float:
        if not self.is_finite:
            return math.inf
        return sum(math.log(x) for x in self.factors)


@dataclass(frozen=True)
class Filtration:
    """Augmentation-ideal filtration; ``length`` is None when M is not nilpotent."""
    is_nilpotent: bool
    length: Optional[int]


@dataclass(frozen=True)
class GroupHomologyBounds:
    degree: int
    homology: AbelianStructure
    resolution_rank: int
    module_d: int
    group_order: int


@dataclass(frozen=True)
class CoinvariantReport:
    coinvariants: AbelianStructure
    ker_mu: AbelianStructure
    filtration: Filtration
    group_order: int
    group_d: int
    module_d: int


@dataclass(frozen=True)
class NuReport:
    degree: int
    ker_nu: AbelianStructure
    coker_nu: AbelianStructure
    coinvariants_of_homology: AbelianStructure
    homology_of_coinvariants: AbelianStructure
    ker_bound: int
    coker_bound: int
    d_bound: int


@dataclass(frozen=True)
class EstimateConstants:
    c0: int
    c1: int
    d0: int
    d1: int


@dataclass(frozen=True)
class EstimateRow:
    degree: int
    d_hn: int
    d_bound: int
    ker_pr: AbelianStructure
    coker_pr: AbelianStructure
    log_bound: float


@dataclass(frozen=True)
class EstimateReport:
    r: int
    group_order: int
    group_d: int
    rows: Tuple[EstimateRow, ...]


# ---- tower experiments

@dataclass(frozen=True)
class DegreeGrowth:
    """Raw per-degree invariants of one level C[i]; divide by the index to normalize."""
    degree: int
    betti_q: int
    d_hn: int
    ln_tors: float
    ln_det_c: float
    ln_det_alpha: float
    betti_mod_p: Dict[int, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class TowerLevel:
    level_index: int
    quotient: QuotientSpec
    degrees: Tuple[DegreeGrowth, ...]
    rho_z: float
    rho_2: float
    alpha_alternating: float

    @property
    def index(self) -> int:
        return self.quotient.index

    def normalized(self) -> Dict[Tuple[str, Optional[int]], float]:
        """Every tower quantity divided by [G : G_i], keyed by (name, degree)."""
        idx = self.index
        out: Dict[Tuple[str, Optional[int]], float] = {}
        for g in self.degrees:
            n = g.degree
            out[("betti_q", n)] = g.betti_q / idx
            for p, b in sorted(g.betti_mod_p.items()):
                out[(f"betti_p_{p}", n)] = b / idx
            out[("d_hn", n)] = g.d_hn / idx
            out[("ln_tors", n)] = g.ln_tors / idx
            out[("ln_det_c", n)] = g.ln_det_c / idx
            out[("ln_det_alpha", n)] = g.ln_det_alpha / idx
        out[("rho_z", None)] = self.rho_z / idx
        out[("rho_2", None)] = self.rho_2 / idx
        return out


@dataclass(frozen=True)
class TailEstimate:
    """Last value, Aitken extrapolation and the Cauchy heuristic over the final three levels."""
    quantity: str
    degree: Optional[int]
    last: float
    extrapolated: float
    cauchy: Optional[bool]


@dataclass(frozen=True)
class TowerReport:
    levels: Tuple[TowerLevel, ...]
    primes: Tuple[int, ...]
    max_degree: int
    lam: float
    tails: Tuple[TailEstimate, ...] = ()
    torsion: Optional[TorsionGrowthReport] = None

    @property
    def degenerate_levels(self) -> Tuple[int, ...]:
        """Tower indices where det(A^i - I) = 0 for a mapping-torus tower."""
        return self.torsion.skipped if self.torsion is not None else ()

    def is_degenerate(self, level: TowerLevel) -> bool:
        return level.index in self.degenerate_levels

    def tail(self, quantity: str, degree: Optional[int] = None) -> TailEstimate:
        for t in self.tails:
            if t.quantity == quantity and t.degree == degree:
                return t
        raise KeyError((quantity, degree))

    def series(self, quantity: str, degree: Optional[int] = None) -> Tuple[float, ...]:
        return tuple(level.normalized()[(quantity, degree)] for level in self.levels)


@dataclass(frozen=True)
class AlphaVanishingRow:
    level_index: int
    quotient: QuotientSpec
    log_det_alpha: float
    projection_log_det: float
    projection_bound: float

    @property
    def normalized(self) -> float:
        return abs(self.log_det_alpha) / self.quotient.index


@dataclass(frozen=True)
class AlphaVanishingReport:
    degree: int
    threshold: float
    rows: Tuple[AlphaVanishingRow, ...]
    monotone_tail: bool


@dataclass(frozen=True)
class TorsionGrowthRow:
    level: int
    ln_tors: Optional[float]
    ln_oracle: Optional[float]
    degenerate: bool = False

    @property
    def gap(self) -> Optional[float]:
        if self.ln_tors is None or self.ln_oracle is None:
            return None
        return abs(self.ln_tors - self.ln_oracle)


@dataclass(frozen=True)
class TorsionGrowthReport:
    """Normalized ln|tors H_0| of a mapping torus tower against det(A^i - I) and the Mahler measure."""
    log_mahler: float
    rows: Tuple[TorsionGrowthRow, ...]

    @property
    def skipped(self) -> Tuple[int, ...]:
        return tuple(r.level for r in self.rows if r.degenerate)

    @property
    def mahler_gap(self) -> Optional[float]:
        computed = [r for r in self.rows if r.ln_tors is not None]
        if not computed:
            return None
        return abs(computed[-1].ln_tors - self.log_mahler)


@dataclass(frozen=True)
class RankGradientRow:
    index: int
    b1_q: int
    b1_fp: int
    d_h1: int
    d_g: int
    b1_mod_p: Dict[int, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class RankGradientReport:
    """Closed formulas for finite-index subgroups of Z * H; limits are exact."""
    profile: GroupProfile
    rows: Tuple[RankGradientRow, ...]
    limit_b1_q: Fraction
    limit_b1_fp: Fraction
    limit_d_h1: Fraction
    rank_gradient: Fraction
    strict_chain: bool
    limit_b1_mod_p: Dict[int, Fraction] = field(default_factory=dict, compare=False)

    @property
    def gradient_vs_betti(self) -> Tuple[Fraction, Fraction]:
        """(rank gradient, lim b_1(G_i; Q)/i); reported, never asserted equal."""
        return self.rank_gradient, self.limit_b1_q

    @property
    def betti_by_field(self) -> Dict[str, Fraction]:
        out = {"Q": self.limit_b1_q}
        out.update({f"F_{p}": v for p, v in sorted(self.limit_b1_mod_p.items())})
        return out


__all__ = [
    "FKFactorization", "RhoIdentityReport",
    "AbelianStructure", "Filtration", "GroupHomologyBounds", "CoinvariantReport", "NuReport",
    "EstimateConstants", "EstimateRow", "EstimateReport",
    "DegreeGrowth", "TowerLevel", "TailEstimate", "TowerReport",
    "AlphaVanishingRow", "AlphaVanishingReport", "TorsionGrowthRow", "TorsionGrowthReport",
    "RankGradientRow", "RankGradientReport",
]
