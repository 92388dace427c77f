"""
Homology of finite abelian groups with coefficients, coinvariants, the
comparison maps mu and nu, nilpotent filtrations and the explicit bound
constants relating H_n(C) to H_n(Z (x)_{ZG} C).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..entities.laurent import LaurentMatrix, LaurentPoly, QuotientComplex
from ..entities.matrix import IntMatrix
from ..entities.modules import FinAbGroup, ModuleWithAction, Resolution
from ..entities.reports import (
    AbelianStructure,
    CoinvariantReport,
    EstimateConstants,
    EstimateReport,
    EstimateRow,
    Filtration,
    GroupHomologyBounds,
    NuReport,
)
from ..errors import BoundViolation, HypothesisViolated, IdentityViolation, IncompatibleAction, ValidationError
from .exact_linalg import (
    cokernel_structure,
    express_in_basis,
    kernel_lattice,
    lattice_basis,
    rank,
    smith_normal_form,
    subquotient_structure,
)
from .group_ring import base_change_matrix, homology_module
from ...utils.logging_utils import get_logger

logger = get_logger("finite_group_homology")


# ---- groups and modules

def group_from_moduli(moduli: Sequence[int]) -> FinAbGroup:
    """Chained form of prod Z/N_j."""
    if not moduli:
        return FinAbGroup(())
    factors = smith_normal_form(IntMatrix.diagonal(list(moduli))).invariant_factors
    return FinAbGroup(tuple(d for d in factors if d > 1))


def structure(module: ModuleWithAction) -> AbelianStructure:
    free, factors = cokernel_structure(module.presentation)
    return AbelianStructure(free, factors)


def _relations(module: ModuleWithAction) -> IntMatrix:
    pres = module.presentation
    return lattice_basis(pres) if pres.cols else IntMatrix.zeros(pres.rows, 0)


def chained_module(module: ModuleWithAction) -> Tuple[FinAbGroup, ModuleWithAction]:
    """Re-express the action of prod Z/N_j through the generators of its chained form.

    The k-th chained generator is the group element whose exponent vector is
    column k of U^-1, where U diag(N) V is the Smith form.
    """
    moduli = module.orders
    if not moduli:
        return FinAbGroup(()), module
    sf = smith_normal_form(IntMatrix.diagonal(list(moduli)), transforms=True)
    u_inv = sf.left_inverse
    factors: List[int] = []
    actions: List[IntMatrix] = []
    for k, d in enumerate(sf.invariant_factors):
        if d == 1:
            continue
        action = IntMatrix.identity(module.generators)
        for j, n in enumerate(moduli):
            e = u_inv[j, k] % n
            if e:
                action = action @ module.actions[j].power(e)
        factors.append(d)
        actions.append(action)
    group = FinAbGroup(tuple(factors))
    return group, ModuleWithAction(module.presentation, tuple(actions), group.factors)


# ---- resolutions

def weak_compositions(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of m non-negative integers summing to n, lexicographic."""
    if m == 0:
        if n == 0:
            yield ()
        return
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in weak_compositions(n - first, m - 1):
            yield (first,) + rest


def resolution_rank(n: int, m: int) -> int:
    """binom(n + m - 1, m - 1); for the trivial group 1 in degree 0 and 0 above."""
    if m == 0:
        return 1 if n == 0 else 0
    return math.comb(n + m - 1, m - 1)


def _periodic_piece(group: FinAbGroup, k: int, a: int) -> LaurentPoly:
    # differential out of degree a of the periodic resolution of Z/d_k
    m = group.d
    t = LaurentPoly.variable(m, k)
    if a % 2 == 1:
        return t - LaurentPoly.constant(m, 1)
    norm = LaurentPoly.zero(m)
    for s in range(group.factors[k]):
        exp = [0] * m
        exp[k] = s
        norm = norm + LaurentPoly.monomial(m, exp)
    return norm


@lru_cache(maxsize=128)
def standard_resolution(group: FinAbGroup, up_to: int) -> Resolution:
    """Tensor product of the periodic resolutions ... -> Z[Z/d] --N--> Z[Z/d] --(t-1)--> Z[Z/d]."""
    if up_to < 0:
        raise ValidationError("resolution length must be >= 0")
    m = group.d
    comps = tuple(tuple(weak_compositions(n, m)) for n in range(up_to + 1))
    ranks = tuple(len(c) for c in comps)
    zero = LaurentPoly.zero(m)
    diffs = []
    for n in range(1, up_to + 1):
        position = {a: i for i, a in enumerate(comps[n - 1])}
        width = len(comps[n])
        entries = [zero] * (len(comps[n - 1]) * width)
        for col, a in enumerate(comps[n]):
            sign_exponent = 0
            for k in range(m):
                if a[k] >= 1:
                    face = a[:k] + (a[k] - 1,) + a[k + 1:]
                    piece = _periodic_piece(group, k, a[k])
                    entries[position[face] * width + col] = -piece if sign_exponent % 2 else piece
                sign_exponent += a[k]
        diffs.append(LaurentMatrix(len(comps[n - 1]), width, m, tuple(entries)))
    return Resolution(group, up_to, ranks, comps, tuple(diffs))


def resolution_matrix(res: Resolution, n: int) -> IntMatrix:
    """F_n -> F_{n-1} over Z, through the regular representation of Z[G]."""
    return base_change_matrix(res.differentials[n - 1], res.group.factors)


def verify_resolution(res: Resolution) -> None:
    """Exactness in degrees 0..length-1 by rank accounting plus torsion-free cokernels."""
    size = res.group.order
    ranks = {n: rank(resolution_matrix(res, n)) for n in range(1, res.length + 1)}
    if res.length >= 1:
        free, torsion = cokernel_structure(resolution_matrix(res, 1))
        if free != 1 or torsion:
            raise IdentityViolation("augmentation cokernel of the resolution is not Z")
    for n in range(1, res.length):
        if ranks[n] + ranks[n + 1] != size * res.ranks[n]:
            raise IdentityViolation(f"resolution not exact over Q at degree {n}")
        if cokernel_structure(resolution_matrix(res, n + 1))[1]:
            raise IdentityViolation(f"resolution has a non-saturated image at degree {n}")
    for n, r in enumerate(res.ranks):
        if r != resolution_rank(n, res.group.d):
            raise IdentityViolation(f"rank of F_{n} is {r}, expected {resolution_rank(n, res.group.d)}")


# ---- group homology

def _check_group_action(group: FinAbGroup, module: ModuleWithAction) -> None:
    if tuple(module.orders) != group.factors:
        raise IncompatibleAction(
            f"module acted on by orders {module.orders}, group is {group.factors}"
        )


class _ActionEvaluator:
    """rho_M(r) for group-ring elements r, with cached generator powers."""

    def __init__(self, group: FinAbGroup, module: ModuleWithAction) -> None:
        self.group = group
        self.module = module
        self._powers: Dict[Tuple[int, int], IntMatrix] = {}

    def _power(self, k: int, e: int) -> IntMatrix:
        key = (k, e)
        if key not in self._powers:
            self._powers[key] = self.module.actions[k].power(e)
        return self._powers[key]

    def __call__(self, poly: LaurentPoly) -> IntMatrix:
        g = self.module.generators
        out = IntMatrix.zeros(g, g)
        for exp, coef in poly.reduce_mod(self.group.factors).items():
            term = IntMatrix.identity(g)
            for k, e in enumerate(exp):
                if e:
                    term = term @ self._power(k, e)
            out = out + term.scale(coef)
        return out

    def expand(self, d: LaurentMatrix) -> IntMatrix:
        g = self.module.generators
        blocks = [[self(d[i, j]) for j in range(d.cols)] for i in range(d.rows)]
        rows = []
        for i in range(d.rows):
            rows.append(IntMatrix.hstack(blocks[i], rows=g) if blocks[i] else IntMatrix.zeros(g, 0))
        return IntMatrix.vstack(rows, cols=g * d.cols)


def group_homology(group: FinAbGroup, module: ModuleWithAction, n: int) -> AbelianStructure:
    """H_n(G; M) = H_n(M (x)_{ZG} F_*)."""
    if n < 0:
        raise ValidationError("group homology degree must be >= 0")
    _check_group_action(group, module)
    res = standard_resolution(group, n + 1)
    rho = _ActionEvaluator(group, module)
    g = module.generators
    pres = module.presentation

    def relations(k: int) -> IntMatrix:
        return IntMatrix.identity(res.ranks[k]).kron(pres)

    width = g * res.ranks[n]
    if n == 0:
        cycles = IntMatrix.identity(width)
    else:
        d_n = rho.expand(res.differentials[n - 1])
        joint = kernel_lattice(IntMatrix.hstack([d_n, relations(n - 1)]), normalize=False)
        cycles = joint.select_rows(range(width))
    d_up = rho.expand(res.differentials[n])
    boundaries = IntMatrix.hstack([d_up, relations(n)])
    free, factors = subquotient_structure(cycles, boundaries)
    return AbelianStructure(free, factors)


def check_group_homology_bounds(group: FinAbGroup, module: ModuleWithAction, n: int) -> GroupHomologyBounds:
    """|G| H_n = 0, |H_n| <= |G|^(d_n d(M)), d(H_n) <= d_n d(M) for n >= 1."""
    h = group_homology(group, module, n)
    d_n = resolution_rank(n, group.d)
    d_m = structure(module).d
    report = GroupHomologyBounds(n, h, d_n, d_m, group.order)
    if n == 0:
        return report
    if not h.is_finite:
        raise BoundViolation(f"H_{n}(G; M) has free rank {h.free_rank}")
    if any(group.order % f for f in h.factors):
        raise BoundViolation(f"|G|={group.order} does not annihilate H_{n} with factors {h.factors}")
    if h.order > group.order ** (d_n * d_m):
        raise BoundViolation(f"|H_{n}|={h.order} exceeds |G|^(d_n d(M))")
    if h.d > d_n * d_m:
        raise BoundViolation(f"d(H_{n})={h.d} exceeds d_n d(M)={d_n * d_m}")
    return report


# ---- filtrations

def _hnf_or_empty(gens: IntMatrix) -> IntMatrix:
    return lattice_basis(gens) if gens.cols else gens


def _filtration_cap(module: ModuleWithAction) -> int:
    _, factors = cokernel_structure(module.presentation)
    return 2 + math.prod(factors).bit_length()


def augmentation_filtration(module: ModuleWithAction) -> Filtration:
    """Least r with I^r M = 0, I the augmentation ideal; not nilpotent if none."""
    g = module.generators
    relations = _relations(module)
    full = _hnf_or_empty(IntMatrix.identity(g))
    if relations == full:
        return Filtration(True, 0)
    deltas = [a - IntMatrix.identity(g) for a in module.actions]
    free, factors = cokernel_structure(module.presentation)

    if free and not factors:
        # torsion-free: nilpotent iff the action is trivial
        trivial = all(_contained(relations, d) for d in deltas)
        return Filtration(True, 1) if trivial else Filtration(False, None)

    current = full
    for step in range(1, _filtration_cap(module) + 1):
        pieces = [relations] + [d @ current for d in deltas]
        nxt = _hnf_or_empty(IntMatrix.hstack(pieces, rows=g))
        if nxt == relations:
            return Filtration(True, step)
        if nxt == current:
            return Filtration(False, None)
        current = nxt
    return Filtration(False, None)


def _contained(relations: IntMatrix, x: IntMatrix) -> bool:
    if relations.cols == 0:
        return x.is_zero()
    try:
        express_in_basis(relations, x)
    except ValidationError:
        return False
    return True


def ascending_filtration_length(module: ModuleWithAction) -> Optional[int]:
    """Length of 0 = M_0 < M_1 < ... with M_{k+1}/M_k = invariants of M/M_k; None if it stalls."""
    g = module.generators
    relations = _relations(module)
    full = _hnf_or_empty(IntMatrix.identity(g))
    current = relations
    deltas = [a - IntMatrix.identity(g) for a in module.actions]
    if not deltas:
        return 0 if current == full else 1
    for step in range(_filtration_cap(module) + 1):
        if current == full:
            return step
        # x with (a_j - 1) x in L_k for every j
        basis = current
        stacked = IntMatrix.vstack(deltas, cols=g)
        lat = IntMatrix.block_diag([basis] * len(deltas)) if basis.cols else IntMatrix.zeros(g * len(deltas), 0)
        joint = kernel_lattice(IntMatrix.hstack([stacked, lat]), normalize=False)
        nxt = _hnf_or_empty(IntMatrix.hstack([joint.select_rows(range(g)), relations], rows=g))
        if nxt == current:
            return None
        current = nxt
    return None


# ---- coinvariants and mu

def coinvariants(module: ModuleWithAction, r: Optional[int] = None) -> CoinvariantReport:
    """Z (x)_{ZG} M = M / I M and ker(mu) = I M, with the nilpotent-module bounds."""
    g = module.generators
    deltas = [a - IntMatrix.identity(g) for a in module.actions]
    spanning = IntMatrix.hstack([module.presentation] + deltas, rows=g)
    quotient = AbelianStructure(*cokernel_structure(spanning))
    ker_mu = AbelianStructure(*subquotient_structure(spanning, module.presentation)) if spanning.cols else AbelianStructure(0)
    filtration = augmentation_filtration(module)
    group = group_from_moduli(module.orders)
    m_structure = structure(module)
    report = CoinvariantReport(quotient, ker_mu, filtration, group.order, group.d, m_structure.d)

    length = filtration.length if r is None else r
    if filtration.is_nilpotent and length is not None and length >= 1:
        if filtration.length > length:
            raise HypothesisViolated(f"filtration length {filtration.length} exceeds r={length}")
        if not ker_mu.is_finite:
            raise BoundViolation("ker(mu) is infinite for a nilpotent module")
        exponent = (length - 1) * group.d * m_structure.d
        if ker_mu.order > group.order ** exponent:
            raise BoundViolation(f"|ker mu|={ker_mu.order} exceeds |G|^{exponent}")
        if m_structure.d > length * (group.d + 1) ** (length - 1) * quotient.d:
            raise BoundViolation(f"d(M)={m_structure.d} exceeds r (d(G)+1)^(r-1) d(Z (x) M)")
    return report


# ---- nu and H_n(pr)

class _LevelData:
    """Cycle bases, boundary coordinates and the induced map of pr in one degree."""

    def __init__(self, qc: QuotientComplex, n: int) -> None:
        cx, co = qc.complex, qc.coinvariant
        self.cycles = kernel_lattice(cx.differential(n))
        self.boundaries = express_in_basis(self.cycles, cx.differential(n + 1))
        self.actions = [express_in_basis(self.cycles, a @ self.cycles) for a in qc.actions[n]]
        self.co_cycles = kernel_lattice(co.differential(n))
        self.co_boundaries = express_in_basis(self.co_cycles, co.differential(n + 1))
        self.induced = express_in_basis(self.co_cycles, qc.augmentation[n] @ self.cycles)

    def pr_kernel_upper(self) -> IntMatrix:
        z = self.cycles.cols
        joint = kernel_lattice(IntMatrix.hstack([self.induced, self.co_boundaries], rows=self.co_cycles.cols), normalize=False)
        return joint.select_rows(range(z))

    def coker(self) -> AbelianStructure:
        return AbelianStructure(*cokernel_structure(
            IntMatrix.hstack([self.induced, self.co_boundaries], rows=self.co_cycles.cols)
        ))


def _finite_order(h: AbelianStructure, what: str) -> int:
    if not h.is_finite:
        raise BoundViolation(f"{what} is infinite")
    return h.order


def nu_kernel_cokernel(qc: QuotientComplex, n: int) -> NuReport:
    """nu_n: Z (x)_{ZG} H_n(C) -> H_n(Z (x)_{ZG} C) with its kernel, cokernel and bounds."""
    qc.complex.check_degree(n)
    data = _LevelData(qc, n)
    z = data.cycles.cols
    eye = IntMatrix.identity(z)
    coinv_rel = IntMatrix.hstack([data.boundaries] + [t - eye for t in data.actions], rows=z)

    coinv_h = AbelianStructure(*cokernel_structure(coinv_rel))
    h_coinv = AbelianStructure(*cokernel_structure(data.co_boundaries))
    coker = data.coker()
    upper = data.pr_kernel_upper()
    ker = AbelianStructure(*subquotient_structure(upper, coinv_rel)) if z else AbelianStructure(0)

    ker_bound, coker_bound, d_bound = 1, 1, 0
    for p in range(1, n + 1):
        group, module = chained_module(homology_module(qc, n - p))
        upper_h = group_homology(group, module, p + 1)
        lower_h = group_homology(group, module, p)
        ker_bound *= _finite_order(upper_h, f"H_{p + 1}(G; H_{n - p})")
        coker_bound *= _finite_order(lower_h, f"H_{p}(G; H_{n - p})")
        d_bound += upper_h.d + lower_h.d

    report = NuReport(n, ker, coker, coinv_h, h_coinv, ker_bound, coker_bound, d_bound)
    if _finite_order(ker, "ker nu") > ker_bound:
        raise BoundViolation(f"|ker nu_{n}|={ker.order} exceeds {ker_bound}")
    if _finite_order(coker, "coker nu") > coker_bound:
        raise BoundViolation(f"|coker nu_{n}|={coker.order} exceeds {coker_bound}")
    if abs(coinv_h.d - h_coinv.d) > d_bound:
        raise BoundViolation(f"|d difference|={abs(coinv_h.d - h_coinv.d)} exceeds {d_bound}")
    return report


def pr_kernel_cokernel(qc: QuotientComplex, n: int) -> Tuple[AbelianStructure, AbelianStructure]:
    """Kernel and cokernel of H_n(pr): H_n(C[i]) -> H_n(Z (x) C[i])."""
    data = _LevelData(qc, n)
    if data.cycles.cols == 0:
        return AbelianStructure(0), data.coker()
    ker = AbelianStructure(*subquotient_structure(data.pr_kernel_upper(), data.boundaries))
    return ker, data.coker()


# ---- explicit constants

@lru_cache(maxsize=None)
def _c0(r: int, n: int, p: int) -> int:
    if p == n:
        return r * 2 ** (r - 1)
    return sum(r * 2 ** r * n ** (n + 1) * _c0(r, i, p) for i in range(p, n))


@lru_cache(maxsize=None)
def _c1(r: int, n: int, p: int) -> int:
    if p == n:
        return r - 1
    return n + r + max(_c1(r, i, p) for i in range(p, n))


def estimate_constants(r: int, n: int, p: int) -> EstimateConstants:
    """C_0, C_1 from the recursion; D_0, D_1 as the dominating choice for the order bounds."""
    if r < 1:
        raise ValidationError("r must be >= 1")
    if not 0 <= p <= n:
        raise ValidationError(f"need 0 <= p <= n, got p={p}, n={n}")
    c0, c1 = _c0(r, n, p), _c1(r, n, p)
    tail = range(1, n - p + 1)
    d0 = (r - 1) * c0 + sum(n ** (n + 1) * _c0(r, n - i, p) for i in tail)
    d1 = max([1 + c1] + [n + 1 + _c1(r, n - i, p) for i in tail])
    return EstimateConstants(c0, c1, d0, d1)


def _at_most_power(value: int, base: int, exponent: int) -> bool:
    """value <= base**exponent without building huge powers when the answer is clear."""
    if base <= 1:
        return value <= 1
    if exponent * (base.bit_length() - 1) >= value.bit_length():
        return True
    return value <= base ** exponent


def _log_power(base: int, exponent: int) -> float:
    if base <= 1:
        return 0.0
    if exponent.bit_length() > 1000:
        return math.inf
    return exponent * math.log(base)


def verify_estimate_bounds(qc: QuotientComplex, r: int, d: int) -> EstimateReport:
    """d(H_n(C)) and ln|ker/coker H_n(pr)| against the explicit constants, n <= d."""
    if r < 1:
        raise ValidationError("r must be >= 1")
    group = group_from_moduli(qc.quotient.moduli)
    top = min(d, qc.complex.top_degree)
    for p in range(top + 1):
        filtration = augmentation_filtration(homology_module(qc, p))
        if not filtration.is_nilpotent or filtration.length > r:
            raise HypothesisViolated(
                f"H_{p} is not nilpotent of filtration length <= {r} ({filtration})"
            )

    # the constants assume at least one group generator
    m_eff = max(group.d, 1)
    co = qc.coinvariant
    co_d = []
    for p in range(top + 1):
        free, factors = cokernel_structure(
            express_in_basis(kernel_lattice(co.differential(p)), co.differential(p + 1))
        )
        co_d.append(free + len(factors))

    rows = []
    for n in range(top + 1):
        consts = [estimate_constants(r, n, p) for p in range(n + 1)]
        d_bound = sum(k.c0 * m_eff ** k.c1 * co_d[p] for p, k in enumerate(consts))
        exponent = sum(k.d0 * m_eff ** k.d1 * co_d[p] for p, k in enumerate(consts))
        h = structure(homology_module(qc, n))
        ker, coker = pr_kernel_cokernel(qc, n)
        log_bound = _log_power(group.order, exponent)
        rows.append(EstimateRow(n, h.d, d_bound, ker, coker, log_bound))
        if h.d > d_bound:
            raise BoundViolation(f"d(H_{n})={h.d} exceeds {d_bound}")
        for name, part in (("ker", ker), ("coker", coker)):
            order = _finite_order(part, f"{name} H_{n}(pr)")
            if not _at_most_power(order, group.order, exponent):
                raise BoundViolation(f"ln|{name} H_{n}(pr)| exceeds the explicit bound")
    logger.debug("explicit estimates hold for %s up to degree %d (r=%d)", qc.quotient, top, r)
    return EstimateReport(r, group.order, group.d, tuple(rows))


__all__ = [
    "group_from_moduli", "structure", "chained_module",
    "weak_compositions", "resolution_rank", "standard_resolution", "resolution_matrix",
    "verify_resolution", "group_homology", "check_group_homology_bounds",
    "augmentation_filtration", "ascending_filtration_length",
    "coinvariants", "nu_kernel_cokernel", "pr_kernel_cokernel",
    "estimate_constants", "verify_estimate_bounds",
]
