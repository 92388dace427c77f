"""
Homology, integral torsion, Laplacians, L2-torsion over the trivial group
and the alpha comparison maps of a finite based free Z-chain complex.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import primefactors

from ..entities.chain import AlphaData, DegreeHomology, HomologySummary, IntChainComplex
from ..entities.matrix import IntMatrix
from ..entities.reports import RhoIdentityReport
from ..errors import IdentityViolation, ValidationError
from ..value_objects import SquaredLog
from .exact_linalg import (
    DEFAULT_MINOR_BUDGET,
    express_in_basis,
    fk_square,
    integer_gram_determinant,
    kernel_lattice,
    rational_solve,
    gram_determinant,
    smith_invariants,
    smith_normal_form,
)
from ...utils.decorators import measure_time
from ...utils.logging_utils import get_logger

logger = get_logger("chain_complex")


# ---- minimal numbers of generators

def count_divisible(factors: Sequence[int], p: int) -> int:
    """s_p: number of invariant factors divisible by p."""
    return sum(1 for d in factors if d % p == 0)


def d_of_abelian_group(invariant_factors: Sequence[int], free_rank: int) -> int:
    """d(Z^r + sum Z/d_j) = r + number of nontrivial chained factors."""
    return free_rank + sum(1 for d in invariant_factors if d > 1)


def d_of_abelian_group_primewise(invariant_factors: Sequence[int], free_rank: int) -> int:
    """Same count read prime by prime: dim_Q + max_p s_p."""
    primes = set()
    for d in invariant_factors:
        if d > 1:
            primes.update(primefactors(d))
    best = max((count_divisible(invariant_factors, p) for p in primes), default=0)
    return free_rank + best


# ---- homology

def _differential_factors(c: IntChainComplex) -> Dict[int, Tuple[int, ...]]:
    return {n: smith_invariants(c.differential(n)) for n in range(1, c.top_degree + 1)}


@measure_time
def homology(c: IntChainComplex, primes: Sequence[int] = ()) -> HomologySummary:
    factors = _differential_factors(c)
    ranks = {n: len(f) for n, f in factors.items()}
    torsion = {n: tuple(d for d in factors.get(n + 1, ()) if d > 1) for n in c.degrees()}

    out: List[DegreeHomology] = []
    for n in c.degrees():
        betti = c.dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0)
        tors = torsion[n]
        mod_p = {
            p: betti + count_divisible(tors, p) + count_divisible(torsion.get(n - 1, ()), p)
            for p in primes
        }
        out.append(
            DegreeHomology(
                degree=n,
                betti_q=betti,
                invariant_factors=tors,
                d_hn=d_of_abelian_group(tors, betti),
                log_tors=sum(math.log(d) for d in tors),
                betti_mod_p=mod_p,
            )
        )
    return HomologySummary(tuple(out))


def rho_Z(c: IntChainComplex) -> SquaredLog:
    """exp(rho^Z) = prod |tors H_n|^((-1)^n), exact."""
    value = Fraction(1)
    for h in homology(c):
        order = h.torsion_order
        value = value * order if h.degree % 2 == 0 else value / order
    return SquaredLog.of(value)


# ---- Laplacians and L2-torsion

def laplacian(c: IntChainComplex, n: int) -> IntMatrix:
    """Delta_n = c_n^T c_n + c_{n+1} c_{n+1}^T."""
    c.check_degree(n)
    down = c.differential(n)
    up = c.differential(n + 1)
    return down.T @ down + up @ up.T


def differential_determinants(c: IntChainComplex, budget: int = DEFAULT_MINOR_BUDGET) -> Dict[int, SquaredLog]:
    return {n: SquaredLog(Fraction(fk_square(c.differential(n), budget)[0])) for n in range(1, c.top_degree + 1)}


def rho_2(
    c: IntChainComplex,
    check_laplacian: bool = True,
    tolerance: float = 1e-9,
    budget: int = DEFAULT_MINOR_BUDGET,
    dets: Optional[Dict[int, SquaredLog]] = None,
) -> SquaredLog:
    """exp(rho^(2)) with rho^(2) = -sum_{n>=1} (-1)^n ln det c_n.

    Pass ``dets`` from differential_determinants to reuse them.
    """
    if dets is None:
        dets = differential_determinants(c, budget)
    value = SquaredLog.one()
    for n, det in dets.items():
        value = value * det.power(-((-1) ** n))

    if check_laplacian and c.dims:
        _check_laplacian_form(c, value, dets, tolerance, budget)
    return value


def _check_laplacian_form(
    c: IntChainComplex,
    value: SquaredLog,
    dets: Dict[int, SquaredLog],
    tolerance: float,
    budget: int,
) -> None:
    fourth = Fraction(1)
    log_sum = 0.0
    for n in c.degrees():
        sq_lap = Fraction(fk_square(laplacian(c, n), budget)[0])
        expected = dets.get(n, SquaredLog.one()).square_exact * dets.get(n + 1, SquaredLog.one()).square_exact
        if sq_lap != expected * expected:
            raise IdentityViolation(f"det(Delta_{n}) != det(c_{n})^2 det(c_{n + 1})^2")
        if n:
            fourth *= sq_lap ** (-((-1) ** n) * n)
            log_sum += (-1) ** n * n * 0.5 * (math.log(sq_lap.numerator) - math.log(sq_lap.denominator))
    if fourth != value.square_exact ** 2:
        raise IdentityViolation("Laplacian form of rho^(2) disagrees exactly")
    lap_value = -0.5 * log_sum
    if abs(lap_value - value.log_value) > tolerance * max(1.0, abs(value.log_value)):
        raise IdentityViolation(f"rho^(2)={value.log_value} but Laplacian form gives {lap_value}")


# ---- alpha maps

def harmonic_lattice(c: IntChainComplex, n: int) -> IntMatrix:
    """Integer basis of ker Delta_n = ker c_n  intersect  ker c_{n+1}^T."""
    stacked = IntMatrix.vstack([c.differential(n), c.differential(n + 1).T], cols=c.dims[n])
    return kernel_lattice(stacked, normalize=False)


def homology_free_basis(c: IntChainComplex, n: int) -> IntMatrix:
    """Integer cycles whose classes form a Z-basis of H_n(C)_f."""
    c.check_degree(n)
    cycles = kernel_lattice(c.differential(n))
    if cycles.cols == 0:
        return cycles
    boundaries = express_in_basis(cycles, c.differential(n + 1))
    sf = smith_normal_form(boundaries, transforms=True)
    return cycles @ sf.left_inverse.select_columns(range(sf.rank, cycles.cols))


def harmonic_projections(c: IntChainComplex, n: int, cycles: IntMatrix) -> List[List[Fraction]]:
    """Orthogonal projections of the given cycle columns onto ker Delta_n (exact)."""
    basis = harmonic_lattice(c, n)
    if basis.cols == 0:
        return [[Fraction(0)] * c.dims[n] for _ in range(cycles.cols)]
    gram = (basis.T @ basis).to_rows()
    rhs = (basis.T @ cycles).to_rows()
    coeffs = rational_solve(gram, rhs)
    out: List[List[Fraction]] = []
    for k in range(cycles.cols):
        vec = [Fraction(0)] * c.dims[n]
        for j in range(basis.cols):
            coef = coeffs[j][k]
            if coef:
                for i, v in enumerate(basis.column(j)):
                    if v:
                        vec[i] += coef * v
        out.append(vec)
    return out


def _alpha_square_by_index(c: IntChainComplex, n: int) -> Fraction:
    # det(alpha_n)^2 = [Z^b : L^T ker c_n]^2 / det(L^T L), L an integer basis of ker Delta_n
    harmonic = harmonic_lattice(c, n)
    b = harmonic.cols
    if b == 0:
        return Fraction(1)
    cycles = kernel_lattice(c.differential(n), normalize=False)
    factors = smith_invariants(harmonic.T @ cycles)
    if len(factors) != b:
        raise IdentityViolation(f"harmonic pairing in degree {n} has rank {len(factors)} != {b}")
    index = math.prod(factors)
    return Fraction(index * index, integer_gram_determinant(harmonic))


def _alpha_square_by_projection(c: IntChainComplex, n: int) -> Fraction:
    cycles = homology_free_basis(c, n)
    return gram_determinant(harmonic_projections(c, n, cycles))


def alpha_log_det(c: IntChainComplex, n: int) -> SquaredLog:
    """det(alpha_n) in a single degree, by the lattice-index formula."""
    c.check_degree(n)
    return SquaredLog(_alpha_square_by_index(c, n))


@measure_time
def alpha_log_dets(c: IntChainComplex, method: str = "index") -> AlphaData:
    """det(alpha_n) per degree.

    ``index`` uses the lattice-index formula; ``projection`` lifts a basis of
    H_n(C)_f and takes the Gram determinant of its harmonic projections.
    Both give the same exact square.
    """
    if method == "index":
        compute = _alpha_square_by_index
    elif method == "projection":
        compute = _alpha_square_by_projection
    else:
        raise ValidationError(f"unknown alpha method {method!r}")
    return AlphaData(tuple(SquaredLog(compute(c, n)) for n in c.degrees()))


def verify_rho_identity(
    c: IntChainComplex,
    tolerance: float = 1e-9,
    check_laplacian: bool = True,
    budget: int = DEFAULT_MINOR_BUDGET,
    alpha: Optional[AlphaData] = None,
    dets: Optional[Dict[int, SquaredLog]] = None,
) -> RhoIdentityReport:
    """rho^Z - rho^(2) = sum_n (-1)^n ln det alpha_n, exactly on squares."""
    report = RhoIdentityReport(
        rho_z=rho_Z(c),
        rho_2=rho_2(c, check_laplacian=check_laplacian, tolerance=tolerance, budget=budget, dets=dets),
        alpha_alternating=(alpha or alpha_log_dets(c)).alternating(),
    )
    lhs_square = report.rho_z.square_exact / report.rho_2.square_exact
    if lhs_square != report.alpha_alternating.square_exact:
        raise IdentityViolation(
            f"exp(rho^Z - rho^(2))^2 = {lhs_square} but alpha side gives {report.alpha_alternating.square_exact}"
        )
    if abs(report.lhs - report.rhs) > tolerance * max(1.0, abs(report.lhs)):
        raise IdentityViolation(f"rho identity: lhs={report.lhs} rhs={report.rhs}")
    return report


# ---- constructions

def direct_sum(c: IntChainComplex, d: IntChainComplex) -> IntChainComplex:
    length = max(len(c.dims), len(d.dims))
    dims = tuple(c.dim(n) + d.dim(n) for n in range(length))
    diffs = tuple(
        IntMatrix.block_diag([c.differential(n), d.differential(n)]) for n in range(1, length)
    )
    return IntChainComplex(dims, diffs)


def shift(c: IntChainComplex, k: int) -> IntChainComplex:
    """(C[k])_n = C_{n-k} with differential (-1)^k c; k >= 0."""
    if k < 0:
        raise ValidationError("shift expects k >= 0")
    if not c.dims:
        return c
    dims = (0,) * k + c.dims
    sign = -1 if k % 2 else 1
    diffs = []
    for n in range(1, len(dims)):
        if n - k >= 1:
            diffs.append(c.differential(n - k).scale(sign))
        else:
            diffs.append(IntMatrix.zeros(dims[n - 1], dims[n]))
    return IntChainComplex(dims, tuple(diffs))


def _tensor_blocks(c: IntChainComplex, d: IntChainComplex, n: int) -> List[Tuple[int, int, int]]:
    """(p, q, offset) blocks of (C (x) D)_n ordered by p."""
    blocks, offset = [], 0
    for p in range(max(0, n - d.top_degree), min(n, c.top_degree) + 1):
        q = n - p
        blocks.append((p, q, offset))
        offset += c.dims[p] * d.dims[q]
    return blocks


def tensor(c: IntChainComplex, d: IntChainComplex) -> IntChainComplex:
    """Tensor product with the Koszul sign (-1)^p on 1 (x) d."""
    if not c.dims or not d.dims:
        return IntChainComplex.empty()
    top = c.top_degree + d.top_degree
    layout = [_tensor_blocks(c, d, n) for n in range(top + 1)]
    dims = tuple(sum(c.dims[p] * d.dims[q] for p, q, _ in layout[n]) for n in range(top + 1))
    diffs = []
    for n in range(1, top + 1):
        target = {(p, q): off for p, q, off in layout[n - 1]}
        data = [0] * (dims[n - 1] * dims[n])
        width = dims[n]
        for p, q, off in layout[n]:
            pieces = []
            if p >= 1 and (p - 1, q) in target:
                piece = c.differential(p).kron(IntMatrix.identity(d.dims[q]))
                pieces.append((target[(p - 1, q)], piece))
            if q >= 1 and (p, q - 1) in target:
                piece = IntMatrix.identity(c.dims[p]).kron(d.differential(q))
                if p % 2:
                    piece = -piece
                pieces.append((target[(p, q - 1)], piece))
            for row_off, piece in pieces:
                for i, rd in enumerate(piece.row_dicts):
                    base = (row_off + i) * width + off
                    for j, v in rd.items():
                        data[base + j] += v
        diffs.append(IntMatrix(dims[n - 1], dims[n], tuple(data)))
    return IntChainComplex(dims, tuple(diffs))


__all__ = [
    "count_divisible", "d_of_abelian_group", "d_of_abelian_group_primewise",
    "homology", "rho_Z", "laplacian", "differential_determinants", "rho_2",
    "harmonic_lattice", "homology_free_basis", "harmonic_projections",
    "alpha_log_det", "alpha_log_dets", "verify_rho_identity",
    "direct_sum", "shift", "tensor",
]
