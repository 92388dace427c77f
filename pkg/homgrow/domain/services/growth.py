"""
Tower experiments: normalized invariants along quotient towers of a
Z[Z^m]-chain complex, the a-priori bound Lambda, the alpha-vanishing check,
torsion growth of mapping tori and the rank-gradient formulas for Z * H.
"""
from __future__ import annotations

import concurrent.futures
import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from ..entities.laurent import LaurentChainComplex, QuotientComplex
from ..entities.matrix import IntMatrix
from ..entities.reports import (
    AlphaVanishingReport,
    AlphaVanishingRow,
    DegreeGrowth,
    RankGradientReport,
    RankGradientRow,
    TailEstimate,
    TorsionGrowthReport,
    TorsionGrowthRow,
    TowerLevel,
    TowerReport,
)
from ..errors import (
    BoundViolation,
    DegenerateLevel,
    HypothesisViolated,
    IdentityViolation,
    InconsistentProfile,
    ValidationError,
)
from ..value_objects import GroupProfile, QuotientSpec
from .chain_complex import (
    alpha_log_det,
    alpha_log_dets,
    differential_determinants,
    homology,
    verify_rho_identity,
)
from .exact_linalg import (
    DEFAULT_MINOR_BUDGET,
    express_in_basis,
    integer_determinant,
    kernel_lattice,
    left_kernel_lattice,
    rank,
    smith_invariants,
)
from .group_ring import base_change, homology_module, mapping_torus_complex, operator_norm_bound
from ...utils.decorators import measure_time
from ...utils.logging_utils import get_logger

logger = get_logger("growth")

_FLAT = 1e-15

# largest chain rank at which tower levels still run the Laplacian cross-check
DEFAULT_LAPLACIAN_MAX_DIM = 256


# ---- Lambda

def bound_lambda(c: LaurentChainComplex) -> float:
    """Lambda = 4 sum_n max(ln K_n, 1) dim C_n, K_n the l1 bound of c_n."""
    total = 0.0
    for n in c.degrees():
        k = operator_norm_bound(c.differential(n)) if n >= 1 else 0.0
        weight = max(math.log(k), 1.0) if k > 0 else 1.0
        total += weight * c.dims[n]
    return 4.0 * total


def check_lambda_sandwich(report: TowerReport, slack: float = 1e-12) -> None:
    """Every bounded normalized quantity lies in [-Lambda, Lambda]; torsion and det(c_n) are >= 0."""
    lam = report.lam * (1 + slack)
    for level in report.levels:
        for (name, degree), value in level.normalized().items():
            if degree is None:
                continue
            if abs(value) > lam:
                raise BoundViolation(
                    f"{name}[{degree}] = {value} at level {level.quotient} leaves [-{report.lam}, {report.lam}]"
                )
            if name in ("ln_tors", "ln_det_c") and value < -slack:
                raise BoundViolation(f"{name}[{degree}] = {value} is negative at level {level.quotient}")


# ---- towers

def _check_levels(levels: Sequence[QuotientSpec], m: int) -> None:
    if not levels:
        raise ValidationError("a tower needs at least one level")
    for q in levels:
        if q.m != m:
            raise ValidationError(f"level {q} does not have {m} moduli")
    for a, b in zip(levels, levels[1:]):
        if b.index <= a.index:
            raise ValidationError(f"level indices must increase strictly: {a} then {b}")


def compute_level(
    c: LaurentChainComplex,
    q: QuotientSpec,
    level_index: int,
    primes: Sequence[int] = (),
    max_degree: Optional[int] = None,
    tolerance: float = 1e-9,
    check_laplacian: bool = True,
    budget: int = DEFAULT_MINOR_BUDGET,
    laplacian_max_dim: int = DEFAULT_LAPLACIAN_MAX_DIM,
) -> TowerLevel:
    """One tower level; every differential determinant is computed once and shared."""
    qc = base_change(c, q)
    cx = qc.complex
    summary = homology(cx, primes)
    dets = differential_determinants(cx, budget)
    alpha = alpha_log_dets(cx)
    if max(cx.dims, default=0) > laplacian_max_dim:
        check_laplacian = False
    identity = verify_rho_identity(
        cx, tolerance=tolerance, check_laplacian=check_laplacian, budget=budget, alpha=alpha, dets=dets
    )
    top = cx.top_degree if max_degree is None else min(max_degree, cx.top_degree)
    degrees = tuple(
        DegreeGrowth(
            degree=n,
            betti_q=summary[n].betti_q,
            d_hn=summary[n].d_hn,
            ln_tors=summary[n].log_tors,
            ln_det_c=dets[n].log_value if n in dets else 0.0,
            ln_det_alpha=alpha.log_det_alpha(n),
            betti_mod_p=dict(summary[n].betti_mod_p),
        )
        for n in range(top + 1)
    )
    logger.debug("level %d %s done", level_index, q)
    return TowerLevel(
        level_index=level_index,
        quotient=q,
        degrees=degrees,
        rho_z=identity.rho_z.log_value,
        rho_2=identity.rho_2.log_value,
        alpha_alternating=identity.rhs,
    )


def _aitken(a0: float, a1: float, a2: float) -> float:
    denom = a2 - 2 * a1 + a0
    if abs(denom) < _FLAT:
        return a2
    return a2 - (a2 - a1) ** 2 / denom


def tail_estimates(levels: Sequence[TowerLevel]) -> Tuple[TailEstimate, ...]:
    """Aitken extrapolation and the Cauchy heuristic on the last three levels of every series."""
    if not levels:
        return ()
    keys = list(levels[0].normalized())
    values = [level.normalized() for level in levels]
    out = []
    for key in keys:
        series = [v[key] for v in values]
        name, degree = key
        if len(series) < 3:
            out.append(TailEstimate(name, degree, series[-1], series[-1], None))
            continue
        a0, a1, a2 = series[-3:]
        step_prev, step_last = abs(a1 - a0), abs(a2 - a1)
        cauchy = step_last < step_prev or step_last < _FLAT
        if not cauchy:
            logger.warning(
                "%s[%s] is not Cauchy on the final levels (steps %.3g then %.3g)",
                name, degree, step_prev, step_last,
            )
        out.append(TailEstimate(name, degree, a2, _aitken(a0, a1, a2), cauchy))
    return tuple(out)


@measure_time
def run_tower(
    c: LaurentChainComplex,
    levels: Sequence[QuotientSpec],
    primes: Sequence[int] = (),
    max_degree: Optional[int] = None,
    jobs: int = 1,
    tolerance: float = 1e-9,
    check_laplacian: bool = True,
    budget: int = DEFAULT_MINOR_BUDGET,
    laplacian_max_dim: int = DEFAULT_LAPLACIAN_MAX_DIM,
) -> TowerReport:
    """Compute every level (in parallel when jobs > 1) and merge by level index."""
    levels = list(levels)
    _check_levels(levels, c.m)
    for p in primes:
        if not isprime(p):
            raise ValidationError(f"{p} is not a prime")
    top = c.top_degree if max_degree is None else min(max_degree, c.top_degree)
    options = dict(
        primes=tuple(primes), max_degree=top, tolerance=tolerance,
        check_laplacian=check_laplacian, budget=budget, laplacian_max_dim=laplacian_max_dim,
    )

    results: List[Optional[TowerLevel]] = [None] * len(levels)
    if jobs <= 1:
        for k, q in enumerate(levels):
            results[k] = compute_level(c, q, k, **options)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = {
                executor.submit(compute_level, c, q, k, **options): k for k, q in enumerate(levels)
            }
            for future in concurrent.futures.as_completed(futures):
                results[futures[future]] = future.result()

    computed = tuple(r for r in results if r is not None)
    report = TowerReport(
        levels=computed,
        primes=tuple(primes),
        max_degree=top,
        lam=bound_lambda(c),
        tails=tail_estimates(computed),
    )
    check_lambda_sandwich(report)
    return report


def default_levels(m: int, count: int) -> List[QuotientSpec]:
    """i = 1, 2, 4, ..., 2^(count-1) in every coordinate."""
    return [QuotientSpec((2 ** k,) * m) for k in range(count)]


# ---- alpha vanishing

def _projection_log_det(qc: QuotientComplex, n: int) -> Tuple[float, int]:
    # H_n(pr)_f: |coker| of the induced map on free parts, and the free rank
    cx, co = qc.complex, qc.coinvariant
    cycles = kernel_lattice(cx.differential(n))
    co_cycles = kernel_lattice(co.differential(n))
    co_boundaries = express_in_basis(co_cycles, co.differential(n + 1))
    free_coords = left_kernel_lattice(co_boundaries)
    if free_coords.rows == 0:
        return 0.0, 0
    induced = express_in_basis(co_cycles, qc.augmentation[n] @ cycles)
    factors = smith_invariants(free_coords @ induced)
    if len(factors) != free_coords.rows:
        raise HypothesisViolated(f"H_{n}(pr) is not rationally surjective at level {qc.quotient}")
    return sum(math.log(d) for d in factors), free_coords.rows


def _check_rational_triviality(qc: QuotientComplex, n: int) -> None:
    module = homology_module(qc, n)
    eye = IntMatrix.identity(module.generators)
    moved = IntMatrix.hstack(
        [module.presentation] + [a - eye for a in module.actions], rows=module.generators
    )
    if rank(moved) != rank(module.presentation):
        raise HypothesisViolated(
            f"deck group acts nontrivially on Q (x) H_{n} at level {qc.quotient}"
        )


@measure_time
def probe_alpha_vanishing(
    c: LaurentChainComplex,
    levels: Sequence[QuotientSpec],
    n: int,
    threshold: float = 5e-3,
    tolerance: float = 1e-9,
) -> AlphaVanishingReport:
    """|ln det alpha[i]_n| / index along the tower, with the hypothesis and projection checks."""
    levels = list(levels)
    _check_levels(levels, c.m)
    rows = []
    for k, q in enumerate(levels):
        qc = base_change(c, q)
        qc.complex.check_degree(n)
        _check_rational_triviality(qc, n)
        log_alpha = alpha_log_det(qc.complex, n).log_value
        proj, free_rank = _projection_log_det(qc, n)
        bound = free_rank * math.log(q.index)
        if proj < -tolerance or proj > bound + tolerance * max(1.0, bound):
            raise BoundViolation(
                f"ln det H_{n}(pr)_f = {proj} outside [0, {bound}] at level {q}"
            )
        rows.append(AlphaVanishingRow(k, q, log_alpha, proj, bound))

    tail = [r.normalized for r in rows[-3:]]
    monotone = all(b <= a + tolerance for a, b in zip(tail, tail[1:]))
    report = AlphaVanishingReport(n, threshold, tuple(rows), monotone)
    if not monotone:
        raise BoundViolation(f"|ln det alpha_{n}|/index does not decrease on the tail: {tail}")
    if tail[-1] >= threshold:
        raise BoundViolation(
            f"|ln det alpha_{n}|/index = {tail[-1]:.3g} at {rows[-1].quotient} is not below {threshold}"
        )
    return report


# ---- torsion growth of mapping tori

def log_mahler_measure(a: IntMatrix) -> float:
    """ln M(char poly of A) = sum over eigenvalues of ln max(1, |lambda|)."""
    eigenvalues = np.linalg.eigvals(a.to_numpy().astype(float))
    return float(sum(math.log(max(1.0, abs(lam))) for lam in eigenvalues))


def _torsion_level(a: IntMatrix, i: int) -> TorsionGrowthRow:
    oracle = integer_determinant(a.power(i) - IntMatrix.identity(a.rows))
    if oracle == 0:
        raise DegenerateLevel(f"det(A^{i} - I) = 0", level=i)
    qc = base_change(mapping_torus_complex(a), QuotientSpec((i,)))
    h0 = homology(qc.complex)[0]
    if h0.betti_q or h0.torsion_order != abs(oracle):
        raise IdentityViolation(
            f"|tors H_0| = {h0.torsion_order} but |det(A^{i} - I)| = {abs(oracle)}"
        )
    return TorsionGrowthRow(i, h0.log_tors / i, math.log(abs(oracle)) / i)


@measure_time
def probe_torsion_growth(
    a: IntMatrix,
    levels: Sequence[int],
    tolerance: float = 1e-4,
) -> TorsionGrowthReport:
    """ln|tors H_0(T_A[i])| / i through the full pipeline, against det(A^i - I) and ln M(A)."""
    mapping_torus_complex(a)
    rows = []
    for i in levels:
        if i < 1:
            raise ValidationError(f"tower level {i} must be >= 1")
        try:
            rows.append(_torsion_level(a, i))
        except DegenerateLevel as exc:
            logger.warning("skipping level %d: %s", exc.level, exc)
            rows.append(TorsionGrowthRow(i, None, None, degenerate=True))
    report = TorsionGrowthReport(log_mahler_measure(a), tuple(rows))
    gap = report.mahler_gap
    if gap is not None and gap > tolerance:
        logger.warning("final level is %.3g away from ln M(A) = %.6f", gap, report.log_mahler)
    return report


# ---- rank gradient of Z * H

def rank_gradient_example(
    profile: GroupProfile,
    levels: Sequence[int],
    mod_p: Optional[Mapping[int, int]] = None,
) -> RankGradientReport:
    """G = Z * H and G_i the kernel of G -> Z -> Z/i.

    G_i = Z * H^{*i}, so b_1(G_i; K) = 1 + i b_1(H; K), H_1(G_i) = Z + H_1(H)^i
    and d(G_i) = 1 + i d(H).
    """
    mod_p = dict(mod_p or {})
    if not profile.is_consistent():
        raise InconsistentProfile(
            f"need b1_Q <= b1_Fp <= d(H_1) <= d(H), got {profile}"
        )
    for p, b in mod_p.items():
        if not isprime(p):
            raise ValidationError(f"{p} is not a prime")
        if not profile.b1_q <= b <= profile.d_h1:
            raise InconsistentProfile(f"b1(H; F_{p}) = {b} outside [b1_Q, d(H_1)]")
    rows = []
    for i in levels:
        if i < 1:
            raise ValidationError(f"subgroup index {i} must be >= 1")
        rows.append(
            RankGradientRow(
                index=i,
                b1_q=1 + i * profile.b1_q,
                b1_fp=1 + i * profile.b1_fp,
                d_h1=1 + i * profile.d_h1,
                d_g=1 + i * profile.d_h,
                b1_mod_p={p: 1 + i * b for p, b in mod_p.items()},
            )
        )
    limits = [Fraction(profile.b1_q), Fraction(profile.b1_fp), Fraction(profile.d_h1), Fraction(profile.d_h)]
    return RankGradientReport(
        profile=profile,
        rows=tuple(rows),
        limit_b1_q=limits[0],
        limit_b1_fp=limits[1],
        limit_d_h1=limits[2],
        rank_gradient=limits[3],
        strict_chain=all(a < b for a, b in zip(limits, limits[1:])),
        limit_b1_mod_p={p: Fraction(b) for p, b in mod_p.items()},
    )


def normalized_rank_gradient_rows(report: RankGradientReport) -> List[Dict[str, Fraction]]:
    """Per-index normalized values; (d(G_i) - 1)/i is the rank-gradient term."""
    return [
        {
            "b1_q": Fraction(r.b1_q, r.index),
            "b1_fp": Fraction(r.b1_fp, r.index),
            "d_h1": Fraction(r.d_h1, r.index),
            "rank_gradient": Fraction(r.d_g - 1, r.index),
        }
        for r in report.rows
    ]


__all__ = [
    "bound_lambda", "check_lambda_sandwich", "compute_level", "tail_estimates",
    "run_tower", "default_levels",
    "probe_alpha_vanishing", "log_mahler_measure", "probe_torsion_growth",
    "rank_gradient_example", "normalized_rank_gradient_rows",
]
