"""
Seeded verification suites behind ``homgrow verify``.

Each suite draws its cases from ``domain.services.corpus`` with a
``random.Random`` seeded per suite, runs the exact identity or bound checks
of the domain services on every case and counts passes and failures. A case
fails when a service raises a ``DomainError`` or when an oracle in this
module disagrees.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ..config.settings import Settings, load_settings
from ..domain.entities.chain import IntChainComplex
from ..domain.entities.matrix import IntMatrix
from ..domain.enums import Suite
from ..domain.errors import DomainError, IdentityViolation
from ..domain.services import corpus
from ..domain.services.chain_complex import (
    alpha_log_dets,
    d_of_abelian_group,
    d_of_abelian_group_primewise,
    homology,
    verify_rho_identity,
)
from ..domain.services.exact_linalg import (
    cauchy_binet_square,
    fk_factorization_check,
    fk_square,
    rank_mod_p,
    smith_invariants,
    smith_normal_form,
)
from ..domain.services.finite_group_homology import (
    ascending_filtration_length,
    augmentation_filtration,
    check_group_homology_bounds,
    coinvariants,
    nu_kernel_cokernel,
    resolution_rank,
    standard_resolution,
    verify_estimate_bounds,
    verify_resolution,
)
from ..domain.services.group_ring import (
    base_change,
    further_quotient,
    homology_module,
    validate_module_action,
)
from ..domain.services.growth import (
    default_levels,
    normalized_rank_gradient_rows,
    probe_alpha_vanishing,
    probe_torsion_growth,
    rank_gradient_example,
)
from ..domain.value_objects import GroupProfile, QuotientSpec
from ..infrastructure.examples import ExampleLibrary
from ..utils.decorators import measure_time
from ..utils.logging_utils import get_logger

logger = get_logger("suites")

# Case counts used when --count is not given.
DEFAULT_COUNTS: Dict[Suite, int] = {
    Suite.RHO_IDENTITY: 200,
    Suite.FK_FACTORIZATION: 500,
    Suite.SMITH: 200,
    Suite.MIN_GENERATORS: 100,
    Suite.GROUP_HOMOLOGY: 60,
    Suite.MU_NU_ESTIMATE: 40,
    Suite.FILTRATION: 40,
    Suite.BASE_CHANGE: 20,
    Suite.MAPPING_TORUS: 8,
    Suite.RANK_GRADIENT: 50,
    Suite.ALPHA_VANISHING: 2,
}

_SANDWICH_PRIMES = (2, 3)
_MAPPING_TORUS_LEVELS = (1, 2, 3, 4, 6, 8)


@dataclass(frozen=True, slots=True)
class SuiteResult:
    suite: Suite
    passed: int
    failed: int
    failures: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_record(self) -> Dict[str, object]:
        return {"suite": self.suite.value, "passed": self.passed, "failed": self.failed}


@dataclass
class _Tally:
    passed: int = 0
    failures: List[str] = field(default_factory=list)

    def run(self, label: str, check: Callable[[], None]) -> None:
        try:
            check()
        except DomainError as exc:
            logger.debug("%s failed: %s", label, exc)
            self.failures.append(f"{label}: {type(exc).__name__}: {exc}")
        else:
            self.passed += 1


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise IdentityViolation(message)


# ---- exact linear algebra

def _rho_identity(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    for k in range(count):
        c = corpus.random_chain_complex(rng)

        def check(c=c) -> None:
            verify_rho_identity(
                c,
                tolerance=settings.tolerance,
                check_laplacian=settings.check_laplacian,
                budget=settings.minor_budget,
            )
            by_index = alpha_log_dets(c)
            by_projection = alpha_log_dets(c, method="projection")
            for n in c.degrees():
                _expect(
                    by_index.square_exact(n) == by_projection.square_exact(n),
                    f"det(alpha_{n})^2 differs between the index and projection formulas",
                )

        yield f"complex #{k} dims={c.dims}", check


def _fk_factorization(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    for k in range(count):
        a = corpus.random_matrix(rng)

        def check(a=a) -> None:
            fk_factorization_check(a)
            lattice_route, _ = fk_square(a, budget=0)
            _expect(lattice_route == cauchy_binet_square(a), "lattice route disagrees with Cauchy-Binet")

        yield f"matrix #{k} shape={a.shape}", check


def _smith(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    for k in range(count):
        a = corpus.random_matrix(rng)
        u, _ = corpus.random_unimodular(rng, a.rows)
        v, _ = corpus.random_unimodular(rng, a.cols)

        def check(a=a, u=u, v=v) -> None:
            sf = smith_normal_form(a, transforms=True)
            _expect(sf.left_transform @ a @ sf.right_transform == sf.diagonal_matrix(), "U A V is not diagonal")
            _expect(sf.left_transform @ sf.left_inverse == IntMatrix.identity(a.rows), "U^-1 is wrong")
            _expect(sf.right_transform @ sf.right_inverse == IntMatrix.identity(a.cols), "V^-1 is wrong")
            _expect(smith_invariants(u @ a @ v) == sf.invariant_factors, "invariants change under unimodular moves")

        yield f"matrix #{k} shape={a.shape}", check


# ---- minimal numbers of generators

def _tower_homologies() -> Iterator[Tuple[str, IntChainComplex]]:
    library = ExampleLibrary()
    for name, c in library.all_builtins():
        for q in default_levels(c.m, 3 if c.m <= 1 else 2):
            yield f"{name}{q}", base_change(c, q).complex


def _min_generators(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    for k in range(count):
        moduli = corpus.random_finite_abelian(rng)

        def check(moduli=moduli) -> None:
            factors = smith_invariants(IntMatrix.diagonal(list(moduli)))
            d = d_of_abelian_group(factors, 0)
            _expect(d == d_of_abelian_group_primewise(factors, 0), "prime-wise d disagrees")
            _expect(d == corpus.d_by_exhaustive_search(moduli), f"exhaustive search disagrees with d={d}")

        yield f"group #{k} moduli={moduli}", check

    for label, cx in _tower_homologies():

        def sandwich(cx=cx) -> None:
            for h in homology(cx, _SANDWICH_PRIMES):
                n = h.degree
                for p in _SANDWICH_PRIMES:
                    b_p = h.betti_mod_p[p]
                    direct = cx.dims[n] - rank_mod_p(cx.differential(n), p) - rank_mod_p(cx.differential(n + 1), p)
                    _expect(b_p == direct, f"b_{n}(F_{p}) = {b_p} but F_{p} ranks give {direct}")
                    _expect(h.betti_q <= b_p <= h.d_hn, f"b_Q <= b_F{p} <= d fails in degree {n}")
                _expect(
                    h.d_hn <= h.betti_q + h.log_tors / math.log(2) + 1e-9,
                    f"d(H_{n}) exceeds b_Q + log2|tors|",
                )

        yield label, sandwich


# ---- finite groups

def _group_homology(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    checked_resolutions = set()
    for k in range(count):
        group = corpus.random_group(rng)
        module = corpus.random_module(rng, group)
        n = rng.randint(0, 4)

        def check(group=group, module=module, n=n) -> None:
            if group.factors not in checked_resolutions:
                res = standard_resolution(group, 3)
                verify_resolution(res)
                for j, r in enumerate(res.ranks):
                    _expect(r == math.comb(j + group.d - 1, group.d - 1), f"rank F_{j} = {r}")
                checked_resolutions.add(group.factors)
            _expect(resolution_rank(n, group.d) == math.comb(n + group.d - 1, group.d - 1), "weak compositions")
            check_group_homology_bounds(group, module, n)

        yield f"G={group} d(M)<={module.generators} n={n}", check


def _mu_nu_estimate(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    for k in range(count):
        module, length = corpus.random_nilpotent_module(rng)

        def check(module=module, length=length) -> None:
            report = coinvariants(module, length)
            _expect(report.filtration.length == length, f"filtration length {report.filtration.length} != {length}")

        yield f"nilpotent module #{k}", check

    for name, c, q in corpus.nilpotent_tower_cases():

        def tower_check(c=c, q=q) -> None:
            qc = base_change(c, q)
            lengths = []
            for n in qc.complex.degrees():
                nu_kernel_cokernel(qc, n)
                lengths.append(augmentation_filtration(homology_module(qc, n)).length)
            verify_estimate_bounds(qc, max(1, max(lengths)), qc.complex.top_degree)

        yield f"{name}{q}", tower_check


def _filtration(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    cases = [(f"module #{k}", m, l) for k, (m, l) in enumerate(corpus.nilpotent_modules())]
    for k in range(count):
        module, length = corpus.random_nilpotent_module(rng)
        cases.append((f"random nilpotent #{k}", module, length))
    for label, module, length in cases:

        def check(module=module, length=length) -> None:
            descending = augmentation_filtration(module)
            _expect(descending.is_nilpotent and descending.length == length, f"augmentation index {descending}")
            _expect(ascending_filtration_length(module) == length, "ascending filtration disagrees")

        yield label, check


# ---- towers

def _divisor_level(rng: random.Random, q: QuotientSpec) -> QuotientSpec:
    return QuotientSpec(tuple(rng.choice([d for d in range(1, n + 1) if n % d == 0]) for n in q.moduli))


def _base_change(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    builtins = [(name, c) for name, c in ExampleLibrary().all_builtins() if c.m >= 1]
    for k in range(count):
        name, c = rng.choice(builtins)
        q = corpus.random_moduli(rng, c.m, max_modulus=4 if c.m <= 2 else 2)
        target = _divisor_level(rng, q)

        def check(c=c, q=q, target=target) -> None:
            qc = base_change(c, q)
            _expect(further_quotient(qc, target) == base_change(c, target).complex, "further quotient differs")
            _expect(qc.coinvariant == base_change(c, QuotientSpec((1,) * c.m)).complex, "coinvariant complex differs")
            for n in qc.complex.degrees():
                validate_module_action(homology_module(qc, n))

        yield f"{name} {q} -> {target}", check


def _mapping_torus(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    matrices = [IntMatrix.from_rows([[2, 1], [1, 1]]), IntMatrix.from_rows([[2]])]
    matrices += [corpus.random_hyperbolic_matrix(rng) for _ in range(max(0, count - len(matrices)))]
    for a in matrices[:count]:

        def check(a=a) -> None:
            report = probe_torsion_growth(a, _MAPPING_TORUS_LEVELS, tolerance=settings.torsion_tolerance)
            for row in report.rows:
                if not row.degenerate:
                    _expect(abs(row.gap) < 1e-9, f"level {row.level}: pipeline and det(A^i - I) differ")

        yield f"A={a}", check


_STRICT_PROFILE = GroupProfile(0, 1, 2, 3)


def _rank_gradient(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    profiles = [_STRICT_PROFILE] + [corpus.random_profile(rng) for _ in range(max(0, count - 1))]
    for profile in profiles[:count]:

        def check(profile=profile) -> None:
            report = rank_gradient_example(profile, (1, 2, 4, 8, 16))
            limits = (report.limit_b1_q, report.limit_b1_fp, report.limit_d_h1, report.rank_gradient)
            expected = tuple(Fraction(v) for v in (profile.b1_q, profile.b1_fp, profile.d_h1, profile.d_h))
            _expect(limits == expected, f"limits {limits} != profile {expected}")
            _expect(
                report.strict_chain == all(a < b for a, b in zip(expected, expected[1:])),
                "strict chain flag is wrong",
            )
            last = normalized_rank_gradient_rows(report)[-1]
            _expect(last["rank_gradient"] == Fraction(profile.d_h), "(d(G_i) - 1)/i is not d(H)")
            if profile == _STRICT_PROFILE:
                _expect(report.strict_chain, "0 < 1 < 2 < 3 is not reported strict")

        yield f"profile {profile}", check


def _alpha_vanishing(rng: random.Random, count: int, settings: Settings) -> Iterator[Tuple[str, Callable[[], None]]]:
    circle = ExampleLibrary().load_builtin("circle")
    levels = default_levels(1, 11)
    for n in range(min(count, 2)):

        def check(n=n) -> None:
            report = probe_alpha_vanishing(
                circle, levels, n, threshold=settings.alpha_tail, tolerance=settings.tolerance
            )
            for row in report.rows:
                _expect(
                    abs(abs(row.log_det_alpha) - 0.5 * math.log(row.quotient.index)) < 1e-9,
                    f"|ln det alpha_{n}| at {row.quotient} is not (1/2) ln i",
                )

        yield f"circle n={n}", check


_RUNNERS = {
    Suite.RHO_IDENTITY: _rho_identity,
    Suite.FK_FACTORIZATION: _fk_factorization,
    Suite.SMITH: _smith,
    Suite.MIN_GENERATORS: _min_generators,
    Suite.GROUP_HOMOLOGY: _group_homology,
    Suite.MU_NU_ESTIMATE: _mu_nu_estimate,
    Suite.FILTRATION: _filtration,
    Suite.BASE_CHANGE: _base_change,
    Suite.MAPPING_TORUS: _mapping_torus,
    Suite.RANK_GRADIENT: _rank_gradient,
    Suite.ALPHA_VANISHING: _alpha_vanishing,
}


def _suite_seed(seed: int, suite: Suite) -> int:
    # independent streams per suite, stable across runs and suite selections
    return seed * 1009 + list(Suite).index(suite)


@measure_time
def run_suite(
    suite: Suite,
    seed: int,
    count: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> SuiteResult:
    settings = settings or load_settings()
    suite = Suite(suite)
    n = DEFAULT_COUNTS[suite] if count is None else count
    rng = random.Random(_suite_seed(seed, suite))
    tally = _Tally()
    for label, check in _RUNNERS[suite](rng, n, settings):
        tally.run(label, check)
    result = SuiteResult(suite, tally.passed, len(tally.failures), tuple(tally.failures))
    logger.info("%s: %d passed, %d failed", suite.value, result.passed, result.failed)
    for failure in result.failures:
        logger.error("%s: %s", suite.value, failure)
    return result


def run_suites(
    suites: Sequence[Suite],
    seed: int,
    count: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> List[SuiteResult]:
    return [run_suite(s, seed, count, settings) for s in suites]


__all__ = ["SuiteResult", "DEFAULT_COUNTS", "run_suite", "run_suites"]
