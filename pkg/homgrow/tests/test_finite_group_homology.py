import math

import pytest

from homgrow.domain.entities.matrix import IntMatrix
from homgrow.domain.entities.modules import FinAbGroup, ModuleWithAction
from homgrow.domain.entities.reports import AbelianStructure, EstimateConstants, Filtration
from homgrow.domain.errors import HypothesisViolated, ValidationError
from homgrow.domain.services.corpus import d_by_exhaustive_search, nilpotent_modules, nilpotent_tower_cases
from homgrow.domain.services.finite_group_homology import (
    ascending_filtration_length,
    augmentation_filtration,
    chained_module,
    check_group_homology_bounds,
    coinvariants,
    estimate_constants,
    group_from_moduli,
    group_homology,
    nu_kernel_cokernel,
    resolution_rank,
    standard_resolution,
    verify_estimate_bounds,
    verify_resolution,
    weak_compositions,
)
from homgrow.domain.services.group_ring import (
    base_change,
    circle_complex,
    homology_module,
    laurent_tensor,
    mapping_torus_complex,
    sphere_complex,
)
from homgrow.domain.value_objects import QuotientSpec


def _trivial_z(orders):
    return ModuleWithAction.trivial_action(IntMatrix.diagonal([0]), tuple(orders))


def _cyclic(order, unit, group):
    return ModuleWithAction(IntMatrix.diagonal([order]), (IntMatrix.diagonal([unit]),), group)


def test_group_from_moduli_is_chained():
    assert group_from_moduli((2, 3)) == FinAbGroup((6,))
    assert group_from_moduli((4, 2)) == FinAbGroup((2, 4))
    assert group_from_moduli((1, 5)) == FinAbGroup((5,))
    assert group_from_moduli(()).order == 1


def test_fin_ab_group_rejects_unchained_factors():
    with pytest.raises(ValueError):
        FinAbGroup((2, 3))
    with pytest.raises(ValueError):
        FinAbGroup((1,))


def test_weak_compositions_and_resolution_ranks():
    assert list(weak_compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    for n in range(5):
        for m in range(1, 4):
            assert resolution_rank(n, m) == math.comb(n + m - 1, m - 1)
            assert resolution_rank(n, m) == len(list(weak_compositions(n, m)))
    assert resolution_rank(0, 0) == 1 and resolution_rank(2, 0) == 0


@pytest.mark.parametrize("factors", [(2,), (3,), (2, 2), (2, 4)])
def test_standard_resolution_is_exact(factors):
    res = standard_resolution(FinAbGroup(factors), 3)
    verify_resolution(res)
    assert res.ranks == tuple(resolution_rank(n, len(factors)) for n in range(4))


def test_integral_homology_of_small_groups():
    z2 = FinAbGroup((2,))
    assert group_homology(z2, _trivial_z((2,)), 0) == AbelianStructure(1, ())
    assert group_homology(z2, _trivial_z((2,)), 1) == AbelianStructure(0, (2,))
    assert group_homology(z2, _trivial_z((2,)), 2) == AbelianStructure(0, ())
    assert group_homology(FinAbGroup((4,)), _trivial_z((4,)), 1) == AbelianStructure(0, (4,))

    klein = FinAbGroup((2, 2))
    assert group_homology(klein, _trivial_z((2, 2)), 1) == AbelianStructure(0, (2, 2))
    assert group_homology(klein, _trivial_z((2, 2)), 2) == AbelianStructure(0, (2,))


def test_group_homology_bounds_report():
    report = check_group_homology_bounds(FinAbGroup((2,)), _trivial_z((2,)), 1)
    assert report.homology.factors == (2,)
    assert report.resolution_rank == 1
    assert report.group_order == 2
    with pytest.raises(ValidationError):
        group_homology(FinAbGroup((2,)), _trivial_z((2,)), -1)


def test_chained_module_reindexes_the_action():
    group, module = chained_module(_trivial_z((2, 3)))
    assert group == FinAbGroup((6,))
    assert len(module.actions) == 1
    assert module.orders == (6,)


@pytest.mark.parametrize("module,length", nilpotent_modules())
def test_filtrations_of_nilpotent_modules(module, length):
    assert augmentation_filtration(module) == Filtration(True, length)
    assert ascending_filtration_length(module) == length


def test_non_nilpotent_modules():
    sign_on_z3 = _cyclic(3, 2, (2,))
    assert augmentation_filtration(sign_on_z3) == Filtration(False, None)
    assert ascending_filtration_length(sign_on_z3) is None
    sign_on_z = ModuleWithAction(IntMatrix.diagonal([0]), (IntMatrix.diagonal([-1]),), (2,))
    assert augmentation_filtration(sign_on_z) == Filtration(False, None)


def test_coinvariants_and_kernel_of_mu():
    report = coinvariants(_cyclic(4, 3, (2,)))
    assert report.coinvariants == AbelianStructure(0, (2,))
    assert report.ker_mu == AbelianStructure(0, (2,))
    assert report.filtration == Filtration(True, 2)
    assert report.group_order == 2 and report.group_d == 1


def test_nu_on_the_double_cover_of_the_circle():
    qc = base_change(circle_complex(), QuotientSpec((2,)))
    nu0 = nu_kernel_cokernel(qc, 0)
    assert nu0.ker_nu.order == 1 and nu0.coker_nu.order == 1
    nu1 = nu_kernel_cokernel(qc, 1)
    assert nu1.ker_nu.order == 1
    # the cycle (1, 1) maps to twice the generator downstairs
    assert nu1.coker_nu == AbelianStructure(0, (2,))
    assert nu1.coker_bound == 2


def test_estimate_constants_recursion():
    assert estimate_constants(1, 0, 0) == EstimateConstants(1, 0, 0, 1)
    assert estimate_constants(2, 1, 0) == EstimateConstants(32, 4, 36, 5)
    with pytest.raises(ValidationError):
        estimate_constants(0, 1, 0)
    with pytest.raises(ValidationError):
        estimate_constants(1, 1, 2)


def test_explicit_estimates_hold_on_circle_cover():
    qc = base_change(circle_complex(), QuotientSpec((2,)))
    report = verify_estimate_bounds(qc, 1, 1)
    assert report.group_order == 2
    assert [row.degree for row in report.rows] == [0, 1]
    assert all(row.d_hn <= row.d_bound for row in report.rows)


def test_exhaustive_generator_search():
    assert d_by_exhaustive_search((1,)) == 0
    assert d_by_exhaustive_search((2, 3)) == 1
    assert d_by_exhaustive_search((2, 2)) == 2
    assert d_by_exhaustive_search((2, 2, 2)) == 3
    assert d_by_exhaustive_search((2, 2, 2), max_n=2) is None


def test_explicit_estimates_with_a_nontrivial_nilpotent_action():
    # over Z/2 the generator acts on H_0 = H_1 = Z/8 as multiplication by 3
    times_three = mapping_torus_complex(IntMatrix.from_rows([[3]]))
    qc = base_change(laurent_tensor(sphere_complex(1), times_three), QuotientSpec((2,)))
    assert [augmentation_filtration(homology_module(qc, n)).length for n in range(3)] == [3, 3, 0]
    report = verify_estimate_bounds(qc, 3, 2)
    assert report.r == 3 and report.group_order == 2
    assert [row.degree for row in report.rows] == [0, 1, 2]
    assert [row.d_hn for row in report.rows] == [1, 1, 0]
    assert all(row.d_hn <= row.d_bound for row in report.rows)
    assert report.rows[0].ker_pr.order == 4
    with pytest.raises(HypothesisViolated):
        verify_estimate_bounds(qc, 2, 2)


def test_nilpotent_tower_cases_include_long_filtrations():
    lengths = {}
    for name, c, q in nilpotent_tower_cases():
        qc = base_change(c, q)
        found = [augmentation_filtration(homology_module(qc, n)) for n in qc.complex.degrees()]
        assert all(f.is_nilpotent for f in found)
        r = max(1, max(f.length for f in found))
        lengths[name] = r
        verify_estimate_bounds(qc, r, qc.complex.top_degree)
        for n in qc.complex.degrees():
            nu_kernel_cokernel(qc, n)
    assert lengths["mapping_torus:[[3]]"] == 3
    assert lengths["mapping_torus:[[7]]"] == 4
    assert lengths["s1 x mapping_torus:[[3]]"] == 3
