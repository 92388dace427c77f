import math

import pytest

from homgrow.domain.entities.chain import IntChainComplex
from homgrow.domain.entities.matrix import IntMatrix
from homgrow.domain.errors import DegreeOutOfRange, InvalidComplex, ValidationError
from homgrow.domain.services.chain_complex import (
    alpha_log_det,
    alpha_log_dets,
    d_of_abelian_group,
    d_of_abelian_group_primewise,
    direct_sum,
    homology,
    laplacian,
    rho_2,
    rho_Z,
    shift,
    tensor,
    verify_rho_identity,
)
from homgrow.domain.services.group_ring import base_change, circle_complex
from homgrow.domain.value_objects import QuotientSpec


def _circle_level(i: int) -> IntChainComplex:
    return base_change(circle_complex(), QuotientSpec((i,))).complex


def _times_two() -> IntChainComplex:
    # Z --2--> Z: H_0 = Z/2, H_1 = 0
    return IntChainComplex((1, 1), (IntMatrix.from_rows([[2]]),))


def test_complex_rejects_non_composable_differentials():
    one = IntMatrix.from_rows([[1]])
    with pytest.raises(InvalidComplex) as exc:
        IntChainComplex((1, 1, 1), (one, one))
    assert exc.value.degree == 1
    with pytest.raises(InvalidComplex):
        IntChainComplex((2, 1), (one,))


def test_circle_level_homology():
    summary = homology(_circle_level(3))
    assert [h.betti_q for h in summary] == [1, 1]
    assert all(h.is_free for h in summary)
    assert [h.d_hn for h in summary] == [1, 1]


def test_torsion_and_mod_p_betti_numbers():
    summary = homology(_times_two(), primes=(2, 3))
    h0, h1 = summary[0], summary[1]
    assert h0.betti_q == 0 and h0.invariant_factors == (2,)
    assert h0.torsion_order == 2
    assert h0.log_tors == pytest.approx(math.log(2))
    assert h0.betti_mod_p == {2: 1, 3: 0}
    # Tor(Z/2, F_2) shows up one degree higher
    assert h1.betti_q == 0 and h1.is_free
    assert h1.betti_mod_p == {2: 1, 3: 0}


def test_minimal_generators_of_abelian_groups():
    assert d_of_abelian_group((2, 6), 1) == 3
    assert d_of_abelian_group_primewise((2, 6), 1) == 3
    assert d_of_abelian_group((), 0) == 0
    assert d_of_abelian_group_primewise((3, 9, 45), 0) == 3


def test_rho_invariants_of_circle_level():
    c = _circle_level(4)
    assert rho_Z(c).log_value == pytest.approx(0.0)
    assert rho_2(c).log_value == pytest.approx(math.log(4))


def test_rho_invariants_of_torsion_complex():
    c = _times_two()
    assert rho_Z(c).log_value == pytest.approx(math.log(2))
    assert rho_2(c).log_value == pytest.approx(math.log(2))
    report = verify_rho_identity(c)
    assert report.lhs == pytest.approx(0.0)
    assert report.rhs == pytest.approx(0.0)


@pytest.mark.parametrize("i", [2, 3, 5])
def test_alpha_determinants_of_circle_level(i):
    alpha = alpha_log_dets(_circle_level(i))
    assert alpha.log_det_alpha(0) == pytest.approx(-0.5 * math.log(i))
    assert alpha.log_det_alpha(1) == pytest.approx(0.5 * math.log(i))


@pytest.mark.parametrize("i", [1, 3, 6])
def test_alpha_methods_agree_exactly(i):
    c = _circle_level(i)
    by_index = alpha_log_dets(c)
    by_projection = alpha_log_dets(c, method="projection")
    assert by_index.per_degree == by_projection.per_degree
    assert alpha_log_det(c, 1) == by_index.per_degree[1]


def test_alpha_rejects_unknown_method_and_degree():
    c = _circle_level(2)
    with pytest.raises(ValidationError):
        alpha_log_dets(c, method="spectral")
    with pytest.raises(DegreeOutOfRange):
        alpha_log_det(c, 5)


@pytest.mark.parametrize("i", [2, 4, 7])
def test_rho_identity_on_circle_levels(i):
    report = verify_rho_identity(_circle_level(i))
    assert report.lhs == pytest.approx(-math.log(i))
    assert report.rhs == pytest.approx(report.lhs)


def test_laplacian_is_symmetric():
    c = _circle_level(3)
    lap = laplacian(c, 0)
    assert lap.shape == (3, 3)
    assert lap == lap.T
    with pytest.raises(DegreeOutOfRange):
        laplacian(c, 2)


def test_direct_sum_adds_homology():
    summary = homology(direct_sum(_circle_level(2), _times_two()))
    assert summary[0].betti_q == 1
    assert summary[0].invariant_factors == (2,)
    assert summary[1].betti_q == 1


def test_shift_moves_torsion_up():
    shifted = shift(_times_two(), 1)
    assert shifted.dims == (0, 1, 1)
    summary = homology(shifted)
    assert summary[1].invariant_factors == (2,)
    assert summary[2].betti_q == 0
    with pytest.raises(ValidationError):
        shift(_times_two(), -1)


def test_tensor_of_torsion_complexes_follows_kuenneth():
    t = tensor(_times_two(), _times_two())
    assert t.dims == (1, 2, 1)
    summary = homology(t)
    assert summary[0].invariant_factors == (2,)
    assert summary[1].invariant_factors == (2,) and summary[1].betti_q == 0
    assert summary[2].betti_q == 0 and summary[2].is_free
    assert t.euler_characteristic() == 0
