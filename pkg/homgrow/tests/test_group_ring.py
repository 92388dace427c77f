import math
import random

import numpy as np
import pytest

from homgrow.domain.entities.laurent import LaurentMatrix, LaurentPoly
from homgrow.domain.entities.matrix import IntMatrix
from homgrow.domain.entities.modules import ModuleWithAction
from homgrow.domain.errors import (
    DimensionMismatch,
    IncompatibleAction,
    NonSquareMatrix,
    SingularMatrix,
    ValidationError,
)
from homgrow.domain.services.chain_complex import homology
from homgrow.domain.services.corpus import random_laurent_poly
from homgrow.domain.services.exact_linalg import cokernel_structure
from homgrow.domain.services.group_ring import (
    base_change,
    base_change_matrix,
    circle_complex,
    coset_projection,
    further_quotient,
    homology_with_action,
    mapping_torus_complex,
    operator_norm_bound,
    point_complex,
    product_with_circle,
    regular_representation,
    sphere_complex,
    torus_complex,
    validate_module_action,
)
from homgrow.domain.services.growth import bound_lambda
from homgrow.domain.value_objects import QuotientSpec


def test_regular_representation_of_generator_is_a_cyclic_permutation():
    rep = regular_representation(LaurentPoly.variable(1, 0), (3,))
    assert all(sum(col) == 1 for col in rep.columns())
    assert rep.power(3) == IntMatrix.identity(3)
    assert rep != IntMatrix.identity(3)


def test_base_change_of_circle():
    qc = base_change(circle_complex(), QuotientSpec((4,)))
    assert qc.complex.dims == (4, 4)
    assert qc.index == 4
    assert qc.augmentation[0].shape == (1, 4)
    assert len(qc.actions[0]) == 1
    assert qc.coinvariant.differential(1).is_zero()


def test_base_change_rejects_wrong_number_of_moduli():
    with pytest.raises(DimensionMismatch):
        base_change(circle_complex(), QuotientSpec((2, 2)))


def test_quotient_spec_validates_moduli():
    assert QuotientSpec((2, 3)).index == 6
    assert QuotientSpec((2, 4)).divides(QuotientSpec((4, 8)))
    assert not QuotientSpec((3,)).divides(QuotientSpec((4,)))
    with pytest.raises(ValueError):
        QuotientSpec((0, 2))


def test_further_quotient_matches_direct_base_change():
    torus = torus_complex(2)
    qc = base_change(torus, QuotientSpec((4, 2)))
    assert further_quotient(qc, QuotientSpec((2, 2))) == base_change(torus, QuotientSpec((2, 2))).complex
    assert further_quotient(qc, QuotientSpec((1, 1))) == qc.coinvariant


def test_coset_projection_needs_a_divisor():
    pi, section = coset_projection(QuotientSpec((4,)), QuotientSpec((2,)))
    assert pi.shape == (2, 4) and section.shape == (4, 2)
    assert pi @ section == IntMatrix.identity(2)
    with pytest.raises(ValidationError):
        coset_projection(QuotientSpec((4,)), QuotientSpec((3,)))


def test_torus_levels_have_torus_homology():
    cx = base_change(torus_complex(2), QuotientSpec((2, 3))).complex
    assert [h.betti_q for h in homology(cx)] == [1, 2, 1]
    assert all(h.is_free for h in homology(cx))


def test_mapping_torus_torsion_at_level_two():
    a = IntMatrix.from_rows([[2, 1], [1, 1]])
    cx = base_change(mapping_torus_complex(a), QuotientSpec((2,))).complex
    h0 = homology(cx)[0]
    assert h0.betti_q == 0
    assert h0.torsion_order == 5


def test_mapping_torus_needs_square_nonsingular_matrix():
    with pytest.raises(NonSquareMatrix):
        mapping_torus_complex(IntMatrix.from_rows([[1, 2, 3]]))
    with pytest.raises(SingularMatrix):
        mapping_torus_complex(IntMatrix.from_rows([[1, 1], [1, 1]]))
    # det 2 is allowed: only det != 0 is required
    assert mapping_torus_complex(IntMatrix.from_rows([[2]])).dims == (1, 1)


def test_homology_with_action_of_circle_is_trivial():
    module = homology_with_action(circle_complex(), QuotientSpec((3,)), 0)
    assert cokernel_structure(module.presentation) == (1, ())
    assert module.orders == (3,)


def test_validate_module_action_rejects_wrong_order():
    module = ModuleWithAction(IntMatrix.diagonal([4]), (IntMatrix.diagonal([3]),), (3,))
    with pytest.raises(IncompatibleAction):
        validate_module_action(module)
    validate_module_action(ModuleWithAction(IntMatrix.diagonal([4]), (IntMatrix.diagonal([3]),), (2,)))


def test_example_complexes_shapes():
    assert point_complex().dims == (1,)
    assert circle_complex().dims == (1, 1)
    assert torus_complex(3).dims == (1, 3, 3, 1)
    s1_cross = product_with_circle(sphere_complex(2))
    assert s1_cross.m == 1
    assert s1_cross.dims == (1, 1, 1, 1)
    with pytest.raises(ValidationError):
        torus_complex(0)
    with pytest.raises(ValidationError):
        sphere_complex(0)


def test_operator_norm_and_lambda_bounds():
    assert operator_norm_bound(circle_complex().differential(1)) == 2.0
    assert bound_lambda(circle_complex()) == pytest.approx(8.0)
    assert bound_lambda(point_complex()) == pytest.approx(4.0)
    ln4 = math.log(4)
    assert bound_lambda(torus_complex(2)) == pytest.approx(4 * (1 + 2 * ln4 + ln4))


def _largest_singular_value(a: IntMatrix) -> float:
    return float(np.linalg.svd(a.to_numpy(), compute_uv=False).max(initial=0.0))


@pytest.mark.parametrize(
    "complex_",
    [circle_complex(), torus_complex(2), torus_complex(3), mapping_torus_complex(IntMatrix.from_rows([[2, 1], [1, 1]]))],
)
@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_operator_norm_bound_dominates_singular_values(complex_, i):
    moduli = (i,) * complex_.m
    for n in range(1, complex_.top_degree + 1):
        a = base_change_matrix(complex_.differential(n), moduli)
        assert _largest_singular_value(a) <= operator_norm_bound(complex_.differential(n)) + 1e-9


def test_operator_norm_bound_on_random_laurent_matrices():
    rng = random.Random(17)
    for _ in range(20):
        m = rng.randint(1, 2)
        d = LaurentMatrix.from_rows(m, [[random_laurent_poly(rng, m) for _ in range(2)] for _ in range(2)])
        moduli = tuple(rng.randint(1, 5) for _ in range(m))
        assert _largest_singular_value(base_change_matrix(d, moduli)) <= operator_norm_bound(d) + 1e-9
