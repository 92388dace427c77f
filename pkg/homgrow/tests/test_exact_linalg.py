import math
import random
from fractions import Fraction
from functools import reduce
from itertools import combinations

import numpy as np
import pytest

from homgrow.domain.entities.matrix import IntMatrix
from homgrow.domain.enums import DeterminantRoute
from homgrow.domain.errors import DimensionMismatch, ValidationError
from homgrow.domain.services.exact_linalg import (
    cauchy_binet_square,
    cokernel_structure,
    express_in_basis,
    ext_gcd,
    fk_determinant,
    fk_factorization_check,
    fk_square,
    gram_determinant,
    hermite_normal_form,
    integer_determinant,
    kernel_lattice,
    lattice_contains,
    rank,
    rank_mod_p,
    smith_invariants,
    smith_normal_form,
)
from homgrow.domain.services.corpus import random_matrix, random_unimodular
from homgrow.domain.services.group_ring import base_change, circle_complex
from homgrow.domain.value_objects import QuotientSpec

A = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])


def test_ext_gcd_bezout():
    g, s, t = ext_gcd(240, 46)
    assert g == 2
    assert s * 240 + t * 46 == 2
    assert ext_gcd(-4, 6)[0] == 2


def test_smith_invariants_known_example():
    assert smith_invariants(A) == (2, 6, 12)
    assert rank(A) == 3


def test_smith_transforms_reproduce_the_diagonal():
    sf = smith_normal_form(A, transforms=True)
    assert sf.left_transform @ A @ sf.right_transform == sf.diagonal_matrix()
    assert sf.left_transform @ sf.left_inverse == IntMatrix.identity(3)
    assert sf.right_transform @ sf.right_inverse == IntMatrix.identity(3)
    assert sf.torsion_factors == (2, 6, 12)


def test_smith_of_empty_and_zero_matrices():
    assert smith_invariants(IntMatrix.zeros(2, 3)) == ()
    assert smith_invariants(IntMatrix.zeros(0, 3)) == ()
    assert rank(IntMatrix.zeros(3, 0)) == 0


def test_smith_of_rectangular_matrix():
    a = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    sf = smith_normal_form(a, transforms=True)
    assert sf.invariant_factors == (1, 3)
    assert sf.left_transform @ a @ sf.right_transform == sf.diagonal_matrix()


def test_cokernel_structure_splits_free_and_torsion():
    assert cokernel_structure(IntMatrix.from_rows([[2, 0], [0, 0]])) == (1, (2,))
    assert cokernel_structure(A) == (0, (2, 6, 12))
    assert cokernel_structure(IntMatrix.zeros(2, 0)) == (2, ())


def test_rank_mod_p_drops_at_divisors():
    a = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert rank_mod_p(a, 2) == 1
    assert rank_mod_p(a, 3) == 1
    assert rank_mod_p(a, 5) == 2


def test_hermite_normal_form_small_lattice():
    h = hermite_normal_form(IntMatrix.from_rows([[2, 3], [4, 5]]))
    assert h == IntMatrix.from_rows([[2, 0], [0, 1]])


def test_kernel_lattice_is_saturated_and_normalized():
    k = kernel_lattice(IntMatrix.from_rows([[1, 1]]))
    assert k == IntMatrix.from_rows([[1], [-1]])
    k2 = kernel_lattice(IntMatrix.from_rows([[2, 4]]))
    assert k2 == IntMatrix.from_rows([[2], [-1]])
    assert (IntMatrix.from_rows([[2, 4]]) @ k2).is_zero()


def test_express_in_basis_and_lattice_membership():
    basis = IntMatrix.diagonal([2, 3])
    coords = express_in_basis(basis, IntMatrix.from_rows([[4], [9]]))
    assert coords == IntMatrix.from_rows([[2], [3]])
    with pytest.raises(ValidationError):
        express_in_basis(basis, IntMatrix.from_rows([[1], [0]]))
    assert lattice_contains(basis, [2, -3])
    assert not lattice_contains(basis, [2, 1])


def test_integer_determinant():
    assert integer_determinant(IntMatrix.from_rows([[2, 1], [1, 1]])) == 1
    assert integer_determinant(IntMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert integer_determinant(IntMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert integer_determinant(A) == -144
    assert integer_determinant(IntMatrix.zeros(0, 0)) == 1
    with pytest.raises(DimensionMismatch):
        integer_determinant(IntMatrix.zeros(2, 3))


def test_fk_square_routes_agree():
    a = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert cauchy_binet_square(a) == 54
    assert fk_square(a) == (54, DeterminantRoute.CAUCHY_BINET)
    assert fk_square(a, budget=0) == (54, DeterminantRoute.LATTICE)
    assert fk_square(IntMatrix.zeros(2, 2)) == (1, DeterminantRoute.EMPTY)


def test_fk_square_sends_large_circulants_through_the_lattice():
    # 64 minors of size 63: cheap to count, far too dear to expand
    c1 = base_change(circle_complex(), QuotientSpec((64,))).complex.differential(1)
    assert fk_square(c1) == (64 * 64, DeterminantRoute.LATTICE)
    assert cauchy_binet_square(IntMatrix.from_rows([[1, -1, 0], [0, 1, -1], [-1, 0, 1]])) == 9


def test_fk_determinant_of_a_rank_one_map():
    det = fk_determinant(IntMatrix.from_rows([[2, 0], [0, 0]]))
    assert det.square_exact == 4
    assert det.log_value == pytest.approx(math.log(2))


@pytest.mark.parametrize("i", [2, 3, 5, 8])
def test_fk_determinant_of_circulant_is_the_index(i):
    c1 = base_change(circle_complex(), QuotientSpec((i,))).complex.differential(1)
    assert fk_determinant(c1).log_value == pytest.approx(math.log(i))


def test_fk_factorization_pieces():
    a = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    fact = fk_factorization_check(a)
    assert fact.det_u.square_exact == 54
    assert fact.torsion_order == 3
    assert fact.det_inclusion.square_exact == 6
    assert fact.det_projection.square_exact == 1


def _minor_gcd(a: IntMatrix, k: int) -> int:
    minors = (
        integer_determinant(a.select_rows(rows).select_columns(cols))
        for rows in combinations(range(a.rows), k)
        for cols in combinations(range(a.cols), k)
    )
    return reduce(math.gcd, minors, 0)


def test_invariant_factors_are_ratios_of_minor_gcds():
    assert [_minor_gcd(A, k) for k in (1, 2, 3)] == [2, 12, 144]
    rng = random.Random(11)
    for _ in range(25):
        a = random_matrix(rng, max_rows=4, max_cols=4)
        factors = smith_invariants(a)
        for k in range(1, min(a.shape) + 1):
            expected = math.prod(factors[:k]) if k <= len(factors) else 0
            assert _minor_gcd(a, k) == expected


@pytest.mark.parametrize("seed", range(8))
def test_fk_determinant_matches_singular_values(seed):
    rng = random.Random(seed)
    a = random_matrix(rng, max_rows=4, max_cols=4, bound=3)
    values = np.linalg.svd(a.to_numpy(), compute_uv=False)
    nonzero = values[values > 1e-10 * max(1.0, float(values.max(initial=0.0)))]
    assert len(nonzero) == rank(a)
    det = fk_determinant(a)
    assert det.log_value == pytest.approx(float(np.sum(np.log(nonzero))), abs=1e-7)
    eigen = np.linalg.eigvalsh(a.to_numpy().T @ a.to_numpy())
    eigen = eigen[eigen > 1e-10 * max(1.0, float(eigen.max(initial=0.0)))]
    assert 2 * det.log_value == pytest.approx(float(np.sum(np.log(eigen))), abs=1e-7)


def test_gram_determinant_worked_examples():
    assert gram_determinant([]) == 1
    assert gram_determinant([[1, 0], [1, 1]]) == 1
    assert gram_determinant([[1, 2, 3]]) == 14
    assert gram_determinant([[Fraction(1, 2), 0], [0, 3]]) == Fraction(9, 4)
    assert gram_determinant([[1, 2], [2, 4]]) == 0
    with pytest.raises(DimensionMismatch):
        gram_determinant([[1, 2], [1]])


def test_fk_square_is_invariant_under_signed_permutations():
    rng = random.Random(5)
    for _ in range(15):
        a = random_matrix(rng)
        rows = rng.sample(range(a.rows), a.rows)
        cols = rng.sample(range(a.cols), a.cols)
        row_signs = [rng.choice((-1, 1)) for _ in rows]
        col_signs = [rng.choice((-1, 1)) for _ in cols]
        moved = IntMatrix.from_rows(
            [[row_signs[i] * col_signs[j] * a[rows[i], cols[j]] for j in range(a.cols)] for i in range(a.rows)],
            cols=a.cols,
        )
        assert fk_square(moved)[0] == fk_square(a)[0]


def test_unimodular_changes_keep_smith_and_nonsingular_fk():
    rng = random.Random(9)
    for _ in range(15):
        a = random_matrix(rng)
        u, _ = random_unimodular(rng, a.rows)
        v, _ = random_unimodular(rng, a.cols)
        assert smith_invariants(u @ a @ v) == smith_invariants(a)
    checked = 0
    while checked < 10:
        n = rng.randint(1, 4)
        a = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)], cols=n)
        det = integer_determinant(a)
        if det == 0:
            continue
        u, u_inv = random_unimodular(rng, n)
        # |det| is the Fuglede-Kadison determinant of a nonsingular square map
        assert fk_square(u @ a @ u_inv)[0] == det * det == fk_square(a)[0]
        checked += 1


def test_kernel_lattice_is_saturated_on_random_matrices():
    rng = random.Random(3)
    for _ in range(25):
        a = random_matrix(rng)
        k = kernel_lattice(a)
        assert k.rows == a.cols
        assert k.cols == a.cols - rank(a)
        assert (a @ k).is_zero()
        # saturated: Z^n / span(k) is free
        assert smith_invariants(k) == (1,) * k.cols
    # generators (2, -2) of the kernel of [2 2] saturate to (1, -1)
    assert kernel_lattice(IntMatrix.from_rows([[2, 2]])) == IntMatrix.from_rows([[1], [-1]])
