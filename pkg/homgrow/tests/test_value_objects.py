import math
from fractions import Fraction

import pytest

from homgrow.domain.entities.matrix import IntMatrix
from homgrow.domain.errors import DimensionMismatch
from homgrow.domain.value_objects import FKDet, QuotientSpec, SquaredLog


def test_squared_log_keeps_exact_square():
    x = SquaredLog(Fraction(9, 4))
    assert x.log_value == pytest.approx(math.log(1.5))
    assert SquaredLog.of(-3).square_exact == 9
    assert (x * SquaredLog.of(2)).square_exact == 9
    assert (x / x) == SquaredLog.one()
    assert x.power(-1).log_value == pytest.approx(-math.log(1.5))
    with pytest.raises(ValueError):
        SquaredLog(Fraction(0))
    with pytest.raises(ValueError):
        SquaredLog.of(0)


def test_squared_log_survives_huge_values():
    big = SquaredLog(Fraction(10 ** 800))
    assert big.log_value == pytest.approx(400 * math.log(10))
    assert FKDet(Fraction(4)).log_value == pytest.approx(math.log(2))


def test_quotient_spec_str_and_index():
    q = QuotientSpec((2, 3, 1))
    assert str(q) == "(2,3,1)"
    assert q.index == 6 and q.m == 3


def test_int_matrix_shape_checks():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        IntMatrix.from_rows([[1, 2], [3]])
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert a.T.to_rows() == [[1, 3], [2, 4]]
    assert (a @ IntMatrix.identity(2)) == a
    assert a.power(0) == IntMatrix.identity(2)
    assert IntMatrix.zeros(0, 3).shape == (0, 3)
