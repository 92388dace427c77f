from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple, Union

Rational = Union[int, Fraction]


def _ln_positive(q: Fraction) -> float:
    # math.log accepts arbitrarily large ints; split to avoid float overflow
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class SquaredLog:
    """A positive real x carried exactly through x**2 (a rational).

    ``log_value`` is ln x = 1/2 ln(square_exact). Determinants of integer
    maps, alpha-determinants and exponentiated torsions all fit this shape.
    """
    square_exact: Fraction
    log_value: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        sq = Fraction(self.square_exact)
        if sq <= 0:
            raise ValueError("SquaredLog needs a positive square")
        object.__setattr__(self, "square_exact", sq)
        object.__setattr__(self, "log_value", 0.5 * _ln_positive(sq))

    @classmethod
    def one(cls) -> "SquaredLog":
        return cls(Fraction(1))

    @classmethod
    def of(cls, value: Rational) -> "SquaredLog":
        """The positive rational |value| itself (square = value**2)."""
        v = Fraction(value)
        if v == 0:
            raise ValueError("SquaredLog.of needs a nonzero value")
        return cls(v * v)

    def __mul__(self, other: "SquaredLog") -> "SquaredLog":
        return SquaredLog(self.square_exact * other.square_exact)

    def __truediv__(self, other: "SquaredLog") -> "SquaredLog":
        return SquaredLog(self.square_exact / other.square_exact)

    def power(self, k: int) -> "SquaredLog":
        return SquaredLog(self.square_exact ** k)


@dataclass(frozen=True)
class FKDet(SquaredLog):
    """Fuglede-Kadison determinant over the trivial group of an integer map."""


@dataclass(frozen=True)
class QuotientSpec:
    """Moduli (N_1, ..., N_m) of the subgroup N_1 Z x ... x N_m Z of Z^m."""
    moduli: Tuple[int, ...]

    def __post_init__(self) -> None:
        mods = tuple(int(n) for n in self.moduli)
        if any(n < 1 for n in mods):
            raise ValueError(f"QuotientSpec moduli must be >= 1, got {mods}")
        object.__setattr__(self, "moduli", mods)

    @property
    def m(self) -> int:
        return len(self.moduli)

    @property
    def index(self) -> int:
        return math.prod(self.moduli)

    def divides(self, other: "QuotientSpec") -> bool:
        """True if this level is a further quotient of ``other`` (N' | N)."""
        return self.m == other.m and all(b % a == 0 for a, b in zip(self.moduli, other.moduli))

    def __str__(self) -> str:
        return "(" + ",".join(str(n) for n in self.moduli) + ")"


@dataclass(frozen=True)
class GroupProfile:
    """Homological profile of a group H: b1 over Q, b1 over F_p, d(H_1(H)), d(H)."""
    b1_q: int
    b1_fp: int
    d_h1: int
    d_h: int

    def __post_init__(self) -> None:
        values = (self.b1_q, self.b1_fp, self.d_h1, self.d_h)
        if any(v < 0 for v in values):
            raise ValueError("GroupProfile entries must be non-negative")

    def is_consistent(self) -> bool:
        return self.b1_q <= self.b1_fp <= self.d_h1 <= self.d_h


__all__ = ["Rational", "SquaredLog", "FKDet", "QuotientSpec", "GroupProfile"]
