from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from .chain import IntChainComplex
from .matrix import IntMatrix
from ..errors import DimensionMismatch, InvalidComplex
from ..value_objects import QuotientSpec

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class LaurentPoly:
    """Element of Z[Z^m] = Z[x_1^+-1, ..., x_m^+-1]; terms sorted, no zero coefficients."""
    m: int
    terms: Tuple[Tuple[Exponent, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[Exponent, int] = {}
        for exp, coef in self.terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.m:
                raise DimensionMismatch(f"exponent {exp} does not have {self.m} entries")
            merged[exp] = merged.get(exp, 0) + int(coef)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in merged.items() if c)))

    # ---- constructors

    @classmethod
    def from_dict(cls, m: int, mapping: Mapping[Exponent, int]) -> "LaurentPoly":
        return cls(m, tuple(mapping.items()))

    @classmethod
    def zero(cls, m: int) -> "LaurentPoly":
        return cls(m, ())

    @classmethod
    def constant(cls, m: int, c: int) -> "LaurentPoly":
        return cls(m, (((0,) * m, c),))

    @classmethod
    def monomial(cls, m: int, exp: Sequence[int], coef: int = 1) -> "LaurentPoly":
        return cls(m, ((tuple(exp), coef),))

    @classmethod
    def variable(cls, m: int, j: int) -> "LaurentPoly":
        exp = [0] * m
        exp[j] = 1
        return cls.monomial(m, exp)

    # ---- algebra

    def as_dict(self) -> Dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "LaurentPoly") -> None:
        if self.m != other.m:
            raise DimensionMismatch(f"Laurent polynomials in {self.m} and {other.m} variables")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly(self.m, self.terms + other.terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.m, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: Dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly.from_dict(self.m, out)

    def scale(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.m, tuple((e, k * c) for e, c in self.terms))

    def augment(self) -> int:
        """Image under x_j -> 1."""
        return sum(c for _, c in self.terms)

    def l1_norm(self) -> int:
        return sum(abs(c) for _, c in self.terms)

    def reduce_mod(self, moduli: Sequence[int]) -> Dict[Exponent, int]:
        """Image in Z[prod Z/N_j], exponents taken in 0..N_j-1."""
        if len(moduli) != self.m:
            raise DimensionMismatch("moduli do not match the variable count")
        out: Dict[Exponent, int] = {}
        for exp, c in self.terms:
            e = tuple(x % n for x, n in zip(exp, moduli))
            out[e] = out.get(e, 0) + c
        return {e: c for e, c in out.items() if c}

    def embed(self, m_new: int, offset: int) -> "LaurentPoly":
        """Same polynomial in m_new variables, occupying positions offset..offset+m-1."""
        if offset < 0 or offset + self.m > m_new:
            raise DimensionMismatch("embedding does not fit")
        terms = []
        for exp, c in self.terms:
            full = [0] * m_new
            full[offset:offset + self.m] = exp
            terms.append((tuple(full), c))
        return LaurentPoly(m_new, tuple(terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = ["t"] if self.m == 1 else [f"x{j + 1}" for j in range(self.m)]
        parts = []
        for exp, c in self.terms:
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class LaurentMatrix:
    rows: int
    cols: int
    m: int
    entries: Tuple[LaurentPoly, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("LaurentMatrix entry count does not match its shape")
        if any(p.m != self.m for p in self.entries):
            raise DimensionMismatch("LaurentMatrix entries use different variable counts")

    @classmethod
    def from_rows(cls, m: int, rows: Sequence[Sequence[LaurentPoly]], cols: int = 0) -> "LaurentMatrix":
        width = len(rows[0]) if rows else cols
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("rows of unequal length")
        return cls(len(rows), width, m, tuple(p for r in rows for p in r))

    @classmethod
    def zeros(cls, m: int, rows: int, cols: int) -> "LaurentMatrix":
        return cls(rows, cols, m, (LaurentPoly.zero(m),) * (rows * cols))

    @classmethod
    def identity(cls, m: int, n: int) -> "LaurentMatrix":
        one, zero = LaurentPoly.constant(m, 1), LaurentPoly.zero(m)
        return cls(n, n, m, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def from_int(cls, m: int, a: IntMatrix) -> "LaurentMatrix":
        return cls(a.rows, a.cols, m, tuple(LaurentPoly.constant(m, x) for x in a.entries))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: Tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows or self.m != other.m:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = LaurentPoly.zero(self.m)
                for k in range(self.cols):
                    a = self[i, k]
                    if a.is_zero():
                        continue
                    b = other[k, j]
                    if not b.is_zero():
                        acc = acc + a * b
                out.append(acc)
        return LaurentMatrix(self.rows, other.cols, self.m, tuple(out))

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix(self.rows, self.cols, self.m, tuple(-p for p in self.entries))

    def embed(self, m_new: int, offset: int) -> "LaurentMatrix":
        return LaurentMatrix(self.rows, self.cols, m_new, tuple(p.embed(m_new, offset) for p in self.entries))

    def kron(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.m != other.m:
            raise DimensionMismatch("kron of Laurent matrices in different rings")
        r, c = self.rows * other.rows, self.cols * other.cols
        out: List[LaurentPoly] = [LaurentPoly.zero(self.m)] * (r * c)
        for i in range(self.rows):
            for j in range(self.cols):
                a = self[i, j]
                if a.is_zero():
                    continue
                for k in range(other.rows):
                    for l in range(other.cols):
                        b = other[k, l]
                        if not b.is_zero():
                            out[(i * other.rows + k) * c + j * other.cols + l] = a * b
        return LaurentMatrix(r, c, self.m, tuple(out))

    def augment(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(p.augment() for p in self.entries))


@dataclass(frozen=True)
class LaurentChainComplex:
    """Finite based free chain complex over Z[Z^m]; ``differentials[k]`` is c_{k+1}."""
    m: int
    dims: Tuple[int, ...]
    differentials: Tuple[LaurentMatrix, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        diffs = tuple(self.differentials)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", diffs)
        if self.m < 0 or any(d < 0 for d in dims):
            raise InvalidComplex("variable count and ranks must be non-negative")
        if len(diffs) != max(len(dims) - 1, 0):
            raise InvalidComplex("wrong number of differentials for the given ranks")
        for k, c in enumerate(diffs):
            if c.m != self.m:
                raise InvalidComplex(f"c_{k + 1} lives over {c.m} variables, expected {self.m}", degree=k + 1)
            if c.shape != (dims[k], dims[k + 1]):
                raise InvalidComplex(
                    f"c_{k + 1} has shape {c.shape}, expected {(dims[k], dims[k + 1])}", degree=k + 1
                )
        for k in range(len(diffs) - 1):
            if not (diffs[k] @ diffs[k + 1]).is_zero():
                raise InvalidComplex(f"c_{k + 1} c_{k + 2} != 0 in the group ring", degree=k + 1)

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def degrees(self) -> range:
        return range(len(self.dims))

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def differential(self, n: int) -> LaurentMatrix:
        if 1 <= n <= self.top_degree:
            return self.differentials[n - 1]
        return LaurentMatrix.zeros(self.m, self.dim(n - 1), self.dim(n))


@dataclass(frozen=True)
class QuotientComplex:
    """C[i] = Z[G/G_i] (x)_{ZG} C with deck actions and augmentation maps.

    ``actions[n][j]`` is the permutation matrix of generator x_j on C[i]_n;
    ``augmentation[n]`` is pr_n: C[i]_n -> Z (x)_{ZG} C_n.
    """
    quotient: QuotientSpec
    complex: IntChainComplex
    actions: Tuple[Tuple[IntMatrix, ...], ...]
    augmentation: Tuple[IntMatrix, ...]
    coinvariant: IntChainComplex

    @property
    def index(self) -> int:
        return self.quotient.index


__all__ = ["Exponent", "LaurentPoly", "LaurentMatrix", "LaurentChainComplex", "QuotientComplex"]
