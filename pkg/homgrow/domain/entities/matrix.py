from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatch

RowDict = Dict[int, int]


@dataclass(frozen=True)
class IntMatrix:
    """Arbitrary-precision integer matrix, row-major.

    Empty shapes (0 x n, n x 0) are legal and stand for zero modules and
    empty maps.
    """
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("IntMatrix shape must be non-negative")
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"IntMatrix expects {self.rows * self.cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    # ---- constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        n_rows = len(rows)
        if n_rows == 0:
            return cls(0, cols or 0, ())
        width = len(rows[0]) if cols is None else cols
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("rows of unequal length")
        return cls(n_rows, width, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        if any(len(c) != rows for c in columns):
            raise DimensionMismatch("columns of unequal length")
        return cls(rows, len(columns), tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def from_row_dicts(cls, rows: int, cols: int, row_dicts: Sequence[Mapping[int, int]]) -> "IntMatrix":
        data = [0] * (rows * cols)
        for i, rd in enumerate(row_dicts):
            base = i * cols
            for j, v in rd.items():
                data[base + j] = v
        return cls(rows, cols, tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        data = [0] * (n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(n, n, tuple(data))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        r = len(values) if rows is None else rows
        c = len(values) if cols is None else cols
        data = [0] * (r * c)
        for k, v in enumerate(values):
            data[k * c + k] = v
        return cls(r, c, tuple(data))

    # ---- access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @cached_property
    def row_dicts(self) -> Tuple[RowDict, ...]:
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append({j: v for j in range(self.cols) if (v := self.entries[base + j])})
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # ---- algebra

    @cached_property
    def T(self) -> "IntMatrix":
        data = [0] * len(self.entries)
        for i, rd in enumerate(self.row_dicts):
            for j, v in rd.items():
                data[j * self.rows + i] = v
        return IntMatrix(self.cols, self.rows, tuple(data))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        right = other.row_dicts
        out_rows: List[RowDict] = []
        for rd in self.row_dicts:
            acc: RowDict = {}
            for k, a in rd.items():
                for j, b in right[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out_rows.append(acc)
        return IntMatrix.from_row_dicts(self.rows, other.cols, out_rows)

    def apply(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return [sum(v * vector[j] for j, v in rd.items()) for rd in self.row_dicts]

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} != {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def power(self, k: int) -> "IntMatrix":
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        result = IntMatrix.identity(self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        r, c = self.rows * other.rows, self.cols * other.cols
        data = [0] * (r * c)
        for i, rd in enumerate(self.row_dicts):
            for j, a in rd.items():
                for k, od in enumerate(other.row_dicts):
                    base = (i * other.rows + k) * c + j * other.cols
                    for l, b in od.items():
                        data[base + l] = a * b
        return IntMatrix(r, c, tuple(data))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            len(row_idx), len(col_idx),
            tuple(self.entries[i * self.cols + j] for i in row_idx for j in col_idx),
        )

    def select_columns(self, col_idx: Sequence[int]) -> "IntMatrix":
        return self.submatrix(range(self.rows), col_idx)

    def select_rows(self, row_idx: Sequence[int]) -> "IntMatrix":
        return self.submatrix(row_idx, range(self.cols))

    @staticmethod
    def hstack(blocks: Sequence["IntMatrix"], rows: Optional[int] = None) -> "IntMatrix":
        if not blocks:
            return IntMatrix.zeros(rows or 0, 0)
        n = blocks[0].rows
        if any(b.rows != n for b in blocks):
            raise DimensionMismatch("hstack blocks differ in row count")
        total = sum(b.cols for b in blocks)
        data: List[int] = []
        for i in range(n):
            for b in blocks:
                data.extend(b.row(i))
        return IntMatrix(n, total, tuple(data))

    @staticmethod
    def vstack(blocks: Sequence["IntMatrix"], cols: Optional[int] = None) -> "IntMatrix":
        if not blocks:
            return IntMatrix.zeros(0, cols or 0)
        n = blocks[0].cols
        if any(b.cols != n for b in blocks):
            raise DimensionMismatch("vstack blocks differ in column count")
        return IntMatrix(sum(b.rows for b in blocks), n, tuple(x for b in blocks for x in b.entries))

    @staticmethod
    def block_diag(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        data = [0] * (r * c)
        r0 = c0 = 0
        for b in blocks:
            for i, rd in enumerate(b.row_dicts):
                for j, v in rd.items():
                    data[(r0 + i) * c + c0 + j] = v
            r0 += b.rows
            c0 += b.cols
        return IntMatrix(r, c, tuple(data))

    def to_numpy(self) -> np.ndarray:
        """Float copy for numerical oracles only."""
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    def __str__(self) -> str:
        return str(self.to_rows())


@dataclass(frozen=True)
class SmithForm:
    """U * A * V = diag(d_1, ..., d_k, 0, ...), d_1 | ... | d_k, all d_j >= 1.

    Transforms are present only when requested; ``left_inverse`` and
    ``right_inverse`` hold U^-1 and V^-1.
    """
    invariant_factors: Tuple[int, ...]
    shape: Tuple[int, int]
    left_transform: Optional[IntMatrix] = None
    right_transform: Optional[IntMatrix] = None
    left_inverse: Optional[IntMatrix] = None
    right_inverse: Optional[IntMatrix] = None

    def __post_init__(self) -> None:
        factors = tuple(int(d) for d in self.invariant_factors)
        if any(d < 1 for d in factors):
            raise ValueError("invariant factors must be positive")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors not chained: {a} does not divide {b}")
        object.__setattr__(self, "invariant_factors", factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    def diagonal_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.invariant_factors, *self.shape)


def vectors_to_columns(vectors: Iterable[Sequence[int]], dim: int) -> IntMatrix:
    return IntMatrix.from_columns([list(v) for v in vectors], dim)


__all__ = ["IntMatrix", "SmithForm", "RowDict", "vectors_to_columns"]
