from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

from .matrix import IntMatrix
from ..errors import DegreeOutOfRange, InvalidComplex
from ..value_objects import SquaredLog


@dataclass(frozen=True)
class IntChainComplex:
    """Finite based free Z-chain complex C_0 <- C_1 <- ... <- C_top.

    ``differentials[k]`` is c_{k+1}: C_{k+1} -> C_k, shape dims[k] x dims[k+1].
    c_n c_{n+1} = 0 is checked at construction.
    """
    dims: Tuple[int, ...]
    differentials: Tuple[IntMatrix, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        diffs = tuple(self.differentials)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", diffs)
        if any(d < 0 for d in dims):
            raise InvalidComplex("chain ranks must be non-negative")
        if len(diffs) != max(len(dims) - 1, 0):
            raise InvalidComplex(
                f"{len(dims)} chain modules need {max(len(dims) - 1, 0)} differentials, got {len(diffs)}"
            )
        for k, c in enumerate(diffs):
            if c.shape != (dims[k], dims[k + 1]):
                raise InvalidComplex(
                    f"c_{k + 1} has shape {c.shape}, expected {(dims[k], dims[k + 1])}", degree=k + 1
                )
        for k in range(len(diffs) - 1):
            if not (diffs[k] @ diffs[k + 1]).is_zero():
                raise InvalidComplex(f"c_{k + 1} c_{k + 2} != 0", degree=k + 1)

    @classmethod
    def empty(cls) -> "IntChainComplex":
        return cls((), ())

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def degrees(self) -> range:
        return range(len(self.dims))

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def check_degree(self, n: int) -> None:
        if not 0 <= n <= self.top_degree:
            raise DegreeOutOfRange(f"degree {n} outside 0..{self.top_degree}")

    def differential(self, n: int) -> IntMatrix:
        """c_n: C_n -> C_{n-1}; zero maps at both ends of the complex."""
        if 1 <= n <= self.top_degree:
            return self.differentials[n - 1]
        return IntMatrix.zeros(self.dim(n - 1), self.dim(n))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in enumerate(self.dims))


@dataclass(frozen=True)
class DegreeHomology:
    degree: int
    betti_q: int
    invariant_factors: Tuple[int, ...]   # torsion part, chained, all >= 2
    d_hn: int
    log_tors: float
    betti_mod_p: Dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors


@dataclass(frozen=True)
class HomologySummary:
    degrees: Tuple[DegreeHomology, ...]

    def __getitem__(self, n: int) -> DegreeHomology:
        return self.degrees[n]

    def __iter__(self) -> Iterator[DegreeHomology]:
        return iter(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class AlphaData:
    """Per-degree det(alpha_n), carried as exact squares."""
    per_degree: Tuple[SquaredLog, ...]

    def log_det_alpha(self, n: int) -> float:
        return self.per_degree[n].log_value

    def square_exact(self, n: int):
        return self.per_degree[n].square_exact

    def alternating(self) -> SquaredLog:
        """exp of sum_n (-1)^n ln det alpha_n."""
        total = SquaredLog.one()
        for n, value in enumerate(self.per_degree):
            total = total * value.power((-1) ** n)
        return total


__all__ = ["IntChainComplex", "DegreeHomology", "HomologySummary", "AlphaData"]
