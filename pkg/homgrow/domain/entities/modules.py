from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .laurent import LaurentMatrix
from .matrix import IntMatrix
from ..errors import DimensionMismatch


@dataclass(frozen=True)
class ModuleWithAction:
    """M = coker(presentation) with commuting automorphisms.

    ``actions[j]`` acts on the presentation generators (columns of Z^g) and is
    expected to descend to M with order dividing ``orders[j]``. The
    lattice-level checks live in the group_ring service.
    """
    presentation: IntMatrix
    actions: Tuple[IntMatrix, ...]
    orders: Tuple[int, ...]

    def __post_init__(self) -> None:
        actions = tuple(self.actions)
        orders = tuple(int(n) for n in self.orders)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "orders", orders)
        g = self.presentation.rows
        if len(actions) != len(orders):
            raise DimensionMismatch("one order per acting generator is required")
        if any(n < 1 for n in orders):
            raise ValueError("action orders must be >= 1")
        for a in actions:
            if a.shape != (g, g):
                raise DimensionMismatch(f"action of shape {a.shape} on {g} generators")

    @property
    def generators(self) -> int:
        return self.presentation.rows

    @property
    def group_order(self) -> int:
        out = 1
        for n in self.orders:
            out *= n
        return out

    @classmethod
    def trivial_action(cls, presentation: IntMatrix, orders: Tuple[int, ...]) -> "ModuleWithAction":
        eye = IntMatrix.identity(presentation.rows)
        return cls(presentation, tuple(eye for _ in orders), orders)

    def direct_sum(self, other: "ModuleWithAction") -> "ModuleWithAction":
        if self.orders != other.orders:
            raise DimensionMismatch("direct sum needs the same acting group")
        return ModuleWithAction(
            IntMatrix.block_diag([self.presentation, other.presentation]),
            tuple(IntMatrix.block_diag([a, b]) for a, b in zip(self.actions, other.actions)),
            self.orders,
        )


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group Z/d_1 + ... + Z/d_m in chained form (d_1 | ... | d_m, d_j >= 2)."""
    factors: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in factors):
            raise ValueError("FinAbGroup factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"FinAbGroup factors not chained: {a} does not divide {b}")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def d(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " + ".join(f"Z/{d}" for d in self.factors)


@dataclass(frozen=True)
class Resolution:
    """Free Z[G]-resolution F_* of Z; ``differentials[n - 1]`` is F_n -> F_{n-1} over Z[Z^d(G)]."""
    group: FinAbGroup
    length: int
    ranks: Tuple[int, ...]
    compositions: Tuple[Tuple[Tuple[int, ...], ...], ...]
    differentials: Tuple[LaurentMatrix, ...]


__all__ = ["ModuleWithAction", "FinAbGroup", "Resolution"]
