"""
Seeded random corpora for the verification suites and the property tests.

Every generator takes a ``random.Random`` so a fixed seed reproduces the
same instances.
"""
from __future__ import annotations

import random
from typing import FrozenSet, List, Optional, Sequence, Tuple

from ..entities.chain import IntChainComplex
from ..entities.laurent import LaurentChainComplex, LaurentPoly
from ..entities.matrix import IntMatrix
from ..entities.modules import FinAbGroup, ModuleWithAction
from ..value_objects import GroupProfile, QuotientSpec
from .chain_complex import direct_sum, shift
from .group_ring import (
    circle_complex,
    laurent_tensor,
    mapping_torus_complex,
    product_with_circle,
    sphere_complex,
    torus_complex,
)

SMALL_GROUPS: Tuple[Tuple[int, ...], ...] = (
    (2,), (3,), (4,), (5,), (6,), (7,), (8,), (2, 2), (2, 4), (3, 3),
    (2, 6), (2, 2, 2), (4, 4), (2, 8), (2, 2, 4), (2, 2, 2, 2), (16,),
)


# ---- integer matrices

def random_matrix(
    rng: random.Random, max_rows: int = 6, max_cols: int = 6, bound: int = 5
) -> IntMatrix:
    """Random integer matrix; about a third are forced to drop rank."""
    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max_cols)
    if rng.random() < 1 / 3 and min(rows, cols) > 1:
        inner = rng.randint(1, min(rows, cols) - 1)
        left = _entries(rng, rows, inner, 2)
        right = _entries(rng, inner, cols, 2)
        return left @ right
    return _entries(rng, rows, cols, bound)


def _entries(rng: random.Random, rows: int, cols: int, bound: int) -> IntMatrix:
    return IntMatrix(rows, cols, tuple(rng.randint(-bound, bound) for _ in range(rows * cols)))


def random_unimodular(rng: random.Random, n: int, steps: Optional[int] = None) -> Tuple[IntMatrix, IntMatrix]:
    """(U, U^-1) built from elementary row operations with unit multipliers."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    u_inv = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        return IntMatrix.from_rows(u, cols=n), IntMatrix.from_rows(u_inv, cols=n)
    for _ in range(n if steps is None else steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice((-1, 1))
        # U <- (I + k e_ij) U ; U^-1 <- U^-1 (I - k e_ij)
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
        for row in u_inv:
            row[j] -= k * row[i]
    return IntMatrix.from_rows(u, cols=n), IntMatrix.from_rows(u_inv, cols=n)


# ---- chain complexes

def _two_term(rng: random.Random, bound: int) -> IntChainComplex:
    b = rng.randint(1, 2)
    a = rng.randint(1, 2)
    block = _entries(rng, b, a, bound)
    return IntChainComplex((b, a), (block,))


def random_chain_complex(
    rng: random.Random, max_dim: int = 8, max_top: int = 3, bound: int = 5
) -> IntChainComplex:
    """Direct sum of shifted elementary pieces, conjugated by random unimodular bases."""
    top = rng.randint(1, max_top)
    complex_ = IntChainComplex((0,) * (top + 1), tuple(IntMatrix.zeros(0, 0) for _ in range(top)))
    for _ in range(rng.randint(1, 2 * top + 1)):
        if rng.random() < 0.3:
            degree = rng.randint(0, top)
            piece = shift(IntChainComplex((1,), ()), degree)
        else:
            degree = rng.randint(1, top)
            piece = shift(_two_term(rng, bound), degree - 1)
        candidate = direct_sum(complex_, piece)
        if max(candidate.dims) <= max_dim:
            complex_ = candidate
    return conjugate(rng, complex_)


def conjugate(rng: random.Random, c: IntChainComplex) -> IntChainComplex:
    """c_n -> U_{n-1} c_n U_n^-1 for random unimodular U_n."""
    bases = [random_unimodular(rng, d, steps=d) for d in c.dims]
    diffs = []
    for n in range(1, len(c.dims)):
        u_low, _ = bases[n - 1]
        _, u_inv = bases[n]
        diffs.append(u_low @ c.differential(n) @ u_inv)
    return IntChainComplex(c.dims, tuple(diffs))


# ---- finite abelian groups and modules

def random_finite_abelian(rng: random.Random, max_order: int = 200) -> Tuple[int, ...]:
    """Moduli (not necessarily chained) of a random finite abelian group."""
    while True:
        moduli = tuple(rng.randint(2, 12) for _ in range(rng.randint(1, 4)))
        order = 1
        for n in moduli:
            order *= n
        if order <= max_order:
            return moduli


def d_by_exhaustive_search(moduli: Sequence[int], max_n: int = 4) -> Optional[int]:
    """Least n <= max_n such that some n elements generate prod Z/N_j; None if none do.

    Walks the subgroups reachable with k generators, k = 0, 1, ..., so every
    n-element generating set is covered without enumerating tuples.
    """
    moduli = tuple(moduli)
    elements: List[Tuple[int, ...]] = [()]
    for n in moduli:
        elements = [e + (x,) for e in elements for x in range(n)]
    size = len(elements)
    level = {frozenset({tuple(0 for _ in moduli)})}
    for n in range(max_n + 1):
        if any(len(s) == size for s in level):
            return n
        level = {_extend(s, x, moduli) for s in level for x in elements if x not in s}
    return None


def _extend(subgroup: FrozenSet[Tuple[int, ...]], x: Tuple[int, ...], moduli: Tuple[int, ...]) -> FrozenSet[Tuple[int, ...]]:
    # S + <x> as the union of the cosets S + kx
    out = set(subgroup)
    step = x
    while step not in subgroup:
        out.update(tuple((a + b) % n for a, b, n in zip(s, step, moduli)) for s in subgroup)
        step = tuple((a + b) % n for a, b, n in zip(step, x, moduli))
    return frozenset(out)


def random_group(rng: random.Random, max_order: int = 16) -> FinAbGroup:
    choices = [g for g in SMALL_GROUPS if _order(g) <= max_order]
    return FinAbGroup(rng.choice(choices))


def _order(factors: Sequence[int]) -> int:
    out = 1
    for d in factors:
        out *= d
    return out


def random_module(rng: random.Random, group: FinAbGroup, max_d: int = 3) -> ModuleWithAction:
    """Cyclic summands Z or Z/k, each generator acting by +-1 (sign only for even order)."""
    g = rng.randint(1, max_d)
    moduli = [rng.choice((0, 2, 3, 4, 6)) for _ in range(g)]
    presentation = IntMatrix.diagonal(moduli, g, g)
    actions = []
    for d in group.factors:
        signs = [rng.choice((1, -1)) if d % 2 == 0 else 1 for _ in range(g)]
        actions.append(IntMatrix.diagonal(signs, g, g))
    return ModuleWithAction(presentation, tuple(actions), group.factors)


def _cyclic(order: int, units: Sequence[int], group: Tuple[int, ...]) -> ModuleWithAction:
    return ModuleWithAction(
        IntMatrix.diagonal([order]),
        tuple(IntMatrix.diagonal([u]) for u in units),
        group,
    )


def _unipotent_pair(first: bool, second: bool) -> ModuleWithAction:
    jordan = IntMatrix.from_rows([[1, 1], [0, 1]])
    eye = IntMatrix.identity(2)
    return ModuleWithAction(
        IntMatrix.diagonal([2, 2]),
        (jordan if first else eye, jordan if second else eye),
        (2, 2),
    )


def nilpotent_modules() -> List[Tuple[ModuleWithAction, int]]:
    """Small nilpotent modules over Z/2, Z/4 and Z/2 + Z/2 with their filtration lengths."""
    jordan = IntMatrix.from_rows([[1, 1], [0, 1]])
    return [
        (_cyclic(4, (3,), (2,)), 2),
        (_cyclic(8, (5,), (2,)), 2),
        (_cyclic(8, (7,), (2,)), 3),
        (_cyclic(6, (1,), (2,)), 1),
        (ModuleWithAction(IntMatrix.diagonal([2, 2]), (jordan,), (2,)), 2),
        (_cyclic(4, (3,), (4,)), 2),
        (_cyclic(8, (3,), (4,)), 3),
        (_cyclic(16, (5,), (4,)), 2),
        (ModuleWithAction(IntMatrix.diagonal([2, 2]), (jordan,), (4,)), 2),
        (_unipotent_pair(True, False), 2),
        (_unipotent_pair(True, True), 2),
        (_cyclic(4, (3, 3), (2, 2)), 2),
        (_cyclic(4, (3, 1), (2, 2)), 2),
        (ModuleWithAction(IntMatrix.zeros(1, 0), (IntMatrix.identity(1),), (2,)), 1),
    ]


def random_nilpotent_module(rng: random.Random) -> Tuple[ModuleWithAction, int]:
    """A nilpotent module, sometimes a direct sum of two from the same group."""
    base = nilpotent_modules()
    module, length = rng.choice(base)
    if rng.random() < 0.5:
        partners = [(m, l) for m, l in base if m.orders == module.orders]
        other, other_length = rng.choice(partners)
        return module.direct_sum(other), max(length, other_length)
    return module, length


def nilpotent_tower_cases() -> List[Tuple[str, LaurentChainComplex, QuotientSpec]]:
    """Free Z[G]-complexes over G in {Z/2, Z/4, Z/2 + Z/2} whose homology is nilpotent.

    The mapping tori act nontrivially: over Z/2, [[3]] gives H_0 = Z/8 with
    t acting as 3 (filtration length 3) and [[7]] gives Z/16 + Z/3 with t
    acting as 7 (length 4).
    """
    circle = circle_complex()
    torus = torus_complex(2)
    s1_cross = product_with_circle(sphere_complex(2))
    times_three = mapping_torus_complex(IntMatrix.from_rows([[3]]))
    times_seven = mapping_torus_complex(IntMatrix.from_rows([[7]]))
    return [
        ("circle", circle, QuotientSpec((2,))),
        ("circle", circle, QuotientSpec((4,))),
        ("s1_cross", s1_cross, QuotientSpec((2,))),
        ("s1_cross", s1_cross, QuotientSpec((4,))),
        ("torus2", torus, QuotientSpec((2, 2))),
        ("torus2", torus, QuotientSpec((2, 1))),
        ("torus2", torus, QuotientSpec((4, 1))),
        ("mapping_torus:[[3]]", times_three, QuotientSpec((2,))),
        ("mapping_torus:[[7]]", times_seven, QuotientSpec((2,))),
        ("s1 x mapping_torus:[[3]]", laurent_tensor(sphere_complex(1), times_three), QuotientSpec((2,))),
    ]


# ---- Laurent data and profiles

def random_laurent_poly(rng: random.Random, m: int, terms: int = 3, spread: int = 3, bound: int = 3) -> LaurentPoly:
    data = []
    for _ in range(rng.randint(0, terms)):
        exp = tuple(rng.randint(-spread, spread) for _ in range(m))
        data.append((exp, rng.randint(-bound, bound)))
    return LaurentPoly(m, tuple(data))


def random_hyperbolic_matrix(rng: random.Random) -> IntMatrix:
    """2x2 integer matrix with det +-1 and |trace| > 2, as a word in the elementary shears."""
    upper = IntMatrix.from_rows([[1, 1], [0, 1]])
    lower = IntMatrix.from_rows([[1, 0], [1, 1]])
    while True:
        word = IntMatrix.identity(2)
        for _ in range(rng.randint(2, 4)):
            word = word @ upper.power(rng.randint(1, 2)) @ lower.power(rng.randint(1, 2))
        trace = word[0, 0] + word[1, 1]
        if abs(trace) > 2 and max(abs(x) for x in word.entries) <= 40:
            return word


def random_profile(rng: random.Random) -> GroupProfile:
    values = sorted(rng.randint(0, 4) for _ in range(4))
    return GroupProfile(*values)


def random_moduli(rng: random.Random, m: int, max_modulus: int = 4) -> QuotientSpec:
    return QuotientSpec(tuple(rng.randint(1, max_modulus) for _ in range(m)))


__all__ = [
    "SMALL_GROUPS",
    "random_matrix", "random_unimodular", "random_chain_complex", "conjugate",
    "random_finite_abelian", "d_by_exhaustive_search",
    "random_group", "random_module", "nilpotent_modules", "random_nilpotent_module",
    "nilpotent_tower_cases",
    "random_laurent_poly", "random_hyperbolic_matrix", "random_profile", "random_moduli",
]
