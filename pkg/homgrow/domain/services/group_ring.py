"""
Chain complexes over Z[Z^m]: base change to finite quotients through the
regular representation, deck actions, homology with action, operator-norm
bounds and the example library.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import List, Sequence, Tuple

from ..entities.chain import IntChainComplex
from ..entities.laurent import Exponent, LaurentChainComplex, LaurentMatrix, LaurentPoly, QuotientComplex
from ..entities.matrix import IntMatrix
from ..entities.modules import ModuleWithAction
from ..errors import DimensionMismatch, IncompatibleAction, NonSquareMatrix, SingularMatrix, ValidationError
from ..value_objects import QuotientSpec
from .exact_linalg import express_in_basis, integer_determinant, kernel_lattice, lattice_basis
from ...utils.decorators import measure_time
from ...utils.logging_utils import get_logger

logger = get_logger("group_ring")


# ---- regular representation

@lru_cache(maxsize=64)
def group_elements(moduli: Tuple[int, ...]) -> Tuple[Exponent, ...]:
    """Elements of prod Z/N_j in lexicographic order (the basis order of Z[G/G_i])."""
    return tuple(product(*(range(n) for n in moduli)))


def element_index(g: Sequence[int], moduli: Sequence[int]) -> int:
    idx = 0
    for x, n in zip(g, moduli):
        idx = idx * n + (x % n)
    return idx


@lru_cache(maxsize=1024)
def _translation(moduli: Tuple[int, ...], e: Exponent) -> Tuple[int, ...]:
    # position of g + e for every g, in basis order
    return tuple(
        element_index(tuple(a + b for a, b in zip(g, e)), moduli) for g in group_elements(moduli)
    )


def regular_representation(poly: LaurentPoly, moduli: Sequence[int]) -> IntMatrix:
    """Matrix of multiplication by ``poly`` on Z[prod Z/N_j]; column g holds poly*g."""
    moduli = tuple(moduli)
    size = len(group_elements(moduli))
    data = [0] * (size * size)
    for e, c in poly.reduce_mod(moduli).items():
        for g, target in enumerate(_translation(moduli, e)):
            data[target * size + g] += c
    return IntMatrix(size, size, tuple(data))


def base_change_matrix(d: LaurentMatrix, moduli: Sequence[int]) -> IntMatrix:
    """Block expansion: block (k, l) is the regular representation of d[k, l]."""
    moduli = tuple(moduli)
    size = len(group_elements(moduli))
    width = d.cols * size
    data = [0] * (d.rows * size * width)
    for k in range(d.rows):
        for l in range(d.cols):
            poly = d[k, l]
            if poly.is_zero():
                continue
            for e, c in poly.reduce_mod(moduli).items():
                for g, target in enumerate(_translation(moduli, e)):
                    data[(k * size + target) * width + l * size + g] += c
    return IntMatrix(d.rows * size, width, tuple(data))


@measure_time
def base_change(c: LaurentChainComplex, q: QuotientSpec) -> QuotientComplex:
    """C[i] = Z[G/G_i] (x)_{ZG} C with deck actions and augmentations."""
    if q.m != c.m:
        raise DimensionMismatch(f"quotient {q} has {q.m} moduli for a complex over Z[Z^{c.m}]")
    size = q.index
    dims = tuple(size * d for d in c.dims)
    diffs = tuple(base_change_matrix(c.differential(n), q.moduli) for n in range(1, len(dims)))
    complex_ = IntChainComplex(dims, diffs)

    generator_reps = [regular_representation(LaurentPoly.variable(c.m, j), q.moduli) for j in range(c.m)]
    ones = IntMatrix(1, size, (1,) * size)
    actions = tuple(
        tuple(IntMatrix.identity(d).kron(rep) for rep in generator_reps) for d in c.dims
    )
    augmentation = tuple(IntMatrix.identity(d).kron(ones) for d in c.dims)
    coinvariant = IntChainComplex(
        c.dims, tuple(c.differential(n).augment() for n in range(1, len(c.dims)))
    )
    logger.debug("base change to %s: dims %s", q, dims)
    return QuotientComplex(q, complex_, actions, augmentation, coinvariant)


def coset_projection(source: QuotientSpec, target: QuotientSpec) -> Tuple[IntMatrix, IntMatrix]:
    """(pi, s): Z[G/G_N] -> Z[G/G_N'] for N' | N, and the section g' -> g'."""
    if not target.divides(source):
        raise ValidationError(f"{target} is not a further quotient of {source}")
    src = group_elements(source.moduli)
    tgt = group_elements(target.moduli)
    pi = [0] * (len(tgt) * len(src))
    for g_idx, g in enumerate(src):
        pi[element_index(g, target.moduli) * len(src) + g_idx] = 1
    section = [0] * (len(src) * len(tgt))
    for h_idx, h in enumerate(tgt):
        section[element_index(h, source.moduli) * len(tgt) + h_idx] = 1
    return IntMatrix(len(tgt), len(src), tuple(pi)), IntMatrix(len(src), len(tgt), tuple(section))


def further_quotient(qc: QuotientComplex, target: QuotientSpec) -> IntChainComplex:
    """Z[G/G_N'] (x) C[N], computed from the level-N matrices alone."""
    pi, section = coset_projection(qc.quotient, target)
    base_dims = [d // qc.index for d in qc.complex.dims]
    diffs = []
    for n in range(1, len(base_dims)):
        left = IntMatrix.identity(base_dims[n - 1]).kron(pi)
        right = IntMatrix.identity(base_dims[n]).kron(section)
        diffs.append(left @ qc.complex.differential(n) @ right)
    return IntChainComplex(tuple(d * target.index for d in base_dims), tuple(diffs))


# ---- modules with action

def _in_lattice(basis: IntMatrix, x: IntMatrix) -> bool:
    if basis.cols == 0:
        return x.is_zero()
    try:
        express_in_basis(basis, x)
    except ValidationError:
        return False
    return True


def validate_module_action(module: ModuleWithAction) -> None:
    """Actions descend to M, commute modulo relations and have the prescribed orders."""
    pres = module.presentation
    relations = lattice_basis(pres) if pres.cols else IntMatrix.zeros(pres.rows, 0)
    eye = IntMatrix.identity(module.generators)
    for j, a in enumerate(module.actions):
        if not _in_lattice(relations, a @ pres):
            raise IncompatibleAction(f"generator {j} does not preserve the relations")
        if not _in_lattice(relations, a.power(module.orders[j]) - eye):
            raise IncompatibleAction(f"generator {j} does not have order dividing {module.orders[j]}")
    for j, k in combinations(range(len(module.actions)), 2):
        a, b = module.actions[j], module.actions[k]
        if not _in_lattice(relations, a @ b - b @ a):
            raise IncompatibleAction(f"generators {j} and {k} do not commute on M")


def homology_module(qc: QuotientComplex, n: int) -> ModuleWithAction:
    """H_n(C[i]) as coker(W) over the cycle basis, with the induced deck actions."""
    cx = qc.complex
    cx.check_degree(n)
    cycles = kernel_lattice(cx.differential(n))
    presentation = express_in_basis(cycles, cx.differential(n + 1))
    actions = tuple(express_in_basis(cycles, a @ cycles) for a in qc.actions[n])
    return ModuleWithAction(presentation, actions, qc.quotient.moduli)


def homology_with_action(c: LaurentChainComplex, q: QuotientSpec, n: int) -> ModuleWithAction:
    module = homology_module(base_change(c, q), n)
    validate_module_action(module)
    return module


# ---- norms

def operator_norm_bound(d: LaurentMatrix) -> float:
    """Sum of coefficient l1 norms: bounds the operator norm of every base change of d."""
    return float(sum(p.l1_norm() for p in d.entries))


# ---- example library

def point_complex(m: int = 1) -> LaurentChainComplex:
    return LaurentChainComplex(m, (1,), ())


def circle_complex() -> LaurentChainComplex:
    """0 -> ZG --(t-1)--> ZG -> 0 over Z[Z]."""
    t_minus_1 = LaurentPoly.variable(1, 0) - LaurentPoly.constant(1, 1)
    return LaurentChainComplex(1, (1, 1), (LaurentMatrix.from_rows(1, [[t_minus_1]]),))


def torus_complex(m: int) -> LaurentChainComplex:
    """Koszul complex on (x_1 - 1, ..., x_m - 1); basis of C_n = n-subsets in lexicographic order."""
    if m < 1:
        raise ValidationError("torus_complex needs m >= 1")
    subsets = [list(combinations(range(m), n)) for n in range(m + 1)]
    position = [{s: i for i, s in enumerate(level)} for level in subsets]
    one = LaurentPoly.constant(m, 1)
    zero = LaurentPoly.zero(m)
    diffs = []
    for n in range(1, m + 1):
        entries: List[LaurentPoly] = [zero] * (len(subsets[n - 1]) * len(subsets[n]))
        width = len(subsets[n])
        for col, s in enumerate(subsets[n]):
            for k, j in enumerate(s):
                face = s[:k] + s[k + 1:]
                poly = LaurentPoly.variable(m, j) - one
                entries[position[n - 1][face] * width + col] = poly if k % 2 == 0 else -poly
        diffs.append(LaurentMatrix(len(subsets[n - 1]), width, m, tuple(entries)))
    return LaurentChainComplex(m, tuple(len(level) for level in subsets), tuple(diffs))


def sphere_complex(k: int) -> LaurentChainComplex:
    """Cellular chains of S^k (k >= 1) over Z[Z^0]: Z in degrees 0 and k, zero maps."""
    if k < 1:
        raise ValidationError("sphere_complex needs k >= 1")
    dims = (1,) + (0,) * (k - 1) + (1,)
    diffs = tuple(LaurentMatrix.zeros(0, dims[n - 1], dims[n]) for n in range(1, k + 1))
    return LaurentChainComplex(0, dims, diffs)


def laurent_tensor(c: LaurentChainComplex, d: LaurentChainComplex) -> LaurentChainComplex:
    """Tensor over Z of complexes over Z[Z^a] and Z[Z^b], living over Z[Z^(a+b)]."""
    m = c.m + d.m
    top = c.top_degree + d.top_degree
    layout: List[List[Tuple[int, int, int]]] = []
    for n in range(top + 1):
        blocks, offset = [], 0
        for p in range(max(0, n - d.top_degree), min(n, c.top_degree) + 1):
            blocks.append((p, n - p, offset))
            offset += c.dims[p] * d.dims[n - p]
        layout.append(blocks)
    dims = tuple(sum(c.dims[p] * d.dims[q] for p, q, _ in layout[n]) for n in range(top + 1))
    zero = LaurentPoly.zero(m)
    diffs = []
    for n in range(1, top + 1):
        target = {(p, q): off for p, q, off in layout[n - 1]}
        entries: List[LaurentPoly] = [zero] * (dims[n - 1] * dims[n])
        width = dims[n]
        for p, q, off in layout[n]:
            pieces = []
            if p >= 1:
                left = c.differential(p).embed(m, 0)
                pieces.append((target[(p - 1, q)], left.kron(LaurentMatrix.identity(m, d.dims[q]))))
            if q >= 1:
                right = LaurentMatrix.identity(m, c.dims[p]).kron(d.differential(q).embed(m, c.m))
                pieces.append((target[(p, q - 1)], -right if p % 2 else right))
            for row_off, piece in pieces:
                for i in range(piece.rows):
                    for j in range(piece.cols):
                        val = piece[i, j]
                        if not val.is_zero():
                            pos = (row_off + i) * width + off + j
                            entries[pos] = entries[pos] + val
        diffs.append(LaurentMatrix(dims[n - 1], dims[n], m, tuple(entries)))
    return LaurentChainComplex(m, dims, tuple(diffs))


def product_with_circle(c: LaurentChainComplex) -> LaurentChainComplex:
    """C (x) circle, the circle variable appended last."""
    return laurent_tensor(c, circle_complex())


def mapping_torus_complex(a: IntMatrix) -> LaurentChainComplex:
    """0 -> Z[t^+-1]^k --(tA - I)--> Z[t^+-1]^k -> 0."""
    if not a.is_square():
        raise NonSquareMatrix(f"mapping torus needs a square matrix, got {a.shape}")
    if integer_determinant(a) == 0:
        raise SingularMatrix("mapping torus needs det(A) != 0")
    k = a.rows
    entries = []
    for i in range(k):
        for j in range(k):
            poly = LaurentPoly.monomial(1, (1,), a[i, j]) if a[i, j] else LaurentPoly.zero(1)
            if i == j:
                poly = poly - LaurentPoly.constant(1, 1)
            entries.append(poly)
    return LaurentChainComplex(1, (k, k), (LaurentMatrix(k, k, 1, tuple(entries)),))


__all__ = [
    "group_elements", "element_index", "regular_representation", "base_change_matrix",
    "base_change", "coset_projection", "further_quotient",
    "validate_module_action", "homology_module", "homology_with_action",
    "operator_norm_bound",
    "point_complex", "circle_complex", "torus_complex", "sphere_complex",
    "laurent_tensor", "product_with_circle", "mapping_torus_complex",
]
