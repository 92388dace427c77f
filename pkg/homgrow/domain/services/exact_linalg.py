"""
Exact integer and rational linear algebra.

Everything here works on Python ints and ``Fraction``; numpy never feeds a
result. The Smith normal form runs on sparse row dictionaries so that the
circulant differentials of large tower levels stay cheap.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..entities.matrix import IntMatrix, RowDict, SmithForm
from ..entities.reports import FKFactorization
from ..enums import DeterminantRoute
from ..errors import BoundViolation, DimensionMismatch, IdentityViolation, SingularMatrix, ValidationError
from ..value_objects import FKDet, Rational
from ...utils.decorators import measure_time
from ...utils.logging_utils import get_logger

logger = get_logger("exact_linalg")

DEFAULT_MINOR_BUDGET = 4096


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _axpy(target: RowDict, source: RowDict, k: int) -> None:
    # target += k * source, dropping zeros
    for j, v in source.items():
        nv = target.get(j, 0) + k * v
        if nv:
            target[j] = nv
        else:
            target.pop(j, None)


class _SmithEngine:
    """Sparse pivoting elimination producing a Smith form.

    Row ops are mirrored on U and on U^-1 (stored transposed), column ops on
    V (stored transposed) and on V^-1, so that U * A * V = D at the end.
    """

    def __init__(self, a: IntMatrix, track: bool) -> None:
        self.m, self.n = a.rows, a.cols
        self.rows: List[RowDict] = [dict(rd) for rd in a.row_dicts]
        self.cols: List[Set[int]] = [set() for _ in range(self.n)]
        for i, rd in enumerate(self.rows):
            for j in rd:
                self.cols[j].add(i)
        self.track = track
        if track:
            self.u = [{i: 1} for i in range(self.m)]
            self.u_inv_t = [{i: 1} for i in range(self.m)]
            self.v_t = [{j: 1} for j in range(self.n)]
            self.v_inv = [{j: 1} for j in range(self.n)]

    # ---- elementary operations

    def _track_row_addmul(self, i: int, p: int, k: int) -> None:
        if self.track:
            _axpy(self.u[i], self.u[p], k)
            _axpy(self.u_inv_t[p], self.u_inv_t[i], -k)

    def _row_addmul(self, i: int, p: int, k: int) -> None:
        """row_i += k * row_p."""
        ri, rp = self.rows[i], self.rows[p]
        for j, v in rp.items():
            nv = ri.get(j, 0) + k * v
            if nv:
                if j not in ri:
                    self.cols[j].add(i)
                ri[j] = nv
            elif j in ri:
                del ri[j]
                self.cols[j].discard(i)
        self._track_row_addmul(i, p, k)

    def _col_addmul(self, j: int, q: int, k: int) -> None:
        """col_j += k * col_q."""
        for i in list(self.cols[q]):
            ri = self.rows[i]
            nv = ri.get(j, 0) + k * ri[q]
            if nv:
                if j not in ri:
                    self.cols[j].add(i)
                ri[j] = nv
            elif j in ri:
                del ri[j]
                self.cols[j].discard(i)
        if self.track:
            _axpy(self.v_t[j], self.v_t[q], k)
            _axpy(self.v_inv[q], self.v_inv[j], -k)

    def _negate_row(self, p: int) -> None:
        for j in self.rows[p]:
            self.rows[p][j] = -self.rows[p][j]
        if self.track:
            for d in (self.u[p], self.u_inv_t[p]):
                for j in d:
                    d[j] = -d[j]

    def _track_col_2x2(self, qa: int, qb: int, s: int, t: int, x: int, y: int) -> None:
        # new col_qa = s*col_qa + t*col_qb ; new col_qb = x*col_qa + y*col_qb ; s*y - t*x = 1
        if not self.track:
            return
        va, vb = self.v_t[qa], self.v_t[qb]
        new_a: RowDict = {}
        _axpy(new_a, va, s)
        _axpy(new_a, vb, t)
        new_b: RowDict = {}
        _axpy(new_b, va, x)
        _axpy(new_b, vb, y)
        self.v_t[qa], self.v_t[qb] = new_a, new_b
        # inverse of [[s, x], [t, y]] is [[y, -x], [-t, s]]
        wa, wb = self.v_inv[qa], self.v_inv[qb]
        inv_a: RowDict = {}
        _axpy(inv_a, wa, y)
        _axpy(inv_a, wb, -x)
        inv_b: RowDict = {}
        _axpy(inv_b, wa, -t)
        _axpy(inv_b, wb, s)
        self.v_inv[qa], self.v_inv[qb] = inv_a, inv_b

    # ---- elimination

    def _pick_pivot(self, active: Set[int]) -> Optional[Tuple[int, int]]:
        best = None
        best_key = None
        for i in list(active):
            rd = self.rows[i]
            if not rd:
                active.discard(i)
                continue
            size = len(rd)
            for j, v in rd.items():
                key = (abs(v), size, i, j)
                if best_key is None or key < best_key:
                    best_key, best = key, (i, j)
            if best_key is not None and best_key[0] == 1 and best_key[1] == 1:
                break
        return best

    def _reduce(self, p: int, q: int) -> Tuple[int, int]:
        while True:
            a = self.rows[p][q]
            for i in sorted(i for i in self.cols[q] if i != p):
                k = self.rows[i][q] // a
                if k:
                    self._row_addmul(i, p, -k)
            rest = [i for i in self.cols[q] if i != p]
            if rest:
                p = min(rest, key=lambda i: (abs(self.rows[i][q]), len(self.rows[i]), i))
                continue
            for j in sorted(j for j in self.rows[p] if j != q):
                k = self.rows[p][j] // a
                if k:
                    self._col_addmul(j, q, -k)
            rest = [j for j in self.rows[p] if j != q]
            if rest:
                q = min(rest, key=lambda j: (abs(self.rows[p][j]), len(self.cols[j]), j))
                continue
            return p, q

    def run(self) -> SmithForm:
        active = {i for i in range(self.m) if self.rows[i]}
        pivots: List[Tuple[int, int]] = []
        while active:
            found = self._pick_pivot(active)
            if found is None:
                break
            p, q = self._reduce(*found)
            pivots.append((p, q))
            active.discard(p)

        diag = []
        for p, q in pivots:
            if self.rows[p][q] < 0:
                self._negate_row(p)
            diag.append(self.rows[p][q])

        # divisibility chain via 2x2 gcd/lcm moves
        r = len(diag)
        for x in range(r):
            for y in range(x + 1, r):
                a, b = diag[x], diag[y]
                if b % a == 0:
                    continue
                g, s, t = ext_gcd(a, b)
                (pa, qa), (pb, qb) = pivots[x], pivots[y]
                self._track_row_addmul(pa, pb, 1)
                self._track_col_2x2(qa, qb, s, t, -(b // g), a // g)
                self._track_row_addmul(pb, pa, -(t * b // g))
                diag[x], diag[y] = g, a * b // g

        shape = (self.m, self.n)
        if not self.track:
            return SmithForm(tuple(diag), shape)

        pivot_rows = [p for p, _ in pivots]
        pivot_cols = [q for _, q in pivots]
        taken_r, taken_c = set(pivot_rows), set(pivot_cols)
        row_order = pivot_rows + [i for i in range(self.m) if i not in taken_r]
        col_order = pivot_cols + [j for j in range(self.n) if j not in taken_c]

        u = IntMatrix.from_row_dicts(self.m, self.m, [self.u[i] for i in row_order])
        u_inv = IntMatrix.from_row_dicts(self.m, self.m, [self.u_inv_t[i] for i in row_order]).T
        v = IntMatrix.from_row_dicts(self.n, self.n, [self.v_t[j] for j in col_order]).T
        v_inv = IntMatrix.from_row_dicts(self.n, self.n, [self.v_inv[j] for j in col_order])
        return SmithForm(tuple(diag), shape, u, v, u_inv, v_inv)


# ---------------------------------------------------------------------------
# Smith form and derived structure
# ---------------------------------------------------------------------------

@measure_time
def smith_normal_form(a: IntMatrix, transforms: bool = False) -> SmithForm:
    """Smith normal form; with ``transforms`` also U, V and their inverses."""
    if not transforms:
        return SmithForm(smith_invariants(a), a.shape)
    return _smith_with_transforms(a)


# kernel, cokernel and FK routes of one level ask for the same transforms
@lru_cache(maxsize=16)
def _smith_with_transforms(a: IntMatrix) -> SmithForm:
    return _SmithEngine(a, track=True).run()


@lru_cache(maxsize=512)
def smith_invariants(a: IntMatrix) -> Tuple[int, ...]:
    return _SmithEngine(a, track=False).run().invariant_factors


def rank(a: IntMatrix) -> int:
    return len(smith_invariants(a))


def cokernel_structure(a: IntMatrix) -> Tuple[int, Tuple[int, ...]]:
    """coker(A) = Z^free_rank + sum Z/d_j, chained, units dropped."""
    factors = smith_invariants(a)
    return a.rows - len(factors), tuple(d for d in factors if d > 1)


def rank_mod_p(a: IntMatrix, p: int) -> int:
    """Rank over F_p by elimination on reduced row dictionaries."""
    pending: List[RowDict] = []
    for rd in a.row_dicts:
        reduced = {j: v % p for j, v in rd.items() if v % p}
        if reduced:
            pending.append(reduced)
    pivots: Dict[int, RowDict] = {}
    for row in pending:
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {j: (v * inv) % p for j, v in row.items()}
                break
            factor = row[lead]
            for j, v in pivots[lead].items():
                nv = (row.get(j, 0) - factor * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return len(pivots)


def _row_hnf(vectors: Sequence[RowDict]) -> List[RowDict]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive; entries above a pivot lie in [0, pivot).
    """
    work = [dict(v) for v in vectors if v]
    result: List[RowDict] = []
    while work:
        col = min(min(v) for v in work)
        while True:
            cands = [v for v in work if col in v]
            piv = min(cands, key=lambda v: (abs(v[col]), len(v), sorted(v.items())))
            a = piv[col]
            clean = True
            for v in cands:
                if v is piv:
                    continue
                _axpy(v, piv, -(v[col] // a))
                if col in v:
                    clean = False
            work = [v for v in work if v]
            if clean:
                break
        work = [v for v in work if v is not piv]
        if piv[col] < 0:
            for j in piv:
                piv[j] = -piv[j]
        a = piv[col]
        for prev in result:
            if col in prev:
                k = prev[col] // a
                if k:
                    _axpy(prev, piv, -k)
        result.append(piv)
    return result


def hermite_normal_form(a: IntMatrix) -> IntMatrix:
    """Row Hermite normal form with zero rows dropped."""
    rows = _row_hnf(a.row_dicts)
    return IntMatrix.from_row_dicts(len(rows), a.cols, rows)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """Column basis (Hermite normalized) of the lattice spanned by the columns."""
    return hermite_normal_form(generators.T).T


def kernel_lattice(a: IntMatrix, normalize: bool = True) -> IntMatrix:
    """Columns form a basis of the saturated lattice ker(A)."""
    sf = smith_normal_form(a, transforms=True)
    k = sf.right_transform.select_columns(range(sf.rank, a.cols))
    if normalize and k.cols:
        return lattice_basis(k)
    return k


def left_kernel_lattice(a: IntMatrix) -> IntMatrix:
    """Rows form a basis of {y : y A = 0}; the free-part projection of coker(A)."""
    sf = smith_normal_form(a, transforms=True)
    return sf.left_transform.select_rows(range(sf.rank, a.rows))


def express_in_basis(basis: IntMatrix, targets: IntMatrix) -> IntMatrix:
    """Integer C with basis @ C == targets; ValidationError if a target lies outside."""
    if basis.rows != targets.rows:
        raise DimensionMismatch("basis and targets live in different ambient ranks")
    sf = smith_normal_form(basis, transforms=True)
    if sf.rank < basis.cols:
        raise ValidationError("basis columns are linearly dependent")
    ux = sf.left_transform @ targets
    y_rows: List[List[int]] = []
    for i, d in enumerate(sf.invariant_factors):
        row = []
        for value in ux.row(i):
            q, rem = divmod(value, d)
            if rem:
                raise ValidationError("target is not in the lattice")
            row.append(q)
        y_rows.append(row)
    for i in range(sf.rank, basis.rows):
        if any(ux.row(i)):
            raise ValidationError("target is not in the span of the basis")
    y = IntMatrix.from_rows(y_rows, cols=targets.cols)
    return sf.right_transform @ y


def lattice_contains(basis: IntMatrix, vector: Sequence[int]) -> bool:
    try:
        express_in_basis(basis, IntMatrix.from_columns([list(vector)], basis.rows))
    except ValidationError:
        return False
    return True


def subquotient_structure(upper: IntMatrix, lower: IntMatrix) -> Tuple[int, Tuple[int, ...]]:
    """Structure of <upper columns> / <lower columns>; lower must lie inside upper."""
    basis = lattice_basis(upper) if upper.cols else IntMatrix.zeros(upper.rows, 0)
    if basis.cols == 0:
        if lower.cols and not lower.is_zero():
            raise ValidationError("lower lattice is not contained in the upper one")
        return 0, ()
    coords = express_in_basis(basis, lower)
    return cokernel_structure(coords)


# ---------------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------------

def integer_determinant(a: IntMatrix) -> int:
    """Fraction-free Bareiss determinant."""
    if not a.is_square():
        raise DimensionMismatch(f"determinant of non-square {a.shape}")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rational_determinant(rows: Sequence[Sequence[Rational]]) -> Fraction:
    n = len(rows)
    m = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def rational_solve(matrix: Sequence[Sequence[Rational]], rhs: Sequence[Sequence[Rational]]) -> List[List[Fraction]]:
    """Solve M X = B for square invertible M over Q (B given as rows)."""
    n = len(matrix)
    width = len(rhs[0]) if rhs else 0
    aug = [[Fraction(x) for x in matrix[i]] + [Fraction(x) for x in rhs[i]] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("rational_solve needs an invertible matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return [row[n:n + width] for row in aug]


def gram_determinant(vectors: Sequence[Sequence[Rational]]) -> Fraction:
    """det of the Gram matrix under the standard inner product; empty list gives 1."""
    if not vectors:
        return Fraction(1)
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise DimensionMismatch("gram_determinant vectors differ in length")
    vs = [[Fraction(x) for x in v] for v in vectors]
    gram = [[sum(x * y for x, y in zip(u, w)) for w in vs] for u in vs]
    return rational_determinant(gram)


def integer_gram_determinant(columns: IntMatrix) -> int:
    if columns.cols == 0:
        return 1
    return integer_determinant(columns.T @ columns)


def cauchy_binet_square(a: IntMatrix, r: Optional[int] = None) -> int:
    """Sum of squared r x r minors, r = rank; equals the product of nonzero eigenvalues of A^T A."""
    if r is None:
        r = rank(a)
    if r == 0:
        return 1
    # enumerate the cheaper side: rows of A, or rows of A^T
    lines = a if math.comb(a.rows, r) <= math.comb(a.cols, r) else a.T
    pick, count = lines.select_rows, lines.rows
    total = 0
    for subset in combinations(range(count), r):
        block = pick(subset)
        total += integer_determinant(block @ block.T)
    return total


def _lattice_square(a: IntMatrix) -> int:
    sf = smith_normal_form(a, transforms=True)
    r = sf.rank
    tors = math.prod(sf.invariant_factors)
    kernel = sf.right_transform.select_columns(range(r, a.cols))
    coker_proj = sf.left_transform.select_rows(range(r, a.rows))
    return integer_gram_determinant(kernel) * tors * tors * integer_gram_determinant(coker_proj.T)


def _cauchy_binet_cost(a: IntMatrix, r: int) -> int:
    # one r x r Bareiss determinant per maximal minor on the cheaper side
    return min(math.comb(a.rows, r), math.comb(a.cols, r)) * r ** 3


def _lattice_cost(a: IntMatrix, r: int) -> int:
    # sparse Smith elimination, then Gram determinants of the kernel and cokernel bases
    return (a.rows + a.cols) ** 2 + (a.cols - r) ** 3 + (a.rows - r) ** 3


def fk_square(a: IntMatrix, budget: int = DEFAULT_MINOR_BUDGET) -> Tuple[int, DeterminantRoute]:
    """Exact square of the Fuglede-Kadison determinant and the route that produced it.

    Cauchy-Binet is used only while the minor count stays within ``budget``
    and its estimated cost does not exceed the lattice route's.
    """
    r = rank(a)
    if r == 0:
        return 1, DeterminantRoute.EMPTY
    minors = min(math.comb(a.rows, r), math.comb(a.cols, r))
    if minors <= budget and _cauchy_binet_cost(a, r) <= _lattice_cost(a, r):
        return cauchy_binet_square(a, r), DeterminantRoute.CAUCHY_BINET
    return _lattice_square(a), DeterminantRoute.LATTICE


def fk_determinant(a: IntMatrix, budget: int = DEFAULT_MINOR_BUDGET) -> FKDet:
    square, route = fk_square(a, budget)
    logger.debug("fk_determinant %s via %s", a.shape, route.value)
    return FKDet(Fraction(square))


def fk_factorization_check(a: IntMatrix) -> FKFactorization:
    """det(u) = det(j_k) * |tors coker u| * det(pr_c), checked on exact squares."""
    det_u = cauchy_binet_square(a)
    kernel = kernel_lattice(a)
    coker_proj = kernel_lattice(a.T)
    _, torsion = cokernel_structure(a)
    tors = math.prod(torsion)
    det_j = integer_gram_determinant(kernel)
    det_pr = integer_gram_determinant(coker_proj)

    if det_u != det_j * tors * tors * det_pr:
        raise IdentityViolation(
            f"det(u)^2={det_u} but det(j_k)^2*|tors|^2*det(pr_c)^2={det_j * tors * tors * det_pr}"
        )
    for name, square in (("det(j_k)", det_j), ("|tors coker|", tors * tors), ("det(pr_c)", det_pr)):
        if not 1 <= square <= det_u:
            raise BoundViolation(f"{name}^2={square} outside [1, det(u)^2={det_u}]")

    return FKFactorization(
        det_u=FKDet(Fraction(det_u)),
        det_inclusion=FKDet(Fraction(det_j)),
        torsion_order=tors,
        det_projection=FKDet(Fraction(det_pr)),
    )


__all__ = [
    "DEFAULT_MINOR_BUDGET",
    "ext_gcd", "smith_normal_form", "smith_invariants", "rank", "rank_mod_p",
    "cokernel_structure", "hermite_normal_form", "kernel_lattice", "left_kernel_lattice", "lattice_basis",
    "lattice_contains", "express_in_basis", "subquotient_structure",
    "integer_determinant", "rational_determinant", "rational_solve",
    "gram_determinant", "integer_gram_determinant", "cauchy_binet_square",
    "fk_square", "fk_determinant", "fk_factorization_check",
]
