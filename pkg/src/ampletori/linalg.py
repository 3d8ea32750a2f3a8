"""Exact linear algebra over Q (fractions.Fraction) and over Z.

Matrices are immutable tuples of tuples of Fraction; vectors are tuples.
Everything here is exact; no floating point is ever used.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrixError

Vec = tuple[Fraction, ...]
Mat = tuple[tuple[Fraction, ...], ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vector(entries: Sequence) -> Vec:
    return tuple(frac(x) for x in entries)


def matrix(rows: Sequence[Sequence]) -> Mat:
    m = tuple(tuple(frac(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Mat:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zero_matrix(n: int, m: int) -> Mat:
    zero = Fraction(0)
    return tuple(tuple(zero for _ in range(m)) for _ in range(n))


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(a: Mat, c) -> Mat:
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if not a or not b:
        return ()
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Mat) -> Mat:
    return tuple(tuple(col) for col in zip(*a))


def mat_pow(a: Mat, k: int) -> Mat:
    n = len(a)
    if k < 0:
        return mat_pow(mat_inv(a), -k)
    result = identity(n)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_eq(a: Mat, b: Mat) -> bool:
    return a == b


def mat_trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def _gauss(rows: list[list[Fraction]], ncols: int):
    """In-place fraction Gaussian elimination; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rref(a: Mat) -> tuple[Mat, list[int]]:
    if not a:
        return (), []
    rows = [list(row) for row in a]
    pivots = _gauss(rows, len(a[0]))
    return tuple(tuple(row) for row in rows), pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def mat_det(a: Mat) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    rows = [list(row) for row in a]
    det = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                factor = rows[i][c] * inv
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[c])]
    return det


def int_det(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant for integer matrices (fast path)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def mat_inv(a: Mat) -> Mat:
    n = len(a)
    rows = [list(a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots = _gauss(rows, n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def solve(a: Mat, b: Vec) -> Vec:
    """Solve a·x = b for square invertible a."""
    n = len(a)
    rows = [list(a[i]) + [b[i]] for i in range(n)]
    pivots = _gauss(rows, n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    return tuple(row[n] for row in rows)


def kernel_basis(a: Mat) -> list[Vec]:
    """Basis of the right kernel {x : a·x = 0} over Q."""
    if not a:
        return []
    ncols = len(a[0])
    reduced, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(tuple(v))
    return basis


def row_space_basis(rows: Sequence[Vec]) -> list[Vec]:
    if not rows:
        return []
    reduced, pivots = rref(tuple(rows))
    return [reduced[i] for i in range(len(pivots))]


def intersect_row_spaces(a_rows: Sequence[Vec], b_rows: Sequence[Vec]) -> list[Vec]:
    """Basis of span(a) ∩ span(b), both given by spanning row vectors."""
    a_basis = row_space_basis(a_rows)
    b_basis = row_space_basis(b_rows)
    if not a_basis or not b_basis:
        return []
    # x in both spans: x = u·A = v·B; solve [A^T | -B^T]·(u,v) = 0.
    ncols = len(a_basis[0])
    stacked = tuple(
        tuple(list(col_a) + [-x for x in col_b])
        for col_a, col_b in zip(zip(*a_basis), zip(*b_basis))
    )
    assert len(stacked) == ncols
    result = []
    for k in kernel_basis(stacked):
        u = k[: len(a_basis)]
        vec = tuple(
            sum(u[i] * a_basis[i][j] for i in range(len(a_basis)))
            for j in range(ncols)
        )
        if any(x != 0 for x in vec):
            result.append(vec)
    return row_space_basis(result)


def charpoly(a: Mat) -> list[Fraction]:
    """Characteristic polynomial det(tI − a), ascending coefficients, monic.

    Faddeev–LeVerrier recursion; exact over Fraction.
    """
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        m = mat_mul(a, m)
        c = -mat_trace(m) / k
        coeffs[n - k] = c
        m = tuple(
            tuple(m[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
        )
    return coeffs


def is_integer_matrix(a: Mat) -> bool:
    return all(x.denominator == 1 for row in a for x in row)


# ---------------------------------------------------------------------------
# Integer lattice algorithms (row-style HNF, SNF with transforms)
# ---------------------------------------------------------------------------


def hnf_rows(a: Sequence[Sequence[int]], transform: bool = False):
    """Row Hermite normal form of an integer matrix.

    Returns (H, U) with U·A = H and U unimodular when transform=True, else H.
    Zero rows are moved to the bottom; pivots are positive and entries above a
    pivot are reduced into [0, pivot).
    """
    m = [list(map(int, row)) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if transform else None
    r = 0
    for c in range(ncols):
        # clear column c below row r by gcd steps
        while True:
            nz = [i for i in range(r, nrows) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            if i0 != r:
                m[r], m[i0] = m[i0], m[r]
                if transform:
                    u[r], u[i0] = u[i0], u[r]
            if all(m[i][c] == 0 for i in range(r + 1, nrows)):
                break
            for i in range(r + 1, nrows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if transform:
                        u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        if r < nrows and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
                if transform:
                    u[r] = [-x for x in u[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if transform:
                        u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
            if r == nrows:
                break
    h = tuple(tuple(row) for row in m)
    if transform:
        return h, tuple(tuple(row) for row in u)
    return h


def snf_with_transforms(a: Sequence[Sequence[int]]):
    """Smith normal form: returns (D, U, V) with U·A·V = D, U, V unimodular."""
    m = [list(map(int, row)) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i -= q * row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, q):  # col_i -= q * col_j
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    t = 0
    while t < min(nrows, ncols):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, nrows):
            if m[i][t] != 0:
                add_row(i, t, m[i][t] // m[t][t])
                dirty = dirty or m[i][t] != 0
        for j in range(t + 1, ncols):
            if m[t][j] != 0:
                add_col(j, t, m[t][j] // m[t][t])
                dirty = dirty or m[t][j] != 0
        if dirty or any(m[i][t] for i in range(t + 1, nrows)) or any(
            m[t][j] for j in range(t + 1, ncols)
        ):
            continue
        # divisibility sweep: m[t][t] must divide everything below-right
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if m[i][j] % m[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, -1)  # row_t += row_off; the next column
            # reduction against the pivot leaves a remainder smaller than
            # the pivot, so the smallest-entry selection strictly descends
            continue
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        tuple(tuple(row) for row in m),
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def int_kernel_basis(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice {x ∈ Z^n : a·x = 0}."""
    if not a:
        return []
    d, _, v = snf_with_transforms(a)
    nrows, ncols = len(a), len(a[0])
    rank_ = sum(1 for i in range(min(nrows, ncols)) if d[i][i] != 0)
    return [tuple(v[i][j] for i in range(ncols)) for j in range(rank_, ncols)]
