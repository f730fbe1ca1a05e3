"""Exact dense linear algebra over the rationals.

Matrices are lists of rows of Fractions, shape (rows, cols); vectors are
lists of Fractions.  Zero-row and zero-column matrices are legal: an r x 0
matrix is ``[[] for _ in range(r)]`` and a 0 x c matrix is ``[]`` (the column
count is then carried by the caller).  All routines return fresh objects and
never mutate their arguments.
"""

from __future__ import annotations

from fractions import Fraction

Vector = list[Fraction]
Matrix = list[list[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zero_vector(n: int) -> Vector:
    return [ZERO] * n


def mat_copy(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def num_cols(a: Matrix, default: int = 0) -> int:
    return len(a[0]) if a else default


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v))), ZERO) for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner = len(a), num_cols(a)
    cols = num_cols(b)
    if not a:
        return []
    if b and inner and inner != len(b):
        raise ValueError(f"shape mismatch: {rows}x{inner} times {len(b)}x{cols}")
    if inner == 0:
        return zeros(rows, cols)
    out = zeros(rows, cols)
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            aik = arow[k]
            if aik == 0:
                continue
            brow = b[k]
            for j in range(cols):
                orow[j] += aik * brow[j]
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: Fraction, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    c = num_cols(a, cols or 0)
    return [[row[j] for row in a] for j in range(c)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Row-reduced echelon form and the list of pivot columns."""
    m = mat_copy(a)
    rows = len(m)
    cols = num_cols(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix, cols: int | None = None) -> list[Vector]:
    """Deterministic kernel basis: one vector per free column, in order."""
    c = num_cols(a, cols or 0)
    if not a:
        return [unit_vector(c, j) for j in range(c)]
    r, pivots = rref(a)
    pivot_set = set(pivots)
    basis = []
    for free in range(c):
        if free in pivot_set:
            continue
        v = zero_vector(c)
        v[free] = ONE
        for row_idx, pc in enumerate(pivots):
            v[pc] = -r[row_idx][free]
        basis.append(v)
    return basis


def unit_vector(n: int, j: int) -> Vector:
    v = zero_vector(n)
    v[j] = ONE
    return v


def solve(a: Matrix, b: Vector, cols: int | None = None) -> Vector | None:
    """One solution of a·x = b, or None if the system is infeasible."""
    c = num_cols(a, cols or 0)
    if not a:
        return zero_vector(c)
    aug = [row[:] + [b[i]] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if c in pivots:
        return None
    x = zero_vector(c)
    for row_idx, pc in enumerate(pivots):
        x[pc] = r[row_idx][c]
    return x


def columns(a: Matrix, cols: int | None = None) -> list[Vector]:
    c = num_cols(a, cols or 0)
    return [[row[j] for row in a] for j in range(c)]


def from_columns(cols_list: list[Vector], rows: int) -> Matrix:
    return [[col[i] for col in cols_list] for i in range(rows)]


def independent_columns(a: Matrix) -> list[int]:
    """Indices of the first maximal independent column set (pivot columns)."""
    return rref(a)[1]


def column_space_basis(a: Matrix) -> list[Vector]:
    return [[row[j] for row in a] for j in independent_columns(a)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse of a non-square matrix")
    aug = [row[:] + identity(n)[i] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def in_span(basis: list[Vector], v: Vector) -> Vector | None:
    """Coordinates of v in the given spanning vectors, or None."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    mat = from_columns(basis, len(v))
    return solve(mat, v, cols=len(basis))


def span_dim(vectors: list[Vector], length: int) -> int:
    if not vectors:
        return 0
    return rank(from_columns(vectors, length))
