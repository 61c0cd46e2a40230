"""Exact integer linear algebra on the lattice N = Z^n.

Vectors are tuples of Python ints and matrices are lists of rows. Nothing in
this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


class LatticeError(ValueError):
    """Raised on malformed input to a lattice routine."""


def _check_rect(rows: Sequence[Sequence[int]], width: int | None = None) -> int:
    if width is None:
        width = len(rows[0]) if rows else 0
    for row in rows:
        if len(row) != width:
            raise LatticeError(f"ragged matrix: expected rows of length {width}, got {len(row)}")
    return width


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def is_primitive(v: Sequence[int]) -> bool:
    return any(v) and gcd(*v) == 1


def transpose(rows: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss fraction-free elimination)."""
    n = len(rows)
    _check_rect(rows, n)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Rational inverse of a square integer matrix; raises on singular input."""
    n = len(rows)
    _check_rect(rows, n)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def unimodular_inverse(rows: Sequence[Sequence[int]]) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    inv = inverse(rows)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise LatticeError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def hermite_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ a`` and ``U`` unimodular. ``H`` is in row
    echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows sit at the bottom.
    """
    if not a:
        raise LatticeError("empty matrix")
    ncols = _check_rect(a)
    m = len(a)
    h = [list(map(int, row)) for row in a]
    u = identity(m)

    def sub(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        if q:
            h[i] = [x - q * y for x, y in zip(h[i], h[j])]
            u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def swap(i: int, j: int) -> None:
        h[i], h[j] = h[j], h[i]
        u[i], u[j] = u[j], u[i]

    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(h[i][c]), i))
            swap(piv, r)
            clean = True
            for i in range(r + 1, m):
                if h[i][c]:
                    sub(i, r, h[i][c] // h[r][c])
                    clean = clean and h[i][c] == 0
            if clean:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            sub(i, r, h[i][c] // h[r][c])
        r += 1
    return h, u


def _column_echelon(vs: Sequence[Sequence[int]], n: int) -> tuple[Matrix, Matrix]:
    k = len(vs)
    if k == 0:
        return [[] for _ in range(n)], identity(n)
    return hermite_normal_form(transpose(vs))


def _check_vectors(vs: Sequence[Sequence[int]], n: int | None) -> int:
    if n is None:
        if not vs:
            raise LatticeError("ambient dimension required for an empty list")
        n = len(vs[0])
    for v in vs:
        if len(v) != n:
            raise LatticeError(f"dimension mismatch: expected length {n}, got {len(v)}")
    return n


def is_unimodular_extension(vs: Sequence[Sequence[int]], n: int | None = None) -> bool:
    """True iff the vectors extend to a Z-basis of Z^n."""
    n = _check_vectors(vs, n)
    k = len(vs)
    if k == 0:
        return True
    if k > n:
        return False
    h, _ = _column_echelon(vs, n)
    return all(h[i][j] == int(i == j) for i in range(n) for j in range(k))


def complete_to_basis(vs: Sequence[Sequence[int]], n: int | None = None) -> list[Vector]:
    """Return n - k vectors completing ``vs`` to a Z-basis.

    The completion is read off the inverse of the unimodular transform that
    brings the column matrix of ``vs`` to Hermite form, so it is deterministic.
    """
    n = _check_vectors(vs, n)
    if not is_unimodular_extension(vs, n):
        raise LatticeError("vectors do not extend to a basis of the lattice")
    _, u = _column_echelon(vs, n)
    w = unimodular_inverse(u)
    k = len(vs)
    return [tuple(w[i][j] for i in range(n)) for j in range(k, n)]


def basis_with(vs: Sequence[Sequence[int]], n: int | None = None) -> tuple[Matrix, Matrix]:
    """Basis ``vs + completion`` as columns of B, together with B^-1.

    Row ``i`` of B^-1 is the dual vector taking value 1 on the i-th basis
    vector and 0 on the others.
    """
    n = _check_vectors(vs, n)
    cols = [tuple(v) for v in vs] + complete_to_basis(vs, n)
    b = transpose(cols)
    return b, unimodular_inverse(b)


def solve_nonneg_rational(columns: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Solve ``sum_j x_j * columns[j] = b`` exactly.

    The columns must be linearly independent. Returns the unique solution if
    it exists and is entrywise nonnegative, otherwise ``None``.
    """
    n = len(b)
    _check_vectors(columns, n)
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(b[i])] for i in range(n)]
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            raise LatticeError("columns are linearly dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, n)):
        return None
    x = tuple(rows[i][k] for i in pivots)
    if any(v < 0 for v in x):
        return None
    return x

