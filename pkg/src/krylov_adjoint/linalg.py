"""Dense matrices over any ring of :mod:`krylov_adjoint.rings`, plus brute-force oracles.

Vectors are plain tuples of ring elements. Whether a tuple plays the role of a
row (1 x n) or a column (n x 1) is fixed by the function it is passed to:
``vec_mat`` takes a row, ``mat_vec`` a column.

The oracles (``det_gauss``, ``cofactor_det``, ``adjugate_oracle``) depend on
nothing but this module and the rings, so they stay independent of the Krylov
pipeline they are used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatch, NoUnitPivot, NotInvertible, SingularMatrix
from .rings import Ring, SeriesRing

Vector = tuple


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_ints(cls, ring: Ring, rows: Iterable[Iterable[int]]) -> "Matrix":
        return cls(ring, tuple(tuple(ring.from_int(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        one, zero = ring.one, ring.zero
        return cls(ring, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, ring: Ring, m: int, n: int | None = None) -> "Matrix":
        n = m if n is None else n
        zero = ring.zero
        return cls(ring, tuple((zero,) * n for _ in range(m)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ring, tuple(zip(*self.rows)) if self.rows else ())

    def map(self, fn: Callable, ring: Ring | None = None) -> "Matrix":
        return Matrix(ring or self.ring, tuple(tuple(fn(x) for x in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return mat_sub(self, other)

    def to_strings(self) -> list[list[str]]:
        return [[self.ring.to_str(x) for x in r] for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(" ".join(r) for r in self.to_strings())


def _check_same(X: Matrix, Y: Matrix) -> None:
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")


def mat_add(X: Matrix, Y: Matrix) -> Matrix:
    _check_same(X, Y)
    add = X.ring.add
    return Matrix(X.ring, tuple(tuple(map(add, a, b)) for a, b in zip(X.rows, Y.rows)))


def mat_sub(X: Matrix, Y: Matrix) -> Matrix:
    _check_same(X, Y)
    sub = X.ring.sub
    return Matrix(X.ring, tuple(tuple(map(sub, a, b)) for a, b in zip(X.rows, Y.rows)))


def mat_scale(c, X: Matrix) -> Matrix:
    mul = X.ring.mul
    return X.map(lambda x: mul(c, x))


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    """Classical product."""
    if X.ncols != Y.nrows:
        raise DimensionMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    dot = X.ring.dot
    cols = tuple(zip(*Y.rows))
    return Matrix(X.ring, tuple(tuple(dot(row, c) for c in cols) for row in X.rows))


def mat_vec(M: Matrix, x: Sequence) -> Vector:
    """M times the column vector x."""
    if M.ncols != len(x):
        raise DimensionMismatch(f"cannot multiply {M.shape} by column of length {len(x)}")
    dot = M.ring.dot
    return tuple(dot(row, x) for row in M.rows)


def vec_mat(p: Sequence, M: Matrix) -> Vector:
    """The row vector p times M."""
    if M.nrows != len(p):
        raise DimensionMismatch(f"cannot multiply row of length {len(p)} by {M.shape}")
    dot = M.ring.dot
    return tuple(dot(p, c) for c in zip(*M.rows))


def outer(ring: Ring, x: Sequence, y: Sequence) -> Matrix:
    """Column x times row y."""
    mul = ring.mul
    return Matrix(ring, tuple(tuple(mul(a, b) for b in y) for a in x))


def _pivot_row(ring: Ring, rows: list, k: int, start: int):
    """First row index >= start whose column-k entry is a unit, else None."""
    for i in range(start, len(rows)):
        if ring.is_unit(rows[i][k]):
            return i
    return None


def det_gauss(A: Matrix):
    """Determinant by elimination, only ever dividing by unit pivots.

    Over a field any nonzero pivot is a unit. Over a series ring the pivot must
    have a unit constant term; when a column has nonzero entries but no unit one,
    NoUnitPivot is raised.
    """
    if not A.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    R = A.ring
    n = A.nrows
    rows = [list(r) for r in A.rows]
    det = R.one
    for k in range(n):
        p = _pivot_row(R, rows, k, k)
        if p is None:
            if all(R.is_zero(rows[i][k]) for i in range(k, n)):
                return R.zero
            raise NoUnitPivot(f"no unit pivot in column {k}")
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            det = R.neg(det)
        piv = rows[k][k]
        det = R.mul(det, piv)
        pinv = R.inv(piv)
        prow = rows[k]
        for i in range(k + 1, n):
            row = rows[i]
            if R.is_zero(row[k]):
                continue
            f = R.mul(row[k], pinv)
            for j in range(k + 1, n):
                row[j] = R.sub(row[j], R.mul(f, prow[j]))
    return det


def solve(A: Matrix, b: Sequence) -> Vector:
    """Solve A x = b by Gauss-Jordan elimination on unit pivots."""
    if not A.is_square() or A.nrows != len(b):
        raise DimensionMismatch("solve needs a square system")
    R = A.ring
    n = A.nrows
    rows = [list(r) + [b[i]] for i, r in enumerate(A.rows)]
    _gauss_jordan(R, rows, n)
    return tuple(rows[i][n] for i in range(n))


def _gauss_jordan(R: Ring, rows: list, n: int) -> None:
    width = len(rows[0])
    for k in range(n):
        p = _pivot_row(R, rows, k, k)
        if p is None:
            if R.is_field:
                raise SingularMatrix("matrix is singular")
            raise NoUnitPivot(f"no unit pivot in column {k}")
        rows[k], rows[p] = rows[p], rows[k]
        pinv = R.inv(rows[k][k])
        prow = rows[k] = [R.mul(pinv, x) for x in rows[k]]
        for i in range(n):
            if i == k:
                continue
            row = rows[i]
            f = row[k]
            if R.is_zero(f):
                continue
            for j in range(k, width):
                row[j] = R.sub(row[j], R.mul(f, prow[j]))


def mat_inverse(A: Matrix) -> Matrix:
    """Exact inverse.

    Over a series ring the inverse is lifted by Newton iteration
    X <- X (2I - A X) from the inverse of the constant-term matrix, so only
    base-ring units are ever inverted.
    """
    if not A.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    R = A.ring
    n = A.nrows
    if isinstance(R, SeriesRing):
        return _series_newton_inverse(A)
    eye = Matrix.identity(R, n)
    rows = [list(r) + list(e) for r, e in zip(A.rows, eye.rows)]
    _gauss_jordan(R, rows, n)
    return Matrix(R, tuple(tuple(r[n:]) for r in rows))


def _series_newton_inverse(A: Matrix) -> Matrix:
    S: SeriesRing = A.ring  # type: ignore[assignment]
    n = A.nrows
    A0 = A.map(lambda s: s[0], ring=S.base)
    try:
        X0 = mat_inverse(A0)
    except SingularMatrix as exc:
        raise NoUnitPivot("constant-term matrix is singular") from exc
    X = X0.map(S.constant, ring=S)
    two_eye = Matrix.identity(S, n).map(lambda s: S.add(s, s))
    prec = 1
    while prec < S.size:
        X = mat_mul(X, mat_sub(two_eye, mat_mul(A, X)))
        prec *= 2
    return X


def cofactor_det(A: Matrix):
    """Laplace expansion along rows, memoized on the set of remaining columns.

    Uses only ring additions and multiplications, so it is valid over any
    commutative ring. O(n 2^n) work.
    """
    if not A.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    R = A.ring
    n = A.nrows
    if n == 0:
        return R.one
    rows = A.rows
    memo: dict[int, object] = {}

    def minor(cols: int):
        # cols: bitmask of available columns; the current row is n - popcount(cols).
        if cols in memo:
            return memo[cols]
        i = n - bin(cols).count("1")
        if i == n - 1:
            j = cols.bit_length() - 1
            val = rows[i][j]
        else:
            val = R.zero
            sign = 0
            for j in range(n):
                if cols >> j & 1:
                    a = rows[i][j]
                    if not R.is_zero(a):
                        term = R.mul(a, minor(cols & ~(1 << j)))
                        val = R.sub(val, term) if sign else R.add(val, term)
                    sign ^= 1
        memo[cols] = val
        return val

    return minor((1 << n) - 1)


def delete_row_col(A: Matrix, i: int, j: int) -> Matrix:
    return Matrix(A.ring, tuple(r[:j] + r[j + 1 :] for k, r in enumerate(A.rows) if k != i))


def adjugate_oracle(A: Matrix) -> Matrix:
    """Adjugate from signed minors: entry (j, i) is (-1)^(i+j) det(A without row i, column j).

    Minors use det_gauss over fields and cofactor expansion otherwise.
    """
    if not A.is_square():
        raise DimensionMismatch("adjugate of a non-square matrix")
    R = A.ring
    n = A.nrows
    if n == 1:
        return Matrix(R, ((R.one,),))
    det = det_gauss if R.is_field else cofactor_det
    out = [[R.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            m = det(delete_row_col(A, i, j))
            out[j][i] = R.neg(m) if (i + j) % 2 else m
    return Matrix(R, tuple(tuple(r) for r in out))


def scalar_matrix(ring: Ring, c, n: int) -> Matrix:
    zero = ring.zero
    return Matrix(ring, tuple(tuple(c if i == j else zero for j in range(n)) for i in range(n)))


def is_invertible(A: Matrix) -> bool:
    try:
        mat_inverse(A)
    except (SingularMatrix, NoUnitPivot, NotInvertible):
        return False
    return True
