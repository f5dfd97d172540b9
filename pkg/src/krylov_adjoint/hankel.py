"""Hankel matrices of a scalar sequence, anti-diagonal sums, and the sequence minimal polynomial."""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionMismatch, NoUnitPivot, NotInvertible, SingularHankel, SingularMatrix
from .linalg import Matrix, solve
from .rings import Ring


def build_hankel(ring: Ring, h: Sequence, shift: int = 0, n: int | None = None) -> Matrix:
    """n x n matrix with entry (i, j) = h[i + j + shift] (0-based i, j).

    ``n`` defaults to ``len(h) // 2``.
    """
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    n = len(h) // 2 if n is None else n
    if len(h) < 2 * n - 1 + shift:
        raise DimensionMismatch(f"sequence of length {len(h)} too short for a {n}x{n} Hankel matrix")
    return Matrix(ring, tuple(tuple(h[i + j + shift] for j in range(n)) for i in range(n)))


def hankel_pair(ring: Ring, h: Sequence) -> tuple[Matrix, Matrix]:
    return build_hankel(ring, h, 0), build_hankel(ring, h, 1)


def phi_sums(M: Matrix) -> tuple:
    """Anti-diagonal sums: element k is the sum of M[i][j] over i + j = k, for k = 0..2n-2."""
    R = M.ring
    n = M.nrows
    return tuple(
        R.sum(M.rows[i][k - i] for i in range(max(0, k - n + 1), min(k, n - 1) + 1))
        for k in range(2 * n - 1)
    )


def phi(sums: Sequence, k: int, ring: Ring):
    """Anti-diagonal sum with the out-of-range convention (empty sum is zero)."""
    return sums[k] if 0 <= k < len(sums) else ring.zero


def minpoly_from_sequence(ring: Ring, h: Sequence) -> tuple:
    """Monic generator of degree n of a sequence of length 2n.

    Returns coefficients (c_0, ..., c_{n-1}, 1), lowest degree first, where
    (c_0..c_{n-1}) solves H c = -(h_n, ..., h_{2n-1}). A degree-n generator
    exists uniquely exactly when H is invertible; otherwise SingularHankel.
    """
    if len(h) % 2:
        raise DimensionMismatch("sequence length must be even (2n)")
    n = len(h) // 2
    H = build_hankel(ring, h, 0)
    rhs = tuple(ring.neg(x) for x in h[n:])
    try:
        c = solve(H, rhs)
    except (SingularMatrix, NoUnitPivot, NotInvertible) as exc:
        raise SingularHankel(f"Hankel system of order {n} is not uniquely solvable") from exc
    return c + (ring.one,)
