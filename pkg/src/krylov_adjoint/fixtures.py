"""Seeded test-matrix generators shared by the self-test and the benchmarks."""

from __future__ import annotations

import random

from .linalg import Matrix, mat_inverse, mat_mul, is_invertible
from .rings import Integers, PrimeField, Ring


def random_matrix(ring: Ring, n: int, rng: random.Random, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return Matrix(ring, tuple(tuple(ring.random(rng) for _ in range(m)) for _ in range(n)))


def companion(ring: Ring, coeffs) -> Matrix:
    """Companion matrix of the monic polynomial lambda^n + c_{n-1} lambda^{n-1} + ... + c_0.

    Ones on the subdiagonal and -c in the last column, so C e_i = e_{i+1}.
    """
    n = len(coeffs)
    rows = [[ring.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = ring.one
    for i, c in enumerate(coeffs):
        rows[i][n - 1] = ring.neg(c)
    return Matrix(ring, tuple(tuple(r) for r in rows))


def random_invertible(F: PrimeField, n: int, rng: random.Random) -> Matrix:
    while True:
        P = random_matrix(F, n, rng)
        if is_invertible(P):
            return P


def singular_nonderogatory(F: PrimeField, n: int, rng: random.Random) -> Matrix:
    """P C P^-1 for the companion matrix C of a random polynomial with zero constant term."""
    coeffs = [F.zero] + [F.random(rng) for _ in range(n - 1)]
    P = random_invertible(F, n, rng)
    return mat_mul(mat_mul(P, companion(F, coeffs)), mat_inverse(P))


def integer_fixtures(n: int, rng: random.Random) -> dict[str, Matrix]:
    """Identity, zero, nilpotent shift, rank-1 and rank-(n-2) integer matrices."""
    Z = Integers()
    out = {
        "identity": Matrix.identity(Z, n),
        "zero": Matrix.zeros(Z, n),
        "nilpotent_shift": Matrix(
            Z, tuple(tuple(1 if j == i + 1 else 0 for j in range(n)) for i in range(n))
        ),
    }
    x = [Z.random(rng) for _ in range(n)]
    y = [Z.random(rng) for _ in range(n)]
    out["rank1"] = Matrix(Z, tuple(tuple(a * b for b in y) for a in x))
    if n >= 3:
        k = n - 2
        L = random_matrix(Z, n, rng, k)
        R = random_matrix(Z, k, rng, n)
        out["rank_n_minus_2"] = mat_mul(L, R)
    return out
