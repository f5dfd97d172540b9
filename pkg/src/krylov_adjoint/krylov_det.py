"""Baby-steps/giant-steps Krylov determinant with a recorded trace for the reverse pass."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CheckMismatch,
    DegenerateMinimalPolynomial,
    DimensionMismatch,
    NoUnitPivot,
    NotInvertible,
    SingularHankel,
)
from .hankel import build_hankel, minpoly_from_sequence
from .linalg import Matrix, det_gauss, mat_mul, mat_vec, vec_mat
from .rings import Ring

MAX_ATTEMPTS = 8
RNG_NAME = "python-random-mt19937"


@dataclass(frozen=True)
class BabyGiantParams:
    n: int
    r: int
    s: int


def baby_giant_params(n: int) -> BabyGiantParams:
    if n < 1:
        raise ValueError("dimension must be positive")
    s = math.isqrt(n - 1) + 1
    r = -(-2 * n // s)
    return BabyGiantParams(n, r, s)


@dataclass(frozen=True)
class PowerTape:
    """Binary-exponentiation chain for B = A^r.

    ``mats[0]`` is A; record (x, y, p) means mats[p] = mats[x] @ mats[y].
    The last matrix is B.
    """

    mats: tuple
    records: tuple

    @property
    def result(self) -> Matrix:
        return self.mats[-1]

    def __len__(self) -> int:
        return len(self.records)

    def replay(self, A: Matrix) -> Matrix:
        mats = [A]
        for x, y, _ in self.records:
            mats.append(mat_mul(mats[x], mats[y]))
        return mats[-1]


def power_with_tape(A: Matrix, r: int) -> tuple[Matrix, PowerTape]:
    """A^r by left-to-right square-and-multiply, recording every product."""
    if r < 1:
        raise ValueError("exponent must be >= 1")
    if not A.is_square():
        raise DimensionMismatch("power of a non-square matrix")
    mats = [A]
    records = []
    cur = 0
    for bit in bin(r)[3:]:
        mats.append(mat_mul(mats[cur], mats[cur]))
        records.append((cur, cur, len(mats) - 1))
        cur = len(mats) - 1
        if bit == "1":
            mats.append(mat_mul(mats[cur], A))
            records.append((cur, 0, len(mats) - 1))
            cur = len(mats) - 1
    tape = PowerTape(tuple(mats), tuple(records))
    return tape.result, tape


def baby_steps(A: Matrix, v: Sequence, r: int) -> tuple:
    vs = [tuple(v)]
    for _ in range(1, r):
        vs.append(mat_vec(A, vs[-1]))
    return tuple(vs)


def giant_steps(u: Sequence, B: Matrix, s: int) -> tuple:
    us = [tuple(u)]
    for _ in range(1, s):
        us.append(vec_mat(us[-1], B))
    return tuple(us)


def krylov_sequence(ring: Ring, us: Sequence, vs: Sequence, n: int) -> tuple:
    """h[i + j r] = u_j . v_i over the full r x s grid; only indices below 2n are kept."""
    r = len(vs)
    h = [None] * (2 * n)
    for j, uj in enumerate(us):
        for i, vi in enumerate(vs):
            val = ring.dot(uj, vi)
            k = i + j * r
            if k < 2 * n:
                h[k] = val
    return tuple(h)


def ratio_from_sequence(ring: Ring, h: Sequence):
    """det(H_A) / det(H) for the Hankel pair of h. Returns (delta, det_H, det_HA, H, H_A)."""
    H = build_hankel(ring, h, 0)
    H_A = build_hankel(ring, h, 1)
    try:
        det_H = det_gauss(H)
    except NoUnitPivot as exc:
        raise SingularHankel("Hankel matrix has no unit pivot") from exc
    if not ring.is_unit(det_H):
        raise SingularHankel("Hankel matrix is singular")
    det_HA = det_gauss(H_A)
    return ring.mul(det_HA, ring.inv(det_H)), det_H, det_HA, H, H_A


@dataclass(frozen=True)
class DetTrace:
    """Everything the forward pass computed, kept for the reverse pass."""

    A: Matrix
    u: tuple
    v: tuple
    params: BabyGiantParams
    baby: tuple
    B: Matrix
    tape: PowerTape
    giant: tuple
    h: tuple
    H: Matrix
    H_A: Matrix
    det_H: object
    det_HA: object
    delta: object
    minpoly: tuple

    @property
    def ring(self) -> Ring:
        return self.A.ring

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def s(self) -> int:
        return self.params.s


def det_forward(A: Matrix, u: Sequence, v: Sequence) -> DetTrace:
    """Steps 1-5 of the Krylov determinant for fixed projections u (row) and v (column)."""
    if not A.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = A.nrows
    if len(u) != n or len(v) != n:
        raise DimensionMismatch("projection vectors must have length n")
    R = A.ring
    params = baby_giant_params(n)
    baby = baby_steps(A, v, params.r)
    B, tape = power_with_tape(A, params.r)
    giant = giant_steps(u, B, params.s)
    h = krylov_sequence(R, giant, baby, n)
    delta, det_H, det_HA, H, H_A = ratio_from_sequence(R, h)
    f = minpoly_from_sequence(R, h)
    return DetTrace(A, tuple(u), tuple(v), params, baby, B, tape, giant, h, H, H_A, det_H, det_HA, delta, f)


def replay_matches(trace: DetTrace) -> bool:
    """Recompute Steps 1-4 from (A, u, v) and compare with the stored values."""
    p = trace.params
    baby = baby_steps(trace.A, trace.v, p.r)
    B = trace.tape.replay(trace.A)
    giant = giant_steps(trace.u, B, p.s)
    h = krylov_sequence(trace.ring, giant, baby, p.n)
    return baby == trace.baby and B == trace.B and giant == trace.giant and h == trace.h


def sign_check(trace: DetTrace) -> bool:
    """(-1)^n f(0) == delta."""
    R = trace.ring
    f0 = trace.minpoly[0]
    return (R.neg(f0) if trace.n % 2 else f0) == trace.delta


def random_projections(ring: Ring, n: int, rng: random.Random) -> tuple[tuple, tuple]:
    u = tuple(ring.random(rng) for _ in range(n))
    v = tuple(ring.random(rng) for _ in range(n))
    return u, v


def forward_with_retries(A: Matrix, seed: int) -> tuple[DetTrace, int]:
    """det_forward on seeded random projections, redrawing on SingularHankel.

    Returns the trace and the number of attempts used.
    """
    rng = random.Random(seed)
    n = A.nrows
    for attempt in range(1, MAX_ATTEMPTS + 1):
        u, v = random_projections(A.ring, n, rng)
        try:
            return det_forward(A, u, v), attempt
        except SingularHankel:
            continue
    raise DegenerateMinimalPolynomial(
        f"Hankel matrix singular for {MAX_ATTEMPTS} random projections; the matrix is most likely "
        "derogatory (minimal polynomial of degree < n). Use division-free mode, which handles any matrix."
    )


def determinant(A: Matrix, seed: int = 0):
    """Determinant over a field via randomized Krylov projections."""
    if not A.ring.is_field:
        raise TypeError("randomized Krylov determinant needs a field; use det_division_free")
    trace, _ = forward_with_retries(A, seed)
    if not sign_check(trace):
        raise CheckMismatch("(-1)^n f(0) disagrees with det(H_A)/det(H)")
    return trace.delta
