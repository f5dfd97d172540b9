"""Inversion of polynomial matrices over GF(p) modulo z^(N+1) through the adjugate pipeline."""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field

from .adjoint_reverse import reverse_pass
from .division_free import adjoint_division_free
from .errors import NoUnitPivot, SingularHankel, SingularLeadingMatrix, SingularMatrix
from .krylov_det import MAX_ATTEMPTS, det_forward
from .linalg import Matrix, det_gauss, mat_inverse, mat_scale
from .rings import PrimeField, SeriesRing

log = logging.getLogger(__name__)


class DegreeProfilingSeriesRing(SeriesRing):
    """Series ring that tallies (smaller, larger) operand degrees of every product."""

    def __init__(self, base, order):
        super().__init__(base, order)
        self.degree_pairs: Counter = Counter()

    def mul(self, a, b):
        da, db = self.degree(a), self.degree(b)
        self.degree_pairs[(min(da, db), max(da, db))] += 1
        return super().mul(a, b)


@dataclass
class SeriesInverse:
    inverse: Matrix
    adjugate: Matrix
    det: tuple
    route: str
    attempts: int = 0
    degree_pairs: Counter = field(default_factory=Counter)


def _leading_matrix(A: Matrix) -> Matrix:
    S: SeriesRing = A.ring  # type: ignore[assignment]
    return A.map(lambda s: s[0], ring=S.base)


def _check_series_field(A: Matrix) -> SeriesRing:
    S = A.ring
    if not isinstance(S, SeriesRing) or not isinstance(S.base, PrimeField):
        raise TypeError("expected a matrix over GF(p)[z]/(z^(N+1))")
    if not A.is_square():
        raise ValueError("matrix must be square")
    return S


def invert_series_matrix(A: Matrix, seed: int = 0, profile: bool = False) -> SeriesInverse:
    """A^-1 mod z^(N+1) as adj(A) / det(A), the adjugate coming from the reverse pass.

    The Krylov determinant is run directly over GF(p)[z]/(z^(N+1)) with random
    constant projections. If A(0) is derogatory no projection works; the
    division-free embedding is used instead, over the same series ring.
    """
    S = _check_series_field(A)
    F = S.base
    n = A.nrows
    if det_gauss(_leading_matrix(A)) == 0:
        raise SingularLeadingMatrix("A(0) is singular; A(z) has no power series inverse")

    if profile:
        S = DegreeProfilingSeriesRing(F, S.order)
        A = Matrix(S, A.rows)

    rng = random.Random(seed)
    for attempt in range(1, MAX_ATTEMPTS + 1):
        u = tuple(S.constant(F.random(rng)) for _ in range(n))
        v = tuple(S.constant(F.random(rng)) for _ in range(n))
        try:
            trace = det_forward(A, u, v)
        except SingularHankel:
            continue
        adj = reverse_pass(trace).dA.T
        det, route = trace.delta, "krylov"
        break
    else:
        attempt = MAX_ATTEMPTS
        res = adjoint_division_free(A)
        adj, det, route = res.adjugate, res.det, "division-free"

    inv = mat_scale(S.reciprocal(det), adj)
    pairs = getattr(S, "degree_pairs", Counter())
    if profile:
        for (lo, hi), count in sorted(pairs.items()):
            log.debug("series products with operand degrees (%d, %d): %d", lo, hi, count)
    plain = SeriesRing(F, S.order)
    return SeriesInverse(
        Matrix(plain, inv.rows), Matrix(plain, adj.rows), det, route, attempt, pairs
    )


def newton_inverse_oracle(A: Matrix) -> Matrix:
    """Independent check: Newton lifting X <- X (2I - A X) on coefficient matrices.

    Works on the matrix-polynomial representation sum_k A_k z^k with plain
    integer matrices mod p, sharing no code with the series-matrix routines.
    """
    S = _check_series_field(A)
    p = S.base.p
    n = A.nrows
    size = S.size
    coeffs = [[[A.rows[i][j][k] for j in range(n)] for i in range(n)] for k in range(size)]
    try:
        X0 = mat_inverse(_leading_matrix(A))
    except (SingularMatrix, NoUnitPivot) as exc:
        raise SingularLeadingMatrix("A(0) is singular") from exc

    def polymul(P, Q, prec):
        out = [[[0] * n for _ in range(n)] for _ in range(prec)]
        for a in range(min(prec, len(P))):
            Pa = P[a]
            for b in range(min(prec - a, len(Q))):
                Qb = Q[b]
                Oc = out[a + b]
                for i in range(n):
                    Pi = Pa[i]
                    Oi = Oc[i]
                    for t in range(n):
                        x = Pi[t]
                        if x:
                            Qt = Qb[t]
                            for j in range(n):
                                Oi[j] += x * Qt[j]
        return [[[x % p for x in row] for row in M] for M in out]

    X = [[list(r) for r in X0.rows]]
    prec = 1
    while prec < size:
        prec = min(2 * prec, size)
        AX = polymul(coeffs, X, prec)
        E = [[[(-x) % p for x in row] for row in M] for M in AX]
        for i in range(n):
            E[0][i][i] = (E[0][i][i] + 2) % p
        X = polymul(X, E, prec)
    X += [[[0] * n for _ in range(n)] for _ in range(size - len(X))]
    return Matrix(S, tuple(tuple(tuple(X[k][i][j] for k in range(size)) for j in range(n)) for i in range(n)))
