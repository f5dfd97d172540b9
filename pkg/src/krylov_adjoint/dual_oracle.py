"""Forward-mode (dual number) derivatives of the Krylov determinant.

Each function re-runs a suffix of the forward computation over
``base[eps]/(eps^2)`` with one input perturbed by eps and reads off the eps
coefficient of det(H_A)/det(H). These are independent of the reverse pass and
serve as oracles for every stage of it.
"""

from __future__ import annotations

from .krylov_det import (
    DetTrace,
    baby_giant_params,
    baby_steps,
    giant_steps,
    krylov_sequence,
    power_with_tape,
    ratio_from_sequence,
)
from .linalg import Matrix
from .rings import DualRing


def _lift_matrix(D: DualRing, M: Matrix, bump=None) -> Matrix:
    rows = [[D.lift(x) for x in row] for row in M.rows]
    if bump is not None:
        a, b = bump
        rows[a][b] = D.make(M.rows[a][b], D.base.one)
    return Matrix(D, tuple(tuple(r) for r in rows))


def _lift_vec(D: DualRing, x, bump=None):
    out = [D.lift(c) for c in x]
    if bump is not None:
        out[bump] = D.make(x[bump], D.base.one)
    return tuple(out)


def _eps(D: DualRing, h):
    return ratio_from_sequence(D, h)[0][1]


def grad_h(trace: DetTrace) -> tuple:
    """d delta / d h_k for every k, Step 5 only."""
    D = DualRing(trace.ring)
    out = []
    for k in range(2 * trace.n):
        h = [D.lift(x) for x in trace.h]
        h[k] = D.make(trace.h[k], D.base.one)
        out.append(_eps(D, h))
    return tuple(out)


def grad_baby(trace: DetTrace) -> tuple:
    """Rows d delta / d v_i[c], Steps 4-5 replayed."""
    D = DualRing(trace.ring)
    giant = tuple(_lift_vec(D, u) for u in trace.giant)
    out = []
    for i in range(trace.r):
        row = []
        for c in range(trace.n):
            baby = tuple(_lift_vec(D, v, c if k == i else None) for k, v in enumerate(trace.baby))
            row.append(_eps(D, krylov_sequence(D, giant, baby, trace.n)))
        out.append(tuple(row))
    return tuple(out)


def grad_giant(trace: DetTrace) -> tuple:
    """Columns d delta / d u_j[c], Steps 4-5 replayed."""
    D = DualRing(trace.ring)
    baby = tuple(_lift_vec(D, v) for v in trace.baby)
    out = []
    for j in range(trace.s):
        col = []
        for c in range(trace.n):
            giant = tuple(_lift_vec(D, u, c if k == j else None) for k, u in enumerate(trace.giant))
            col.append(_eps(D, krylov_sequence(D, giant, baby, trace.n)))
        out.append(tuple(col))
    return tuple(out)


def grad_B(trace: DetTrace) -> Matrix:
    """d delta / d B[a][b], Steps 3-5 replayed with the baby vectors fixed."""
    D = DualRing(trace.ring)
    n = trace.n
    baby = tuple(_lift_vec(D, v) for v in trace.baby)
    u0 = _lift_vec(D, trace.u)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            giant = giant_steps(u0, _lift_matrix(D, trace.B, (a, b)), trace.s)
            row.append(_eps(D, krylov_sequence(D, giant, baby, n)))
        rows.append(tuple(row))
    return Matrix(trace.ring, tuple(rows))


def grad_A_through_power(trace: DetTrace) -> Matrix:
    """d delta / d A[a][b] through B = A^r only (Steps 2-5), baby vectors fixed."""
    D = DualRing(trace.ring)
    n = trace.n
    baby = tuple(_lift_vec(D, v) for v in trace.baby)
    u0 = _lift_vec(D, trace.u)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            B, _ = power_with_tape(_lift_matrix(D, trace.A, (a, b)), trace.r)
            giant = giant_steps(u0, B, trace.s)
            row.append(_eps(D, krylov_sequence(D, giant, baby, n)))
        rows.append(tuple(row))
    return Matrix(trace.ring, tuple(rows))


def grad_A(A: Matrix, u, v) -> Matrix:
    """d delta / d A[a][b] through the whole forward pass."""
    D = DualRing(A.ring)
    n = A.nrows
    p = baby_giant_params(n)
    u0, v0 = _lift_vec(D, u), _lift_vec(D, v)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            Ad = _lift_matrix(D, A, (a, b))
            baby = baby_steps(Ad, v0, p.r)
            B, _ = power_with_tape(Ad, p.r)
            giant = giant_steps(u0, B, p.s)
            row.append(_eps(D, krylov_sequence(D, giant, baby, n)))
        rows.append(tuple(row))
    return Matrix(A.ring, tuple(rows))
