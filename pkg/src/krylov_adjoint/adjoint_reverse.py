"""Hand-written reverse pass of the Krylov determinant: Steps 5 down to 1.

Each ``diff_stepK`` consumes gradients of the determinant with respect to the
outputs of Step K and returns gradients with respect to its inputs. Chained,
they give dA with dA[a][b] = d(det)/d(A[a][b]), and the adjugate is dA
transposed.

Orientation follows the forward pass: gradients of the baby vectors v_i
(columns) are stored as rows, gradients of the giant vectors u_j (rows) as
columns. All are plain tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import DimensionMismatch, NoUnitPivot, NonInvertibleHA, NotInvertible, SingularMatrix
from .hankel import phi, phi_sums
from .krylov_det import DetTrace, PowerTape, forward_with_retries
from .linalg import Matrix, mat_inverse, mat_mul
from .rings import Ring

STAGES = ("step5", "step4", "step3", "step2", "step1")


def diff_step5(trace: DetTrace) -> tuple:
    """Gradient of det(H_A)/det(H) with respect to h_0..h_{2n-1}.

    dh[k] = (phi_{k-1}(H_A^-1) - phi_k(H^-1)) * delta.
    """
    R = trace.ring
    try:
        H_inv = mat_inverse(trace.H)
    except (SingularMatrix, NoUnitPivot, NotInvertible) as exc:
        raise NonInvertibleHA("Hankel matrix H is not invertible") from exc
    try:
        HA_inv = mat_inverse(trace.H_A)
    except (SingularMatrix, NoUnitPivot, NotInvertible) as exc:
        raise NonInvertibleHA(
            "shifted Hankel matrix H_A is singular (det A = 0); field mode cannot differentiate "
            "through it. Use division-free mode, which handles singular matrices."
        ) from exc
    ph = phi_sums(H_inv)
    pha = phi_sums(HA_inv)
    delta = trace.delta
    return tuple(
        R.mul(R.sub(phi(pha, k - 1, R), phi(ph, k, R)), delta) for k in range(2 * trace.n)
    )


def assemble_DH(ring: Ring, dh: Sequence, r: int, s: int, n: int) -> Matrix:
    """r x s matrix with entry (i, j) = dh[i + j r], zero where i + j r >= 2n."""
    if len(dh) != 2 * n:
        raise DimensionMismatch(f"expected {2 * n} sequence derivatives, got {len(dh)}")
    zero = ring.zero
    return Matrix(
        ring,
        tuple(tuple(dh[i + j * r] if i + j * r < 2 * n else zero for j in range(s)) for i in range(r)),
    )


def diff_step4(trace: DetTrace, DH: Matrix) -> tuple[tuple, tuple]:
    """Rows dv_i = sum_j DH[i][j] u_j and columns du_j = sum_i v_i DH[i][j]."""
    R = trace.ring
    n = trace.n
    zero_vec = (R.zero,) * n
    dv = []
    for i in range(trace.r):
        acc = zero_vec
        for j, uj in enumerate(trace.giant):
            acc = R.axpy(DH.rows[i][j], uj, acc)
        dv.append(acc)
    du = []
    for j in range(trace.s):
        acc = zero_vec
        for i, vi in enumerate(trace.baby):
            acc = R.axpy(DH.rows[i][j], vi, acc)
        du.append(acc)
    return tuple(dv), tuple(du)


def _reverse_vecmat_rows(R: Ring, p: Sequence, M_rows: Sequence, dq: Sequence, dp: list, dM: list) -> None:
    # In place on dp (list) and dM (list of row tuples).
    dot = R.dot
    for a, row in enumerate(M_rows):
        dp[a] = R.add(dp[a], dot(row, dq))
    for a, pa in enumerate(p):
        dM[a] = R.axpy(pa, dq, dM[a])


def reverse_vecmat(p: Sequence, M: Matrix, dq: Sequence, dp: Sequence, dM: Matrix) -> tuple[tuple, Matrix]:
    """Adjoint of q = p M: returns (dp + M dq, dM + p^T dq^T)."""
    n = M.nrows
    if len(p) != n or len(dp) != n or len(dq) != M.ncols or dM.shape != M.shape:
        raise DimensionMismatch("inconsistent dimensions in reverse_vecmat")
    R = M.ring
    dp_out = list(dp)
    dM_rows = list(dM.rows)
    _reverse_vecmat_rows(R, p, M.rows, dq, dp_out, dM_rows)
    return tuple(dp_out), Matrix(R, tuple(dM_rows))


def diff_step3(trace: DetTrace, du: Sequence) -> Matrix:
    """Gradient with respect to B through u_j = u_{j-1} B, j = s-1 down to 1."""
    R = trace.ring
    n = trace.n
    g = [list(x) for x in du]
    dB = [(R.zero,) * n for _ in range(n)]
    B_rows = trace.B.rows
    for j in range(trace.s - 1, 0, -1):
        _reverse_vecmat_rows(R, trace.giant[j - 1], B_rows, g[j], g[j - 1], dB)
    return Matrix(R, tuple(dB))


def diff_step2(tape: PowerTape, dB: Matrix) -> Matrix:
    """Walk the exponentiation tape backwards; for P = X Y add G(P) Y^T to G(X), X^T G(P) to G(Y).

    Each record is decomposed into the n row products P[a] = X[a] Y and
    reversed with the vector-matrix rule.
    """
    R = dB.ring
    n = dB.nrows
    if not tape.records:
        return dB
    zero_row = (R.zero,) * n
    grads: list = [None] * len(tape.mats)
    grads[-1] = list(dB.rows)
    for x, y, p in reversed(tape.records):
        GP = grads[p]
        if GP is None:
            continue
        X_rows, Y_rows = tape.mats[x].rows, tape.mats[y].rows
        dX = [list(zero_row) for _ in range(n)]
        dY = [zero_row] * n
        for a in range(n):
            _reverse_vecmat_rows(R, X_rows[a], Y_rows, GP[a], dX[a], dY)
        # x and y coincide for squarings; accumulate one after the other.
        for idx, upd in ((x, dX), (y, dY)):
            if grads[idx] is None:
                grads[idx] = [tuple(r) for r in upd]
            else:
                grads[idx] = [tuple(map(R.add, g, u)) for g, u in zip(grads[idx], upd)]
    return Matrix(R, tuple(tuple(r) for r in grads[0]))


def diff_step1(trace: DetTrace, dv: Sequence, dA_in: Matrix) -> Matrix:
    """Gradient with respect to A through v_i = A v_{i-1}, i = r-1 down to 1, added to dA_in."""
    R = trace.ring
    w = [tuple(x) for x in dv]
    dA = list(dA_in.rows)
    A_rows = trace.A.rows
    A_cols = tuple(zip(*A_rows))
    for i in range(trace.r - 1, 0, -1):
        wi = w[i]
        prev = trace.baby[i - 1]
        for a in range(trace.n):
            dA[a] = R.axpy(wi[a], prev, dA[a])
        # w_{i-1} += w_i A
        dot = R.dot
        w[i - 1] = tuple(R.add(x, dot(wi, c)) for x, c in zip(w[i - 1], A_cols))
    return Matrix(R, tuple(dA))


StageHook = Callable[[str, DetTrace], DetTrace]


@dataclass
class ReverseResult:
    dA: Matrix
    stage_mults: dict = field(default_factory=dict)


def reverse_pass(trace: DetTrace, before_stage: StageHook | None = None) -> ReverseResult:
    """Run Steps 5..1 in order and record per-stage ring multiplication counts.

    ``before_stage`` may return a modified trace (used for partial evaluation).
    """
    R = trace.ring
    counts = {}

    def hook(stage):
        nonlocal trace
        if before_stage is not None:
            trace = before_stage(stage, trace)
        return R.mul_count

    c0 = hook("step5")
    dh = diff_step5(trace)
    DH = assemble_DH(R, dh, trace.r, trace.s, trace.n)
    counts["step5"] = R.mul_count - c0
    c0 = hook("step4")
    dv, du = diff_step4(trace, DH)
    counts["step4"] = R.mul_count - c0
    c0 = hook("step3")
    dB = diff_step3(trace, du)
    counts["step3"] = R.mul_count - c0
    c0 = hook("step2")
    dA = diff_step2(trace.tape, dB)
    counts["step2"] = R.mul_count - c0
    c0 = hook("step1")
    dA = diff_step1(trace, dv, dA)
    counts["step1"] = R.mul_count - c0
    return ReverseResult(dA, counts)


@dataclass
class AdjointResult:
    adjugate: Matrix
    det: object
    mode: str
    attempts: int = 1
    stage_mults: dict = field(default_factory=dict)
    division_violations: int = 0
    det_series: object = None


def adjoint(A: Matrix, seed: int = 0) -> AdjointResult:
    """Adjugate over a field by differentiating the randomized Krylov determinant."""
    if not A.ring.is_field:
        raise TypeError("field-mode adjoint needs a field; use adjoint_division_free")
    trace, attempts = forward_with_retries(A, seed)
    rev = reverse_pass(trace)
    return AdjointResult(rev.dA.T, trace.delta, "krylov", attempts, rev.stage_mults)


def check_adjugate(A: Matrix, adj: Matrix, det) -> bool:
    """A adj = adj A = det I."""
    R = A.ring
    n = A.nrows
    target = tuple(tuple(det if i == j else R.zero for j in range(n)) for i in range(n))
    return mat_mul(A, adj).rows == target and mat_mul(adj, A).rows == target
