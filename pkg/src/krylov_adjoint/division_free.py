"""Determinant and adjugate over any commutative ring, without divisions.

The matrix A is embedded as Z(z) = C + z (A - C) with C the n-cycle permutation
and u = e_1, v = e_1. At z = 0 the projected sequence is u C^k v, which makes
both Hankel matrices permutation matrices, so the Krylov pipeline run over
R[z]/(z^(n+1)) only ever inverts series with constant term +-1. The results
are evaluated at z = 1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping

from .adjoint_reverse import STAGES, AdjointResult, reverse_pass
from .errors import IndexOutOfRange
from .krylov_det import DetTrace, PowerTape, det_forward
from .linalg import Matrix
from .rings import COLLAPSED, Ring, SeriesRing, division_violations

# Fields read only by the forward pass and Step 5 of the reverse pass.
STEP5_LEFTOVERS = ("h", "H", "H_A", "det_H", "det_HA", "minpoly")

Schedule = Mapping[str, Mapping[str, int]]


@dataclass(frozen=True)
class ProjectionChoice:
    C: Matrix
    u: tuple
    v: tuple


def choose_projection(ring: Ring, n: int) -> ProjectionChoice:
    """C e_i = e_{i+1}, C e_n = e_1; u = e_1^T, v = e_1."""
    if n < 1:
        raise ValueError("dimension must be positive")
    one, zero = ring.one, ring.zero
    C = Matrix(ring, tuple(tuple(one if i == (j + 1) % n else zero for j in range(n)) for i in range(n)))
    e1 = (one,) + (zero,) * (n - 1)
    return ProjectionChoice(C, e1, e1)


def build_Z(A: Matrix, C: Matrix, order: int | None = None) -> Matrix:
    """Series matrix C + z (A - C) modulo z^(order+1); order defaults to n."""
    if A.shape != C.shape:
        raise ValueError("A and C must have the same shape")
    R = A.ring
    S = SeriesRing(R, A.nrows if order is None else order)
    return Matrix(
        S,
        tuple(
            tuple(S.make((c, R.sub(a, c))) for a, c in zip(ra, rc))
            for ra, rc in zip(A.rows, C.rows)
        ),
    )


def division_free_trace(A: Matrix) -> DetTrace:
    n = A.nrows
    proj = choose_projection(A.ring, n)
    Z = build_Z(A, proj.C)
    S = Z.ring
    return det_forward(Z, tuple(map(S.constant, proj.u)), tuple(map(S.constant, proj.v)))


def det_division_free(A: Matrix):
    """det A over the base ring of A, as (det Z)(1)."""
    trace = division_free_trace(A)
    return trace.ring.eval_at_one(trace.delta)


def _collapse(S: SeriesRing, a, m: int):
    folded = S.partial_evaluate(a, m)
    return (COLLAPSED,) * m + folded[m:]


_FIELD_KINDS = {
    "A": "matrix", "B": "matrix", "H": "matrix", "H_A": "matrix", "tape": "tape",
    "u": "vector", "v": "vector", "h": "vector", "minpoly": "vector",
    "baby": "vectors", "giant": "vectors",
    "det_H": "scalar", "det_HA": "scalar", "delta": "scalar",
}


def _map_series(obj, kind: str, fn):
    if kind == "scalar":
        return fn(obj)
    if kind == "vector":
        return tuple(fn(x) for x in obj)
    if kind == "vectors":
        return tuple(tuple(fn(x) for x in vec) for vec in obj)
    if kind == "matrix":
        return obj.map(fn)
    return PowerTape(tuple(M.map(fn) for M in obj.mats), obj.records)


def apply_partial_evaluation(trace: DetTrace, watermarks: Mapping[str, int]) -> DetTrace:
    """Collapse the named trace fields below their watermark degree.

    Coefficients below the watermark are folded into the watermark slot (value
    at z = 1 is preserved) and the emptied slots are poisoned, so any later read
    raises WatermarkViolation.
    """
    S = trace.ring
    if not isinstance(S, SeriesRing):
        raise TypeError("partial evaluation applies to series traces only")
    changes = {}
    for name, m in watermarks.items():
        if name not in _FIELD_KINDS:
            raise KeyError(f"unknown trace field {name!r}")
        if not 0 <= m <= S.order:
            raise IndexOutOfRange(f"watermark {m} outside [0, {S.order}]")
        if m == 0:
            continue
        changes[name] = _map_series(getattr(trace, name), _FIELD_KINDS[name], lambda a, m=m: _collapse(S, a, m))
    return dataclasses.replace(trace, **changes) if changes else trace


def conservative_schedule(n: int) -> dict:
    """Collapse everything only Step 5 reads, fully (watermark n), once Step 5 is done."""
    return {"step4": {name: n for name in STEP5_LEFTOVERS}}


def zero_schedule() -> dict:
    return {stage: {name: 0 for name in _FIELD_KINDS} for stage in STAGES}


def adjoint_division_free(A: Matrix, schedule: Schedule | None = None) -> AdjointResult:
    """Adjugate over the base ring of A via the reverse pass on Z(z), evaluated at z = 1."""
    before = division_violations()
    trace = division_free_trace(A)
    S: SeriesRing = trace.ring  # type: ignore[assignment]

    hook = None
    if schedule:
        def hook(stage, tr):
            return apply_partial_evaluation(tr, schedule.get(stage, {}))

    rev = reverse_pass(trace, hook)
    adj = rev.dA.map(S.eval_at_one, ring=A.ring).T
    return AdjointResult(
        adjugate=adj,
        det=S.eval_at_one(trace.delta),
        mode="division-free",
        attempts=1,
        stage_mults=rev.stage_mults,
        division_violations=division_violations() - before,
        det_series=trace.delta,
    )
