"""Property suites for every module, runnable as ``krylov-adjoint selftest``.

Each check raises AssertionError on failure. The runner prints one line per
check and returns a nonzero exit code if any failed.
"""

from __future__ import annotations

import random
import sys
import time
from typing import Callable

from . import dual_oracle
from .adjoint_reverse import adjoint, check_adjugate
from .bench import bench_one
from .division_free import adjoint_division_free, conservative_schedule, det_division_free
from .errors import SingularHankel
from .fixtures import companion, integer_fixtures, random_matrix, singular_nonderogatory
from .hankel import minpoly_from_sequence
from .krylov_det import determinant, forward_with_retries, replay_matches, sign_check
from .linalg import Matrix, adjugate_oracle, cofactor_det, det_gauss, mat_inverse, mat_mul, scalar_matrix
from .polymatrix import invert_series_matrix, newton_inverse_oracle
from .rings import DualRing, Integers, PrimeField, SeriesRing, division_violations

P = 10007


def check_ring_axioms(rng):
    F = PrimeField(P)
    domains = [F, Integers(), SeriesRing(F, 4), SeriesRing(Integers(), 3), DualRing(F)]
    for R in domains:
        for _ in range(200):
            a, b, c = R.random(rng), R.random(rng), R.random(rng)
            assert R.add(a, b) == R.add(b, a)
            assert R.mul(a, b) == R.mul(b, a)
            assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
            assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
            assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
            assert R.sub(R.add(a, b), b) == a
            assert R.mul(a, R.one) == a


def check_series_reciprocal(rng):
    F = PrimeField(P)
    for _ in range(1000):
        S = SeriesRing(F, rng.randint(0, 12))
        a = S.random(rng)
        if a[0] == 0:
            a = (1,) + a[1:]
        assert S.mul(S.reciprocal(a), a) == S.one


def check_partial_evaluation(rng):
    Z = Integers()
    for _ in range(1000):
        S = SeriesRing(Z, rng.randint(0, 10))
        a = S.random(rng)
        m = rng.randint(0, S.order)
        assert S.eval_at_one(S.partial_evaluate(a, m)) == S.eval_at_one(a)


def check_dual_derivatives(rng):
    F = PrimeField(P)
    D = DualRing(F)
    for _ in range(200):
        x = rng.randrange(1, P)
        # g(t) = 3t^3 - t + 5, g'(t) = 9t^2 - 1
        t = D.make(x, 1)
        g = D.add(D.sub(D.mul(D.from_int(3), D.mul(t, D.mul(t, t))), t), D.from_int(5))
        assert g[1] == (9 * x * x - 1) % P
        # 1/t has derivative -1/t^2
        assert D.inv(t)[1] == (-pow(x, -2, P)) % P


def check_adjugate_oracle(rng):
    F = PrimeField(P)
    for k in range(200):
        n = rng.randint(1, 8)
        A = random_matrix(F, n, rng)
        if k % 4 == 0 and n > 1:
            A = Matrix(F, A.rows[:-1] + (A.rows[0],))
        adj = adjugate_oracle(A)
        d = det_gauss(A)
        assert mat_mul(A, adj) == scalar_matrix(F, d, n)


def check_det_multiplicative(rng):
    F = PrimeField(P)
    for _ in range(100):
        n = rng.randint(1, 6)
        X, Y = random_matrix(F, n, rng), random_matrix(F, n, rng)
        assert det_gauss(mat_mul(X, Y)) == F.mul(det_gauss(X), det_gauss(Y))


def check_series_matrix_inverse(rng):
    F = PrimeField(7)
    for _ in range(50):
        S = SeriesRing(F, rng.randint(0, 8))
        n = rng.randint(1, 4)
        A = random_matrix(S, n, rng)
        try:
            X = mat_inverse(A)
        except ArithmeticError:
            continue
        assert mat_mul(A, X) == Matrix.identity(S, n)


def check_hankel_companion(rng):
    F = PrimeField(P)
    for _ in range(50):
        n = rng.randint(1, 12)
        g = [F.random(rng) for _ in range(n)]
        C = companion(F, g)
        e1 = (1,) + (0,) * (n - 1)
        h, w = [], e1
        for _ in range(2 * n):
            h.append(w[0])
            w = tuple(F.dot(row, w) for row in C.rows)
        assert minpoly_from_sequence(F, h) == tuple(g) + (1,)


def check_determinant(rng):
    F = PrimeField(P)
    for k in range(200):
        n = rng.randint(2, 30)
        A = singular_nonderogatory(F, n, rng) if k % 5 == 0 else random_matrix(F, n, rng)
        assert determinant(A, seed=k) == det_gauss(A)
        trace, _ = forward_with_retries(A, k)
        assert sign_check(trace)
        assert trace.det_HA == F.mul(det_gauss(A), trace.det_H)
        if k % 20 == 0:
            assert replay_matches(trace)


def check_adjoint_field(rng):
    F = PrimeField(P)
    for k in range(200):
        n = rng.randint(2, 30)
        A = random_matrix(F, n, rng)
        res = adjoint(A, seed=k)
        assert check_adjugate(A, res.adjugate, res.det)
        if n <= 8:
            assert res.adjugate == adjugate_oracle(A)


def check_gradients(rng):
    F = PrimeField(P)
    from .adjoint_reverse import assemble_DH, diff_step1, diff_step2, diff_step3, diff_step4, diff_step5

    for k in range(100):
        n = rng.randint(1, 6)
        A = random_matrix(F, n, rng)
        tr, _ = forward_with_retries(A, k)
        dh = diff_step5(tr)
        assert dh == dual_oracle.grad_h(tr)
        dv, du = diff_step4(tr, assemble_DH(F, dh, tr.r, tr.s, n))
        assert dv == dual_oracle.grad_baby(tr) and du == dual_oracle.grad_giant(tr)
        dB = diff_step3(tr, du)
        assert dB == dual_oracle.grad_B(tr)
        d2 = diff_step2(tr.tape, dB)
        assert d2 == dual_oracle.grad_A_through_power(tr)
        assert diff_step1(tr, dv, d2) == dual_oracle.grad_A(A, tr.u, tr.v)


def _division_free_cases(rng):
    Z = Integers()
    for n in range(1, 11):
        yield from integer_fixtures(n, rng).values()
    for _ in range(100):
        yield random_matrix(Z, rng.randint(1, 10), rng)


def check_division_free(rng):
    for A in _division_free_cases(rng):
        before = division_violations()
        res = adjoint_division_free(A)
        assert res.det == cofactor_det(A) == det_division_free(A)
        assert res.adjugate == adjugate_oracle(A)
        assert division_violations() == before
        assert res.division_violations == 0
        opt = adjoint_division_free(A, conservative_schedule(A.nrows))
        assert opt.adjugate == res.adjugate and opt.det == res.det


def check_degenerate(rng):
    F = PrimeField(P)
    for n in range(2, 8):
        try:
            adjoint(Matrix.identity(F, n), seed=n)
        except SingularHankel:
            pass
        else:
            raise AssertionError("identity should be rejected in field mode")
        assert adjoint_division_free(Matrix.identity(F, n)).adjugate == Matrix.identity(F, n)


def check_cost_shape(rng):
    F = PrimeField(P)
    for n in (8, 16):
        assert bench_one(F, n, rng.randrange(1 << 30))["step2_ratio"] <= 4.0


def check_polymatrix(rng):
    F = PrimeField(7)
    for k in range(50):
        n, d = rng.randint(1, 4), rng.randint(0, 3)
        S = SeriesRing(F, rng.randint(d, 12))
        while True:
            A = Matrix(S, tuple(tuple(S.make([F.random(rng) for _ in range(d + 1)]) for _ in range(n)) for _ in range(n)))
            if det_gauss(A.map(lambda s: s[0], ring=F)):
                break
        inv = invert_series_matrix(A, seed=k).inverse
        assert inv == newton_inverse_oracle(A)
        assert mat_mul(A, inv) == Matrix.identity(S, n)


CHECKS: list[tuple[str, Callable]] = [
    ("rings: ring axioms", check_ring_axioms),
    ("rings: series reciprocal", check_series_reciprocal),
    ("rings: partial evaluation preserves value at 1", check_partial_evaluation),
    ("rings: dual-number derivatives", check_dual_derivatives),
    ("linalg: adjugate oracle identity", check_adjugate_oracle),
    ("linalg: determinant multiplicativity", check_det_multiplicative),
    ("linalg: series matrix inverse", check_series_matrix_inverse),
    ("hankel: companion minimal polynomial", check_hankel_companion),
    ("krylov_det: determinant, sign and ratio identities", check_determinant),
    ("adjoint_reverse: field-mode adjugate", check_adjoint_field),
    ("adjoint_reverse: stage gradients vs dual numbers", check_gradients),
    ("division_free: oracle agreement, zero divisions, partial evaluation", check_division_free),
    ("degenerate inputs", check_degenerate),
    ("cost shape of step-2 reversal", check_cost_shape),
    ("polymatrix: series inverse vs Newton", check_polymatrix),
]


def run_selftest(seed: int = 0, stream=None) -> int:
    stream = stream or sys.stdout
    failed = 0
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            fn(random.Random(seed))
        except Exception as exc:  # report every failure, keep going
            failed += 1
            print(f"FAIL {name}: {type(exc).__name__}: {exc}", file=stream)
        else:
            print(f"PASS {name} ({time.perf_counter() - t0:.1f}s)", file=stream)
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed", file=stream)
    return 1 if failed else 0
