import random

import pytest

from krylov_adjoint.adjoint_reverse import adjoint
from krylov_adjoint.division_free import (
    adjoint_division_free,
    apply_partial_evaluation,
    build_Z,
    choose_projection,
    conservative_schedule,
    det_division_free,
    division_free_trace,
    zero_schedule,
)
from krylov_adjoint.errors import IndexOutOfRange, SingularHankel, WatermarkViolation
from krylov_adjoint.fixtures import integer_fixtures, random_matrix
from krylov_adjoint.hankel import build_hankel
from krylov_adjoint.linalg import Matrix, adjugate_oracle, cofactor_det, mat_mul, scalar_matrix
from krylov_adjoint.rings import Integers, SeriesRing, division_violations


def _at_zero(M):
    return M.map(lambda s: s[0], ring=M.ring.base)


@pytest.mark.parametrize(
    "n, C, h0, H0, HA0",
    [
        (1, [[1]], (1, 1), [[1]], [[1]]),
        (2, [[0, 1], [1, 0]], (1, 0, 1, 0), [[1, 0], [0, 1]], [[0, 1], [1, 0]]),
        (
            3,
            [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            (1, 0, 0, 1, 0, 0),
            [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
            [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        ),
    ],
)
def test_projection_examples(ZZ, n, C, h0, H0, HA0):
    proj = choose_projection(ZZ, n)
    assert proj.C == Matrix.from_ints(ZZ, C)
    assert proj.u == proj.v == (1,) + (0,) * (n - 1)
    tr = division_free_trace(Matrix.zeros(ZZ, n) if n > 1 else Matrix.from_ints(ZZ, [[5]]))
    assert tuple(x[0] for x in tr.h) == h0
    assert _at_zero(tr.H) == Matrix.from_ints(ZZ, H0)
    assert _at_zero(tr.H_A) == Matrix.from_ints(ZZ, HA0)


@pytest.mark.parametrize("n", range(1, 9))
def test_hankel_at_zero_is_permutation(ZZ, n):
    h0 = [1 if k % n == 0 else 0 for k in range(2 * n)]
    for shift in (0, 1):
        H = build_hankel(ZZ, h0, shift, n)
        assert all(sorted(row) == [0] * (n - 1) + [1] for row in H.rows)
        assert all(sorted(col) == [0] * (n - 1) + [1] for col in H.T.rows)


def test_choose_projection_rejects_empty(ZZ):
    with pytest.raises(ValueError):
        choose_projection(ZZ, 0)


def test_build_Z_one_by_one(ZZ):
    Z = build_Z(Matrix.from_ints(ZZ, [[7]]), Matrix.from_ints(ZZ, [[1]]))
    assert Z.rows == (((1, 6),),)


def test_build_Z_of_C_is_constant(ZZ):
    C = choose_projection(ZZ, 3).C
    Z = build_Z(C, C)
    assert all(s[1:] == (0,) * 3 for row in Z.rows for s in row)
    assert _at_zero(Z) == C


def test_build_Z_evaluates_to_A(ZZ, rng):
    A = random_matrix(ZZ, 3, rng)
    Z = build_Z(A, choose_projection(ZZ, 3).C)
    assert Z.ring.order == 3
    assert Z.map(Z.ring.eval_at_one, ring=ZZ) == A


@pytest.mark.parametrize(
    "rows, det",
    [([[1, 2], [3, 4]], -2), ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1), ([[1, 2], [2, 4]], 0)],
)
def test_det_examples(ZZ, rows, det):
    before = division_violations()
    assert det_division_free(Matrix.from_ints(ZZ, rows)) == det
    assert division_violations() == before


def test_adjoint_examples(ZZ):
    res = adjoint_division_free(Matrix.from_ints(ZZ, [[1, 2], [3, 4]]))
    assert res.adjugate == Matrix.from_ints(ZZ, [[4, -2], [-3, 1]])
    assert res.det == -2
    assert res.division_violations == 0
    assert adjoint_division_free(Matrix.zeros(ZZ, 3)).adjugate == Matrix.zeros(ZZ, 3)
    for n in (1, 2, 5):
        assert adjoint_division_free(Matrix.identity(ZZ, n)).adjugate == Matrix.identity(ZZ, n)


def test_delta_series_is_det_of_Z(ZZ, rng):
    for n in range(1, 6):
        A = random_matrix(ZZ, n, rng)
        tr = division_free_trace(A)
        # the same polynomial, computed by cofactor expansion over a longer truncation
        Z = build_Z(A, choose_projection(ZZ, n).C, order=2 * n)
        ref = cofactor_det(Z)
        assert tr.delta == ref[: n + 1]
        assert ref[n + 1 :] == (0,) * n


@pytest.mark.parametrize("n", range(1, 9))
def test_matches_cofactor_oracle(ZZ, n):
    rng = random.Random(n)
    cases = list(integer_fixtures(n, rng).values()) + [random_matrix(ZZ, n, rng) for _ in range(3)]
    for A in cases:
        res = adjoint_division_free(A)
        assert res.adjugate == adjugate_oracle(A)
        assert res.det == cofactor_det(A)
        assert mat_mul(A, res.adjugate) == scalar_matrix(ZZ, res.det, n)
        assert res.division_violations == 0


def test_works_over_series_base(ZZ, rng):
    S = SeriesRing(ZZ, 2)
    A = random_matrix(S, 3, rng)
    res = adjoint_division_free(A)
    assert res.adjugate == adjugate_oracle(A)
    assert res.det == cofactor_det(A)


def test_agrees_with_field_mode(F, rng):
    for k in range(10):
        A = random_matrix(F, rng.randint(2, 7), rng)
        df = adjoint_division_free(A)
        kr = adjoint(A, seed=k)
        assert df.adjugate == kr.adjugate and df.det == kr.det


def test_identity_field_mode_fails_division_free_succeeds(F):
    A = Matrix.identity(F, 4)
    with pytest.raises(SingularHankel):
        adjoint(A, seed=3)
    assert adjoint_division_free(A).adjugate == A


def test_zero_schedule_is_noop(ZZ, rng):
    A = random_matrix(ZZ, 4, rng)
    tr = division_free_trace(A)
    assert apply_partial_evaluation(tr, zero_schedule()["step5"]) is tr
    assert adjoint_division_free(A, zero_schedule()).adjugate == adjoint_division_free(A).adjugate


def test_conservative_schedule_identical(ZZ, rng):
    for n in (1, 2, 3, 5):
        A = random_matrix(ZZ, n, rng)
        plain = adjoint_division_free(A)
        opt = adjoint_division_free(A, conservative_schedule(n))
        assert opt.adjugate == plain.adjugate
        assert opt.det == plain.det


def test_collapse_keeps_value_at_one(ZZ, rng):
    A = random_matrix(ZZ, 3, rng)
    tr = division_free_trace(A)
    S = tr.ring
    out = apply_partial_evaluation(tr, {"delta": 2})
    assert S.eval_at_one(out.delta) == S.eval_at_one(tr.delta)


def test_aggressive_schedule_is_caught(ZZ, rng):
    A = random_matrix(ZZ, 3, rng)
    with pytest.raises(WatermarkViolation):
        adjoint_division_free(A, {"step3": {"B": 1}})


def test_partial_evaluation_rejects_bad_input(ZZ, rng):
    tr = division_free_trace(random_matrix(ZZ, 2, rng))
    with pytest.raises(KeyError):
        apply_partial_evaluation(tr, {"nonsense": 1})
    with pytest.raises(IndexOutOfRange):
        apply_partial_evaluation(tr, {"delta": 3})
