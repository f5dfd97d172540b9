import json

import pytest

from krylov_adjoint.cli import RunConfig, UsageError, main, parse_field, parse_matrix_file, read_matrix_text
from krylov_adjoint.errors import DimensionError, ParseError
from krylov_adjoint.linalg import Matrix
from krylov_adjoint.rings import Integers, PrimeField, SeriesRing


@pytest.fixture
def write(tmp_path):
    def _write(text, name="m.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_examples(write):
    Z = Integers()
    assert parse_matrix_file(write("2\n1 2\n3 4\n"), Z) == Matrix.from_ints(Z, [[1, 2], [3, 4]])
    assert parse_matrix_file(write("1\n-5\n"), PrimeField(7)).rows == ((2,),)
    A = parse_matrix_file(write("2\n1:1 0:0\n0:0 1:1\n"), PrimeField(7), trunc=3)
    S = SeriesRing(PrimeField(7), 3)
    one_plus_z = S.make((1, 1))
    assert A == Matrix(S, ((one_plus_z, S.zero), (S.zero, one_plus_z)))


@pytest.mark.parametrize(
    "text, exc, where",
    [
        ("", ParseError, "line 1"),
        ("x\n1\n", ParseError, "line 1, column 1"),
        ("2\n1 2\n", DimensionError, "line 2"),
        ("2\n1 2 3\n3 4\n", DimensionError, "line 2"),
        ("2\n1 2\n3 4q\n", ParseError, "line 3, column 3"),
    ],
)
def test_parse_errors(text, exc, where):
    with pytest.raises(exc, match=where):
        read_matrix_text(text)


def test_polynomial_entry_in_scalar_file(write):
    with pytest.raises(ParseError):
        parse_matrix_file(write("1\n1:2\n"), Integers())


def test_parse_field():
    assert parse_field("int") == Integers()
    assert parse_field("gf:7") == PrimeField(7)
    for bad in ("gf:8", "gf:", "rational", "gf:2"):
        with pytest.raises(UsageError):
            parse_field(bad)


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig("det", field="int", mode="krylov", input="x").validate()
    with pytest.raises(UsageError):
        RunConfig("adjoint", mode="krylov", input="x", partial_eval=True).validate()
    with pytest.raises(UsageError):
        RunConfig("det").validate()
    assert RunConfig("det", field="int").resolved_mode() == "division-free"
    assert RunConfig("det").resolved_mode() == "krylov"


def test_swap_adjoint_json(capsys, write):
    path = write("2\n0 1\n1 0\n")
    code, out, _ = run_cli(capsys, "adjoint", path, "--field", "gf:7", "--mode", "krylov", "--seed", "1", "--check", "--json")
    assert code == 0
    res = json.loads(out)
    assert res["adjoint"] == [["0", "6"], ["6", "0"]]
    assert res["det"] == "6"
    assert res["checked"] is True
    assert res["division_violations"] == 0
    assert res["seed"] == 1


def test_int_det_division_free(capsys, write):
    code, out, _ = run_cli(capsys, "det", write("2\n1 2\n3 4\n"), "--field", "int", "--mode", "division-free", "--json")
    assert code == 0
    res = json.loads(out)
    assert res["det"] == "-2" and res["division_violations"] == 0
    assert "adjoint" not in res


def test_identity_krylov_exits_2(capsys, write):
    code, _, err = run_cli(capsys, "adjoint", write("3\n1 0 0\n0 1 0\n0 0 1\n"), "--field", "gf:7", "--mode", "krylov")
    assert code == 2
    assert "minimal polynomial" in err and "division-free" in err


def test_identity_division_free_text(capsys, write):
    code, out, _ = run_cli(capsys, "adjoint", write("3\n1 0 0\n0 1 0\n0 0 1\n"), "--field", "gf:7", "--mode", "division-free", "--partial-eval", "--check")
    assert code == 0
    assert "adjoint:\n  1 0 0\n  0 1 0\n  0 0 1" in out
    assert "checked: true" in out


def test_input_errors_exit_3(capsys, write):
    code, _, err = run_cli(capsys, "det", write("2\n1 2\n3 x\n"))
    assert code == 3 and "line 3, column 3" in err
    assert run_cli(capsys, "det", write("2\n1 2\n"))[0] == 3
    assert run_cli(capsys, "det", "/nonexistent/file")[0] == 3
    assert run_cli(capsys, "det", write("1\n1\n"), "--field", "gf:9")[0] == 3
    assert run_cli(capsys, "det", write("1\n1\n"), "--field", "int", "--mode", "krylov")[0] == 3


def test_oracle_mode_integers(capsys, write):
    code, out, _ = run_cli(capsys, "adjoint", write("2\n1 2\n3 4\n"), "--field", "int", "--mode", "oracle", "--json")
    assert code == 0
    assert json.loads(out)["adjoint"] == [["4", "-2"], ["-3", "1"]]


@pytest.mark.parametrize("mode", ["krylov", "division-free", "oracle"])
def test_inverse_series(capsys, write, mode):
    path = write("2\n1:1 0\n0 1:1\n")
    code, out, _ = run_cli(capsys, "inverse-series", path, "--field", "gf:7", "--trunc", "3", "--mode", mode, "--check", "--json")
    assert code == 0
    res = json.loads(out)
    assert res["trunc"] == 3
    assert res["inverse"] == [["1:6:1:6", "0:0:0:0"], ["0:0:0:0", "1:6:1:6"]]


def test_inverse_series_singular_leading(capsys, write):
    code, _, err = run_cli(capsys, "inverse-series", write("1\n0:1\n"), "--field", "gf:7")
    assert code == 3 and "singular" in err


def test_deterministic_output(capsys, write):
    path = write("4\n1 2 3 4\n5 6 7 8\n9 1 2 3\n4 5 6 8\n")
    runs = [run_cli(capsys, "adjoint", path, "--seed", "99", "--json")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["rng"] == "python-random-mt19937"


def test_bench_json(capsys):
    code, out, _ = run_cli(capsys, "bench", "--sizes", "4,8", "--json")
    assert code == 0
    res = json.loads(out)
    assert [r["n"] for r in res["results"]] == [4, 8]
    for r in res["results"]:
        assert set(r["stages"]) == {f"forward_step{i}" for i in range(1, 6)} | {f"reverse_step{i}" for i in range(1, 6)}
        assert r["step2_ratio"] <= 4


def test_bench_bad_sizes(capsys):
    assert run_cli(capsys, "bench", "--sizes", "4,x")[0] == 3


def test_check_mismatch_exits_4(capsys, write, monkeypatch):
    import krylov_adjoint.cli as cli

    monkeypatch.setattr(cli, "determinant", lambda A, seed: A.ring.from_int(1234))
    code, _, err = run_cli(capsys, "det", write("2\n1 2\n3 4\n"), "--check")
    assert code == 4 and "check failed" in err


def test_selftest_reports_failures(monkeypatch):
    import io

    from krylov_adjoint import selftest

    def broken(rng):
        raise AssertionError("boom")

    monkeypatch.setattr(selftest, "CHECKS", [("ok", lambda rng: None), ("broken", broken)])
    buf = io.StringIO()
    assert selftest.run_selftest(stream=buf) == 1
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("PASS ok") and lines[1].startswith("FAIL broken")
    assert lines[-1] == "1/2 checks passed"
