"""Command-line interface.

Exit codes: 0 success, 2 the randomized field-mode algorithm cannot handle the
input (singular Hankel / derogatory / singular matrix), 3 input or usage error,
4 an independent check disagreed (a bug).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .adjoint_reverse import adjoint
from .division_free import adjoint_division_free, conservative_schedule, det_division_free
from .errors import (
    CheckMismatch,
    DimensionError,
    KrylovAdjointError,
    NonInvertibleHA,
    ParseError,
    SingularHankel,
    SingularLeadingMatrix,
)
from .krylov_det import RNG_NAME, determinant
from .linalg import Matrix, adjugate_oracle, cofactor_det, det_gauss, mat_mul
from .polymatrix import invert_series_matrix, newton_inverse_oracle
from .rings import Integers, PrimeField, Ring, SeriesRing, division_violations

EXIT_OK = 0
EXIT_MATH = 2
EXIT_INPUT = 3
EXIT_CHECK = 4

COMMANDS = ("det", "adjoint", "inverse-series", "selftest", "bench")
MODES = ("krylov", "division-free", "oracle")


class UsageError(KrylovAdjointError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: str = "gf:10007"
    mode: str | None = None
    input: str | None = None
    seed: int = 0
    check: bool = False
    partial_eval: bool = False
    trunc: int | None = None
    json: bool = False
    sizes: tuple = (8, 16, 32, 64)

    def ring(self) -> Ring:
        return parse_field(self.field)

    def resolved_mode(self) -> str:
        if self.mode is not None:
            return self.mode
        return "division-free" if self.field == "int" else "krylov"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        ring = self.ring()
        mode = self.resolved_mode()
        if mode not in MODES:
            raise UsageError(f"unknown mode {mode!r}")
        if mode == "krylov" and not isinstance(ring, PrimeField):
            raise UsageError("--mode krylov needs --field gf:p; integers use division-free or oracle")
        if self.partial_eval and mode != "division-free":
            raise UsageError("--partial-eval applies to --mode division-free only")
        if self.command == "inverse-series" and not isinstance(ring, PrimeField):
            raise UsageError("inverse-series needs --field gf:p")
        if self.trunc is not None and self.trunc < 0:
            raise UsageError("--trunc must be non-negative")
        if self.command in ("det", "adjoint", "inverse-series") and not self.input:
            raise UsageError(f"{self.command} needs an input matrix file")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")


def parse_field(name: str) -> Ring:
    if name == "int":
        return Integers()
    m = re.fullmatch(r"gf:(\d+)", name)
    if not m:
        raise UsageError(f"field must be 'int' or 'gf:<prime>', got {name!r}")
    try:
        return PrimeField(int(m.group(1)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def read_matrix_text(text: str) -> list:
    """Parse the matrix file format into rows of coefficient lists (constant term first)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input", line=1)
    head = lines[0].split()
    if len(head) != 1 or not re.fullmatch(r"\d+", head[0]):
        raise ParseError("first line must be the dimension n", line=1, column=1)
    n = int(head[0])
    if n < 1:
        raise ParseError("dimension must be positive", line=1, column=1)
    if len(lines) - 1 != n:
        raise DimensionError(f"expected {n} matrix rows, found {len(lines) - 1}", line=len(lines))
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = list(re.finditer(r"\S+", line))
        if len(tokens) != n:
            raise DimensionError(f"expected {n} entries, found {len(tokens)}", line=lineno)
        row = []
        for tok in tokens:
            parts = tok.group().split(":")
            if not all(re.fullmatch(r"[+-]?\d+", p) for p in parts):
                raise ParseError(f"bad entry {tok.group()!r}", line=lineno, column=tok.start() + 1)
            row.append([int(p) for p in parts])
        rows.append(row)
    return rows


def parse_matrix_file(path: str | Path, ring: Ring, trunc: int | None = None) -> Matrix:
    """Read a matrix file; polynomial entries give a series matrix over ring[z]/(z^(trunc+1))."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    raw = read_matrix_text(text)
    is_poly = trunc is not None
    if not is_poly:
        for i, row in enumerate(raw):
            for entry in row:
                if len(entry) != 1:
                    raise ParseError("polynomial entry in a scalar matrix", line=i + 2)
        return Matrix(ring, tuple(tuple(ring.from_int(e[0]) for e in row) for row in raw))
    S = SeriesRing(ring, trunc)
    return Matrix(S, tuple(tuple(S.make([ring.from_int(c) for c in e]) for e in row) for row in raw))


def default_trunc(path: str | Path) -> int:
    raw = read_matrix_text(Path(path).read_text())
    n = len(raw)
    deg = max(len(e) - 1 for row in raw for e in row)
    return max(1, n * max(deg, 1))


def _render(result: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(result)
    lines = []
    for key, val in result.items():
        if isinstance(val, list):
            lines.append(f"{key}:")
            lines.extend("  " + " ".join(r) for r in val)
        elif isinstance(val, bool):
            lines.append(f"{key}: {str(val).lower()}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def _compute(cfg: RunConfig) -> dict:
    ring = cfg.ring()
    mode = cfg.resolved_mode()
    before = division_violations()

    if cfg.command == "inverse-series":
        return _compute_inverse(cfg, ring, mode)

    A = parse_matrix_file(cfg.input, ring)
    n = A.nrows
    schedule = conservative_schedule(n) if cfg.partial_eval else None
    out: dict = {"n": n, "mode": mode}
    adj = None
    if mode == "oracle":
        det = det_gauss(A) if ring.is_field else cofactor_det(A)
        if cfg.command == "adjoint":
            adj = adjugate_oracle(A)
    elif mode == "krylov":
        if cfg.command == "det":
            det = determinant(A, cfg.seed)
        else:
            res = adjoint(A, cfg.seed)
            det, adj = res.det, res.adjugate
    else:
        if cfg.command == "det":
            det = det_division_free(A)
        else:
            res = adjoint_division_free(A, schedule)
            det, adj = res.det, res.adjugate

    checked = False
    if cfg.check:
        det_ref = det_gauss(A) if ring.is_field else cofactor_det(A)
        if det_ref != det:
            raise CheckMismatch(f"determinant {ring.to_str(det)} != oracle {ring.to_str(det_ref)}")
        if adj is not None and adj != adjugate_oracle(A):
            raise CheckMismatch("adjugate disagrees with the signed-minor oracle")
        checked = True

    out["det"] = ring.to_str(det)
    if adj is not None:
        out["adjoint"] = adj.to_strings()
    out["division_violations"] = division_violations() - before
    out["seed"] = cfg.seed
    out["rng"] = RNG_NAME
    out["checked"] = checked
    return out


def _compute_inverse(cfg: RunConfig, ring: Ring, mode: str) -> dict:
    trunc = cfg.trunc if cfg.trunc is not None else default_trunc(cfg.input)
    A = parse_matrix_file(cfg.input, ring, trunc)
    S: SeriesRing = A.ring  # type: ignore[assignment]
    before = division_violations()
    det = None
    adj = None
    if mode == "oracle":
        inv = newton_inverse_oracle(A)
    elif mode == "krylov":
        res = invert_series_matrix(A, cfg.seed)
        inv, det, adj = res.inverse, res.det, res.adjugate
    else:
        A0 = A.map(lambda s: s[0], ring=ring)
        if det_gauss(A0) == 0:
            raise SingularLeadingMatrix("A(0) is singular; A(z) has no power series inverse")
        res = adjoint_division_free(A)
        det, adj = res.det, res.adjugate
        inv = adj.map(lambda x: S.mul(S.reciprocal(det), x))
    checked = False
    if cfg.check:
        if inv != newton_inverse_oracle(A) or mat_mul(A, inv) != Matrix.identity(S, A.nrows):
            raise CheckMismatch("series inverse disagrees with the Newton oracle")
        checked = True
    out: dict = {"n": A.nrows, "mode": mode, "trunc": trunc}
    if det is not None:
        out["det"] = S.to_str(det)
        out["adjoint"] = adj.to_strings()
    out["inverse"] = inv.to_strings()
    out["division_violations"] = division_violations() - before
    out["seed"] = cfg.seed
    out["rng"] = RNG_NAME
    out["checked"] = checked
    return out


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        if cfg.command == "selftest":
            from .selftest import run_selftest

            return run_selftest(seed=cfg.seed, stream=stdout)
        if cfg.command == "bench":
            from .bench import run_bench

            print(run_bench(cfg.ring(), cfg.sizes, seed=cfg.seed, as_json=cfg.json), file=stdout)
            return EXIT_OK
        result = _compute(cfg)
    except (SingularHankel, NonInvertibleHA) as exc:
        print(f"error: {exc}", file=stderr)
        if "division-free" not in str(exc):
            print("hint: retry with --mode division-free", file=stderr)
        return EXIT_MATH
    except CheckMismatch as exc:
        print(f"check failed: {exc}", file=stderr)
        return EXIT_CHECK
    except (UsageError, ParseError, SingularLeadingMatrix) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    print(_render(result, cfg.json), file=stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krylov-adjoint",
        description="Exact determinants, adjugates and series inverses via Krylov baby-steps/giant-steps.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="matrix file (det, adjoint, inverse-series)")
    parser.add_argument("--field", default="gf:10007", help="'gf:<prime>' or 'int' (default gf:10007)")
    parser.add_argument("--mode", choices=MODES, help="default: krylov for gf:p, division-free for int")
    parser.add_argument("--seed", type=int, default=0, help="seed for random projections (64-bit)")
    parser.add_argument("--check", action="store_true", help="verify against independent oracles")
    parser.add_argument("--partial-eval", action="store_true", help="enable conservative partial evaluation")
    parser.add_argument("--trunc", type=int, help="series truncation order N (inverse-series)")
    parser.add_argument("--json", action="store_true", help="structured output")
    parser.add_argument("--sizes", default="8,16,32,64", help="bench: comma-separated dimensions")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sizes = tuple(int(x) for x in args.sizes.split(",") if x)
    except ValueError:
        print("error: --sizes must be comma-separated integers", file=sys.stderr)
        return EXIT_INPUT
    cfg = RunConfig(
        command=args.command,
        field=args.field,
        mode=args.mode,
        input=args.input,
        seed=args.seed,
        check=args.check,
        partial_eval=args.partial_eval,
        trunc=args.trunc,
        json=args.json,
        sizes=sizes,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
