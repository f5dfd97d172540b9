"""Per-stage wall time and ring multiplication counts of the forward and reverse passes."""

from __future__ import annotations

import json
import random
import time

from .adjoint_reverse import assemble_DH, diff_step1, diff_step2, diff_step3, diff_step4, diff_step5
from .errors import SingularHankel
from .hankel import minpoly_from_sequence
from .krylov_det import (
    DetTrace,
    baby_giant_params,
    baby_steps,
    giant_steps,
    krylov_sequence,
    power_with_tape,
    random_projections,
    ratio_from_sequence,
)
from .linalg import Matrix
from .rings import Ring


class _Stopwatch:
    def __init__(self, ring: Ring):
        self.ring = ring
        self.rows: dict[str, dict] = {}

    def __call__(self, name, fn, *args):
        c0, t0 = self.ring.mul_count, time.perf_counter()
        out = fn(*args)
        self.rows[name] = {
            "seconds": round(time.perf_counter() - t0, 6),
            "mults": self.ring.mul_count - c0,
        }
        return out


def bench_one(ring: Ring, n: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    A = Matrix(ring, tuple(tuple(ring.random(rng) for _ in range(n)) for _ in range(n)))
    p = baby_giant_params(n)
    while True:
        u, v = random_projections(ring, n, rng)
        sw = _Stopwatch(ring)
        baby = sw("forward_step1", baby_steps, A, v, p.r)
        B, tape = sw("forward_step2", power_with_tape, A, p.r)
        giant = sw("forward_step3", giant_steps, u, B, p.s)
        h = sw("forward_step4", krylov_sequence, ring, giant, baby, n)
        try:
            delta, det_H, det_HA, H, H_A = sw("forward_step5", ratio_from_sequence, ring, h)
        except SingularHankel:
            continue
        break
    f = minpoly_from_sequence(ring, h)
    trace = DetTrace(A, u, v, p, baby, B, tape, giant, h, H, H_A, det_H, det_HA, delta, f)
    dh = sw("reverse_step5", diff_step5, trace)
    DH = assemble_DH(ring, dh, p.r, p.s, n)
    dv, du = sw("reverse_step4", diff_step4, trace, DH)
    dB = sw("reverse_step3", diff_step3, trace, du)
    dA = sw("reverse_step2", diff_step2, tape, dB)
    sw("reverse_step1", diff_step1, trace, dv, dA)
    tape_len = len(tape)
    step2 = sw.rows["reverse_step2"]["mults"]
    return {
        "n": n,
        "r": p.r,
        "s": p.s,
        "tape_length": tape_len,
        "stages": sw.rows,
        "step2_ratio": step2 / (n**3 * tape_len) if tape_len else 0.0,
    }


def run_bench(ring: Ring, sizes, seed: int = 0, as_json: bool = False) -> str:
    results = [bench_one(ring, n, seed) for n in sizes]
    if as_json:
        return json.dumps({"field": repr(ring), "seed": seed, "results": results})
    lines = [f"field {ring!r}, seed {seed}"]
    for res in results:
        lines.append(
            f"n={res['n']} r={res['r']} s={res['s']} tape={res['tape_length']} "
            f"reverse step2 mults / (n^3 * tape) = {res['step2_ratio']:.3f}"
        )
        for name, row in res["stages"].items():
            lines.append(f"  {name:<14} {row['seconds']:>10.4f} s {row['mults']:>12d} mults")
    return "\n".join(lines)
