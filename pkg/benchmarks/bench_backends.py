"""Compare the compiled kernels against the pure-Python fallback.

Runs the same seeded workload through both backends, checks the outputs
are bitwise identical, and reports the speedup.  Usage:

    python benchmarks/bench_backends.py [--iters N] [--n ROWS] [--d COLS]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wsgd import _pure
from wsgd import _backend
from wsgd.problem import from_least_squares, stats
from wsgd.rng import derive_seed
from wsgd.sampling import build_alias
from wsgd.sgd import checkpoint_schedule
from wsgd.weights import PartialBias, build_weights


def make_workload(n: int, d: int, iters: int):
    state = derive_seed(2024, 0)
    x_true = np.empty(d)
    state = _pure.gaussian_fill(state, x_true, 0.0, 1.0)
    flat = np.empty(n * d)
    state = _pure.gaussian_fill(state, flat, 0.0, 1.0)
    a = flat.reshape(n, d)
    e = np.empty(n)
    state = _pure.gaussian_fill(state, e, 0.0, 0.5)
    b = a @ x_true + e

    prob = from_least_squares(a, b)
    st = stats(prob)
    table = build_weights(PartialBias(0.5), st.lipschitz, prob.source_probs)
    alias = build_alias(table.sampling_probs)
    inv_w = 1.0 / table.weights
    return (
        prob.z, prob.offsets, prob.scales, inv_w, alias.prob, alias.alias,
        prob.source_probs, np.zeros(d), st.x_star, 1.0 / (4.0 * st.sup_l),
        iters, checkpoint_schedule(iters), -1.0, -1.0, n, 77,
    )


def run_and_time(kernels, args, repeats: int):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kernels.run_weighted_quadratic(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--iters", type=int, default=200000)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _backend.BACKEND != "compiled":
        print("compiled backend unavailable; nothing to compare")
        return 1

    work = make_workload(args.n, args.d, args.iters)
    from wsgd import _core

    res_c, t_c = run_and_time(_core, work, args.repeats)
    # the pure loop is slow; one pass with a scaled-down workload is
    # enough for a stable per-iteration figure
    pure_iters = max(1, args.iters // 20)
    work_p = work[:10] + (pure_iters, checkpoint_schedule(pure_iters)) + work[12:]
    res_p, t_p = run_and_time(_pure, work_p, 1)
    res_c_small = _core.run_weighted_quadratic(*work_p)

    for got, want in zip(res_c_small, res_p):
        if isinstance(want, np.ndarray):
            assert np.array_equal(got, want), "backend outputs differ"
        else:
            assert got == want, "backend outputs differ"

    per_c = t_c / args.iters
    per_p = t_p / pure_iters
    print(f"workload: {args.n}x{args.d} system")
    print(f"compiled: {args.iters} iters in {t_c:.3f}s  ({per_c * 1e9:.1f} ns/iter)")
    print(f"pure:     {pure_iters} iters in {t_p:.3f}s  ({per_p * 1e9:.1f} ns/iter)")
    print(f"speedup:  {per_p / per_c:.1f}x  (outputs bitwise identical)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
