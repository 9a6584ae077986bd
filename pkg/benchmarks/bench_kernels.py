"""Time the JIT kernels against their pure-numpy fallbacks.

The numpy implementations are always importable (they are the fallback used
when ``SHARP_INEQ_DISABLE_NUMBA=1``); the dispatching wrappers use numba when
it is active.  Run with numba enabled to see both columns differ:

    python3 benchmarks/bench_kernels.py --window 4000 --ball 300 --reps 20

The first JIT call is excluded from timing (compilation is cached on disk,
but a cold cache would otherwise dominate the numbers).
"""

import argparse
import time

import numpy as np

from sharp_ineq import _kernels as K


def _time(fn, reps):
    fn()  # warmup / JIT
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def bench_ball_sums(rng, n_window, n_ball, reps):
    padded = rng.normal(size=n_window + 2 * n_ball)
    base = np.arange(n_ball, n_ball + n_window, dtype=np.int64)
    offs = rng.integers(-n_ball, n_ball, size=n_ball).astype(np.int64)
    w = np.ones(n_ball)
    jit = _time(lambda: K.ball_sums(padded, base, offs, w), reps)
    ref = _time(lambda: K._ball_sums_np(padded, base, offs, w), reps)
    return jit, ref


def bench_cone_eval(rng, n_points, reps):
    pts = rng.uniform(-4, 4, size=(n_points, 2))
    centers = rng.uniform(-2, 2, size=(5, 2))
    heights = rng.uniform(0.3, 1.5, size=5)
    empty = np.zeros(0)
    args = (pts, centers, heights, 1.1, K.OMEGA_POWER, 0.7, empty, empty)
    jit = _time(lambda: K.cone_eval(*args), reps)
    ref = _time(lambda: K._cone_eval_np(*args), reps)
    return jit, ref


def bench_holder_pairs(rng, n_points, reps):
    pts = rng.integers(-6, 7, size=(n_points, 2)).astype(np.float64)
    vals = rng.normal(size=n_points)
    empty = np.zeros(0)
    args = (vals, pts, K.OMEGA_POWER, 0.5, empty, empty)
    jit = _time(lambda: K.holder_pairs_max(*args), reps)
    ref = _time(lambda: K._holder_pairs_np(*args), reps)
    return jit, ref


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=20_000, help="window points for ball sums")
    ap.add_argument("--ball", type=int, default=200, help="ball offsets for ball sums")
    ap.add_argument("--points", type=int, default=50_000, help="batch size for cone eval")
    ap.add_argument("--pairs-n", type=int, default=1500, help="points for the pairwise sweep")
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active backend: {K.backend()}")
    rows = [
        ("ball_sums", *bench_ball_sums(rng, args.window, args.ball, args.reps)),
        ("cone_eval", *bench_cone_eval(rng, args.points, args.reps)),
        ("holder_pairs_max", *bench_holder_pairs(rng, args.pairs_n, args.reps)),
    ]
    print(f"{'kernel':<18}{'dispatch':>12}{'numpy':>12}{'speedup':>9}")
    for name, jit, ref in rows:
        print(f"{name:<18}{jit * 1e3:>10.3f}ms{ref * 1e3:>10.3f}ms{ref / jit:>8.1f}x")


if __name__ == "__main__":
    main()
