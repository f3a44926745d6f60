"""Time the numba kernels against their numpy twins on the same inputs.

    python3 benchmarks/bench_kernels.py --rows 200000 --repeat 5
"""

import argparse
import time

import numpy as np

from twistorlines import kernels, sampling
from twistorlines._accel import HAS_NUMBA


def make_inputs(n, seed):
    rng = np.random.default_rng(seed)
    d0, d1 = sampling.sphere_points(rng, n)
    a0, a1 = sampling.sphere_points(rng, n)
    x0, x1 = sampling.sphere_points(rng, n)
    y0, y1 = sampling.sphere_points(rng, n)
    t = sampling.log_uniform(rng, 0.5, 2.0, n) * sampling.phases(rng, n)
    t0, t1 = kernels.normalize_np(t, np.ones(n, dtype=np.complex128))
    chart = np.zeros(n, dtype=np.int64)
    return {
        "normalize": (x0 * 3.0, x1),
        "chordal": (x0, x1, y0, y1),
        "line_points": (d0, d1, a0, a1, t0, t1),
        "trajectory": (d0, d1, np.abs(t) ** 2, x0, x1),
        "solve_line": (x0, x1, y0, y1, t),
        "jacobian": (d0 / d1, a0 / a1, t, chart),
        "fiber_zero": (d0, d1, a0, a1),
        "solve_fiber_zero": (d0, d1, x0, x1, True),
    }


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def max_gap(a, b):
    if isinstance(a, tuple):
        return max(max_gap(u, v) for u, v in zip(a, b))
    both = np.isnan(a) & np.isnan(b)
    return float(np.max(np.where(both, 0.0, np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b))))))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    inputs = make_inputs(args.rows, args.seed)
    print(f"rows={args.rows} repeat={args.repeat} numba={'yes' if HAS_NUMBA else 'no'}")
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max rel diff':>13}")
    for name, a in inputs.items():
        f_np = getattr(kernels, name + "_np")
        t_np = best_of(f_np, a, args.repeat)
        if not HAS_NUMBA:
            print(f"{name:<18}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}{'-':>13}")
            continue
        f_nb = getattr(kernels, name + "_nb")
        f_nb(*a)  # compile (or load from cache) outside the timed region
        t_nb = best_of(f_nb, a, args.repeat)
        gap = max_gap(f_np(*a), f_nb(*a))
        print(f"{name:<18}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}{gap:>13.2e}")


if __name__ == "__main__":
    main()
