"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--grid-res 0.01] [--starts 64] [--repeat 3]

Compilation is excluded: each backend runs once before timing.
"""
import argparse
import time

import numpy as np

from ivpmopt import fixture_path, load_reduced, penalty_remodel
from ivpmopt.kernels import as_arrays, get_backend
from ivpmopt.oracle import GridSpec, grid_search
from ivpmopt.solver import solve_qp


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-res", type=float, default=0.01)
    ap.add_argument("--starts", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    r = load_reduced(fixture_path("ex2_reference.json"))
    pp = penalty_remodel(r)
    arrays = as_arrays(r)
    Q, b, k, A, c, e, s, lo, hi = arrays
    rng = np.random.default_rng(0)
    x0s = rng.uniform(lo, hi, (200, r.n))

    cases = {
        f"grid_search res={args.grid_res}": lambda be: grid_search(r, GridSpec(args.grid_res), backend=be),
        "coordinate_search x200": lambda be: [
            be.coordinate_search(x.copy(), Q, b, k, A, c, e, s, lo, hi, 5000, 1e-13) for x in x0s],
        f"solve_qp starts={args.starts}": lambda be: solve_qp(pp, starts=args.starts, backend=be),
    }
    print(f"{'kernel':<28} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for label, fn in cases.items():
        row = []
        for name in ("numpy", "numba"):
            be = get_backend(name)
            fn(be)
            row.append(best_time(lambda: fn(be), args.repeat))
        print(f"{label:<28} {row[0]:>10.4f} {row[1]:>10.4f} {row[0] / row[1]:>7.1f}x")


if __name__ == "__main__":
    main()
