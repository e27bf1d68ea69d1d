"""Timing comparison of the jitted and pure-numpy grid kernels.

Runs the theorem-1 (k, m) and theorem-2 (k, p, q) rate grids at a few
problem sizes with both backends and prints a table.  The first numba
call pays JIT compilation; it is timed separately and excluded from the
steady-state numbers.

Usage: python3 benchmarks/bench_backends.py [--grid N] [--repeats R]
"""

import argparse
import time

import numpy as np

from decaycert import decompose, gen_random_valid
from decaycert._backend import HAS_NUMBA
from decaycert.constants import grid_matrices


def _grids(dec, grid):
    ks = np.geomspace(1e-3 * dec.beta, 0.999 * dec.beta, grid)
    ps = np.linspace(1e-6, 1.0 - 1e-6, grid)
    return ks, ps


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, grid, repeats):
    from decaycert import _kernels_numpy

    backends = {"numpy": _kernels_numpy}
    if HAS_NUMBA:
        from decaycert import _kernels_numba

        backends["numba"] = _kernels_numba
    else:
        print("numba not importable; timing the numpy backend only\n")

    header = f"{'kernel':<10} {'n':>4} {'grid':>5}"
    for name in backends:
        header += f" {name + ' [ms]':>12}"
    if len(backends) == 2:
        header += f" {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for n in sizes:
        dec = decompose(gen_random_valid(n, 1.0, 1.0, seed=0))
        gm = grid_matrices(dec)
        ks, ps = _grids(dec, grid)
        t1_args = (gm.D1, gm.G1, gm.G12, gm.G2, gm.B1, gm.B2, ks, ps)
        t2_args = (
            gm.B1, gm.B2, dec.a0, dec.delta, dec.norm_S, dec.norm_D2_dual,
            ks, ps, ps,
        )
        for kernel, args in (("theorem1", t1_args), ("theorem2", t2_args)):
            row = f"{kernel:<10} {n:>4} {grid:>5}"
            times = {}
            for name, mod in backends.items():
                fn = getattr(mod, f"{kernel}_rate_grid")
                if name == "numba":
                    t0 = time.perf_counter()
                    fn(*args)  # compilation pass
                    compile_s = time.perf_counter() - t0
                times[name] = _time(lambda: fn(*args), repeats)
                row += f" {times[name] * 1e3:>12.2f}"
            if len(times) == 2:
                row += f" {times['numpy'] / times['numba']:>7.2f}x"
            print(row)
    if HAS_NUMBA:
        print(f"\n(last numba compile took {compile_s:.1f}s, cached afterwards)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=48, help="grid points per axis")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats")
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=[5, 20, 50], help="problem sizes"
    )
    args = parser.parse_args()
    bench(args.sizes, args.grid, args.repeats)


if __name__ == "__main__":
    main()
