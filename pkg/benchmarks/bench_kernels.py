"""Benchmark the hot kernels on the numba and numpy backends.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 200,500,1000] [--repeats 5]

Prints a per-kernel table of best-of-N wall times and the speedup of
the jitted backend over the numpy one.  Compilation happens before any
timer starts, so the numbers reflect steady-state throughput.
"""

import argparse
import time

import numpy as np

from semgeo import kernels


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_case(n: int, repeats: int, backend: str) -> dict:
    kernels.set_backend(backend)
    rng = np.random.default_rng(0)
    x = rng.normal(size=(n, 64))
    d = kernels.pairwise_dists(x)
    eps = np.sort(d, axis=1)[:, 10].copy()
    y = rng.normal(size=(n, 2))
    p = np.abs(rng.normal(size=(n, n)))
    p = 0.5 * (p + p.T)
    p /= p.sum()
    d2 = (d[0] ** 2)[1:].copy()

    return {
        "pairwise_dists": best_of(lambda: kernels.pairwise_dists(x), repeats),
        "alpha_kernel": best_of(
            lambda: kernels.alpha_kernel(d, eps, 10.0), repeats),
        "smacof_step": best_of(lambda: kernels.smacof_step(y, d), repeats),
        "tsne_forces": best_of(lambda: kernels.tsne_forces(p, y), repeats),
        "entropy_row": best_of(
            lambda: kernels.entropy_row(d2, 1.0), repeats),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="200,500,1000",
                    help="comma-separated point counts")
    ap.add_argument("--repeats", type=int, default=5,
                    help="take the best of this many runs")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    backends = ["numpy"]
    if kernels.HAS_NUMBA:
        kernels.set_backend("numba")
        kernels.warmup()
        backends.insert(0, "numba")
    else:
        print("numba unavailable; timing the numpy backend only\n")

    for n in sizes:
        results = {b: bench_case(n, args.repeats, b) for b in backends}
        print(f"n = {n}")
        header = f"  {'kernel':<16}" + "".join(
            f"{b + ' (ms)':>14}" for b in backends)
        if len(backends) == 2:
            header += f"{'speedup':>10}"
        print(header)
        for name in results[backends[0]]:
            row = f"  {name:<16}"
            for b in backends:
                row += f"{results[b][name] * 1e3:>14.3f}"
            if len(backends) == 2:
                ratio = results["numpy"][name] / max(
                    results["numba"][name], 1e-12)
                row += f"{ratio:>9.1f}x"
            print(row)
        print()


if __name__ == "__main__":
    main()
