"""Time the numba and pure-numpy kernel paths on LASAR/SELVAR-sized problems.

    python benchmarks/bench_kernels.py [--repeats N]

The end-to-end rows run each algorithm in a subprocess with
CAUSALRANK_DISABLE_NUMBA set to 0 and 1.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from causalrank import _kernels


def timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def kernel_rows(repeats):
    r = np.random.default_rng(0)
    X = r.standard_normal((500, 25))
    y = X[:, 0] - X[:, 7] + r.standard_normal(500)
    gram, xty = X.T @ X / 500, X.T @ y / 500

    def lasso(impl):
        def run():
            for lam in np.logspace(-1, -3, 10):
                impl(gram, xty, lam, np.zeros(25), 1e-6, 10_000)
        return run

    def loo(impl):
        def run():
            for p in range(1, 26):
                impl(X[:, :p], y)
        return run

    if not _kernels.NUMBA_AVAILABLE:
        print("numba not installed; only the numpy path is timed")
    # warm up the JIT
    if _kernels.NUMBA_AVAILABLE:
        lasso(_kernels.lasso_cd_numba)()
        loo(_kernels.loo_parts_numba)()
    rows = []
    for name, make, pair in [
        ("lasso_cd (10-lambda path, p=25)", lasso, (_kernels.lasso_cd_numpy, _kernels.lasso_cd_numba)),
        ("loo_parts (p=1..25, n=500)", loo, (_kernels.loo_parts_numpy, _kernels.loo_parts_numba)),
    ]:
        t_np = timeit(make(pair[0]), repeats)
        t_nb = timeit(make(pair[1]), repeats) if pair[1] is not None else float("nan")
        rows.append((name, t_np, t_nb))
    return rows


E2E = """
import time, numpy as np
from causalrank import datagen, algorithms
X, _ = datagen.sample_var(datagen.random_var(5, 0.3, seed=1), 500, seed=2)
algorithms.run_algorithm("{name}", X[:50])
t = time.perf_counter()
algorithms.run_algorithm("{name}", X)
print(time.perf_counter() - t)
"""


def e2e_rows():
    rows = []
    for name in ("lasar", "selvar"):
        times = []
        for flag in ("1", "0"):
            env = dict(os.environ, CAUSALRANK_DISABLE_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", E2E.format(name=name)], env=env,
                                 capture_output=True, text=True, check=True)
            times.append(float(out.stdout.strip()))
        rows.append((f"{name} end-to-end (d=5, T=500)", *times))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    rows = kernel_rows(args.repeats) + e2e_rows()
    print(f"{'case':<40} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<40} {t_np:>11.4f} {t_nb:>11.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
