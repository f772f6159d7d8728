"""Compare the numba and numpy kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Numba timings exclude the first (compiling) call.
"""
import argparse
import timeit

import numpy as np

from multischmidt import kernels
from multischmidt._accel import HAVE_NUMBA
from multischmidt.tensor import random_state


def problem(dims, seed=0, batch=20_000):
    rng = np.random.default_rng(seed)
    ct = np.ascontiguousarray(random_state(dims, rng).data.conj().ravel())
    dv = np.array(dims, dtype=np.int64)
    Vb = np.zeros((batch, len(dims), max(dims)), dtype=np.complex128)
    for r, d in enumerate(dims):
        z = rng.standard_normal((batch, d)) + 1j * rng.standard_normal((batch, d))
        Vb[:, r, :d] = z / np.linalg.norm(z, axis=1, keepdims=True)
    return ct, dv, Vb


def bench(dims, repeat):
    ct, dv, Vb = problem(dims)
    free = np.ones(len(dims), dtype=np.bool_)
    rows = []
    for label, env, it, batch in [("numpy", kernels.env_np, kernels.iterate_np, kernels.batch_abs_overlap_np),
                                  ("numba", kernels.env_nb, kernels.iterate_nb, kernels.batch_abs_overlap_nb)]:
        if label == "numba" and not HAVE_NUMBA:
            continue
        V0 = Vb[0].copy()
        hist = np.zeros(200)
        env(ct, dv, V0, 0)
        it(ct, dv, V0.copy(), free, 2, 0.0, 1e-14, hist)
        batch(ct, dv, Vb[:2])
        t_env = min(timeit.repeat(lambda: env(ct, dv, V0, 0), number=200, repeat=repeat)) / 200
        t_it = min(timeit.repeat(lambda: it(ct, dv, V0.copy(), free, 200, 0.0, 1e-14, hist),
                                 number=5, repeat=repeat)) / 5
        t_b = min(timeit.repeat(lambda: batch(ct, dv, Vb), number=1, repeat=repeat))
        rows.append((label, t_env, t_it, t_b))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'dims':<14}{'backend':<8}{'env (us)':>12}{'200 sweeps (ms)':>18}{'20k overlaps (ms)':>20}")
    for dims in [(2, 2, 2), (3, 3, 3), (2, 3, 4), (2, 2, 2, 2), (4, 4, 4, 4)]:
        for label, a, b, c in bench(dims, args.repeat):
            print(f"{str(dims):<14}{label:<8}{a * 1e6:12.2f}{b * 1e3:18.3f}{c * 1e3:20.2f}")


if __name__ == "__main__":
    main()
