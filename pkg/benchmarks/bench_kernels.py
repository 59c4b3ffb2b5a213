"""Compare the numba and pure-numpy transfer-matrix kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--segments 64] [--batch 2000] [--repeat 5]

Reports the best-of-``repeat`` wall time for a single long stack and for a
batch of equally long stacks, and checks that both back ends agree.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hartman import _kernels


def _best(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_batch(n_stacks: int, n_segments: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    V = rng.uniform(0, 5, (n_stacks, n_segments)) + 1j * rng.uniform(-2, 2, (n_stacks, n_segments))
    w = rng.uniform(0.05, 2.0, (n_stacks, n_segments))
    x0 = np.concatenate([np.zeros((n_stacks, 1)), np.cumsum(w, axis=1)[:, :-1]], axis=1)
    k = rng.uniform(0.2, 2.0, n_stacks)
    return V, w, x0, k


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--segments", type=int, default=64)
    ap.add_argument("--batch", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    V, w, x0, k = make_batch(args.batch, args.segments)
    v1, w1, x1, k1 = V[0].copy(), w[0].copy(), x0[0].copy(), float(k[0])

    print(f"numba available: {_kernels.HAS_NUMBA}  (default backend: {_kernels.BACKEND})")
    # warm up (JIT compilation is excluded from the timings)
    _kernels.stack_product_numba(v1, w1, x1, k1)
    _kernels.batch_stack_product_numba(V[:2], w[:2], x0[:2], k[:2])

    rows = [
        ("single stack", lambda: _kernels.stack_product_numba(v1, w1, x1, k1),
         lambda: _kernels.stack_product_numpy(v1, w1, x1, k1)),
        (f"batch of {args.batch}", lambda: _kernels.batch_stack_product_numba(V, w, x0, k),
         lambda: _kernels.batch_stack_product_numpy(V, w, x0, k)),
    ]
    print(f"{'case':<18s} {'numba [s]':>12s} {'numpy [s]':>12s} {'ratio':>8s}")
    for name, f_nb, f_np in rows:
        t_nb, t_np = _best(f_nb, args.repeat), _best(f_np, args.repeat)
        print(f"{name:<18s} {t_nb:12.3e} {t_np:12.3e} {t_np / t_nb:8.1f}")

    m_nb, e_nb = _kernels.batch_stack_product_numba(V, w, x0, k)
    m_np, e_np = _kernels.batch_stack_product_numpy(V, w, x0, k)
    scale = np.ldexp(1.0, (e_nb - e_np).astype(int))[:, None, None]
    diff = np.max(np.abs(m_nb * scale - m_np) / np.max(np.abs(m_np), axis=(1, 2))[:, None, None])
    print(f"max relative difference between back ends: {diff:.2e}")


if __name__ == "__main__":
    main()
