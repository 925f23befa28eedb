#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Usage: python benchmarks/bench_kernels.py [repeats]

Also times two representative end-to-end operations (quadrilateral
construction and a full plane-locus solve) under whichever backend is
active, so the kernel-level speedups can be judged in context.
"""

import sys
import time

import numpy as np


def _bench(fn, args_iter, repeats):
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for args in args_iter:
            for _ in range(repeats):
                fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases(rng):
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    d = rng.standard_normal(3)
    d /= np.linalg.norm(d)
    from rotquad._kernels import _pure

    R = _pure.quat_to_matrix(q)
    cases = {
        "dq_mul": [(rng.standard_normal(8), rng.standard_normal(8))],
        "quat_rotate": [(q, rng.standard_normal(3))],
        "quat_to_matrix": [(q,)],
        "line_transform": [
            (R, rng.standard_normal(3), d, np.cross(rng.standard_normal(3), d))
        ],
        "homopoly_eval": [
            (
                rng.integers(0, 4, (15, 3)).astype(np.int64),
                rng.standard_normal(15),
                rng.standard_normal((20, 3)),
            )
        ],
        "coplanarity_dets": [
            tuple(rng.standard_normal((50, 3)) for _ in range(4))
        ],
    }
    return cases


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    rng = np.random.default_rng(7)

    from rotquad._kernels import _pure

    try:
        from rotquad._kernels import _core
    except ImportError:
        _core = None

    print(f"{'kernel':18s} {'pure [us]':>12s} {'compiled [us]':>14s} {'speedup':>9s}")
    for name, argsets in kernel_cases(rng).items():
        t_pure = _bench(getattr(_pure, name), argsets, repeats) / repeats * 1e6
        if _core is not None:
            t_core = _bench(getattr(_core, name), argsets, repeats) / repeats * 1e6
            print(f"{name:18s} {t_pure:12.2f} {t_core:14.2f} {t_pure / t_core:8.1f}x")
        else:
            print(f"{name:18s} {t_pure:12.2f} {'(not built)':>14s}")

    import rotquad
    from rotquad import construct, loci

    print(f"\nactive backend: {rotquad.kernel_backend}")
    t0 = time.perf_counter()
    quads = [construct.random_rotation_quadrilateral(s) for s in range(20)]
    t1 = time.perf_counter()
    for q in quads[:5]:
        loci.plane_locus(q)
    t2 = time.perf_counter()
    print(f"construct x20: {(t1 - t0) * 1e3:.1f} ms   plane_locus x5: {(t2 - t1) * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
