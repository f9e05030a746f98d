"""Benchmark the compiled kernels against the pure numpy fallbacks.

Usage::

    python benchmarks/bench_kernels.py [--max-edges 20] [--jacobi-size 96]

Covers the two hot paths: exhaustive labeling-sum enumeration on a q=2 ring
network, and cyclic Jacobi diagonalization of a random Gram matrix.
"""

import argparse
import time

import numpy as np

from tnbubble import _kernels, netcore


def ring_network(n: int) -> netcore.TensorNetwork:
    rng = np.random.default_rng(42)
    vertices = []
    edges = []
    for v in range(n):
        vertices.append((v, netcore.Tensor(2, 2, rng.normal(size=4) + 1j * rng.normal(size=4))))
        edges.append(((v, 1), ((v + 1) % n, 0)))
    return netcore.TensorNetwork(2, tuple(vertices), tuple(edges))


def time_call(fn, *a):
    t0 = time.perf_counter()
    out = fn(*a)
    return time.perf_counter() - t0, out


def bench_labelsum(max_edges: int) -> None:
    print(f"labeling-sum enumeration (q=2 ring, compiled={_kernels.HAVE_COMPILED})")
    print(f"{'edges':>6} {'labelings':>12} {'compiled':>10} {'fallback':>10} {'speedup':>8}")
    for n in range(12, max_edges + 1, 2):
        net = ring_network(n)
        coeffs, values, offsets = net._labelsum_tables()
        total = 2**n
        t_c, v_c = time_call(_kernels.labelsum_range, 2, coeffs, values, offsets, 0, total)
        t_p, v_p = time_call(_kernels.labelsum_range_py, 2, coeffs, values, offsets, 0, total)
        assert abs(v_c - v_p) <= 1e-9 * (1 + abs(v_c))
        ratio = t_p / t_c if t_c > 0 else float("inf")
        print(f"{n:>6} {total:>12} {t_c:>9.4f}s {t_p:>9.4f}s {ratio:>7.1f}x")


def bench_jacobi(size: int) -> None:
    rng = np.random.default_rng(7)
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    gram = a.conj().T @ a
    print(f"\ncyclic Jacobi on a {size}x{size} Gram matrix")
    t_c, _ = time_call(_kernels.jacobi_diagonalize, np.ascontiguousarray(gram.copy()))
    t_p, _ = time_call(_kernels.jacobi_diagonalize_py, gram.copy())
    ratio = t_p / t_c if t_c > 0 else float("inf")
    print(f"compiled {t_c:.4f}s   fallback {t_p:.4f}s   speedup {ratio:.1f}x")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=20)
    ap.add_argument("--jacobi-size", type=int, default=96)
    args = ap.parse_args()
    if not _kernels.HAVE_COMPILED:
        print("note: compiled extension not built; comparing the fallback against itself")
    bench_labelsum(args.max_edges)
    bench_jacobi(args.jacobi_size)


if __name__ == "__main__":
    main()
