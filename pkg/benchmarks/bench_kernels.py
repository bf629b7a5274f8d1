"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from twocat import kernels


def chaotic_table(n):
    # morphisms (i, j) of the chaotic category on n objects; table[g, f] = g f
    idx = {(i, j): k for k, (i, j) in enumerate((i, j) for i in range(n) for j in range(n))}
    t = np.full((len(idx), len(idx)), -1, dtype=np.intc)
    for (i, j), f in idx.items():
        for k in range(n):
            t[idx[(j, k)], f] = idx[(i, k)]
    return t


def cyclic_table(n):
    # Z/n as 2-cells of a one-object, one-arrow 2-category: both compositions are addition
    a = np.arange(n, dtype=np.intc)
    return ((a[:, None] + a[None, :]) % n).astype(np.intc)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    assoc = chaotic_table(args.size)
    z = cyclic_table(args.size * 4)
    # one object, so every pair is parallel; relating 0 with k collapses Z/n by gcd(n, k)
    pairs = [(0, k) for k in range(len(z) - 1, 0, -7)]
    cases = {
        f"associativity ({len(assoc)} arrows)": lambda: kernels.associativity_violations(assoc),
        f"interchange ({len(z)} cells)": lambda: kernels.interchange_violations(z, z),
        f"congruence ({len(pairs)} pairs)": lambda: kernels.congruence_closure(z, pairs),
    }
    backends = ["python"]
    try:
        kernels.use("cython")
        backends.append("cython")
    except ImportError:
        print("compiled extension not built; timing the fallback only")
    results = {}
    for b in backends:
        kernels.use(b)
        for name, fn in cases.items():
            results[name, b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':<34}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in cases:
        row = f"{name:<34}" + "".join(f"{results[name, b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            row += f"{results[name, 'python'] / max(results[name, 'cython'], 1e-9):>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
