"""Time A_q multiplication with the compiled kernel and the pure-Python one.

    python benchmarks/bench_multiply.py [--degree 6] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from qsu2 import _kernels_py
from qsu2 import hopf

try:
    from qsu2 import _kernels
except ImportError:
    _kernels = None


def operands(degree, q, seed=0):
    rng = np.random.default_rng(seed)
    x = hopf.random_element(rng, q, degree=degree, nterms=12)
    y = hopf.random_element(rng, q, degree=degree, nterms=12)
    return x.terms, y.terms


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--q", type=float, default=0.5)
    args = ap.parse_args()

    x, y = operands(args.degree, args.q)
    kernels = [("python", _kernels_py)]
    if _kernels is not None:
        kernels.append(("cython", _kernels))
    ref = None
    for name, mod in kernels:
        out = mod.mul_terms(x, y, args.q)
        if ref is None:
            ref = out
        else:
            keys = set(ref) | set(out)
            diff = max(abs(ref.get(k, 0) - out.get(k, 0)) for k in keys)
            print(f"  max |python - {name}| = {diff:.2e}")
        n = max(1, int(0.2 / max(1e-6, timeit.timeit(lambda: mod.mul_terms(x, y, args.q), number=1))))
        best = min(timeit.repeat(lambda: mod.mul_terms(x, y, args.q), number=n, repeat=args.repeat)) / n
        print(f"{name:7s} degree {args.degree}: {best * 1e3:8.3f} ms per product ({len(out)} terms)")
    if _kernels is None:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
