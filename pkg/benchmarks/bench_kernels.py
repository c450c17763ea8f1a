"""Time the compiled kernels against the numpy fallback on identical inputs.

    python benchmarks/bench_kernels.py [size] [repeats]
"""
import sys
import timeit

import numpy as np

from artifact import _kernels_py

try:
    from artifact import _ckernels
except ImportError:
    _ckernels = None


def inputs(size, seed=0):
    rng = np.random.default_rng(seed)
    w1 = rng.uniform(0.1, 2, size) + 1j * rng.uniform(0.1, 2, size)
    w2 = rng.uniform(0.1, 2, size) + 1j * rng.uniform(0.1, 2, size)
    return w1, w2


def main(size=200_000, repeats=5):
    w1, w2 = inputs(size)
    coeffs = np.array([1.0, -1.0, -1.0, 1.0])
    backends = [("python", _kernels_py)] + ([("cython", _ckernels)] if _ckernels else [])
    ref = _kernels_py.arg_grad4(w1, w2, coeffs)
    for name, mod in backends:
        diff = float(np.max(np.abs(mod.arg_grad4(w1, w2, coeffs) - ref)))
        t4 = min(timeit.repeat(lambda: mod.arg_grad4(w1, w2, coeffs), number=1, repeat=repeats))
        te = min(timeit.repeat(lambda: mod.eta_grad(w1), number=1, repeat=repeats))
        print(f"{name:7} arg_grad4 {t4 * 1e3:8.2f} ms  eta_grad {te * 1e3:8.2f} ms  "
              f"max diff vs python {diff:.1e}  ({size} points)")


if __name__ == "__main__":
    main(*[int(a) for a in sys.argv[1:]])
