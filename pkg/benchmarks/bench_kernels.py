"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--steps 20000]
"""
import argparse
import timeit

import numpy as np

from holodfs import _pykernels, kernels

try:
    from holodfs import _ckernels
except ImportError:
    _ckernels = None


def random_steps(rng, n, d):
    z = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
    q, _ = np.linalg.qr(z)
    return np.ascontiguousarray(q)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--steps", type=int, default=20000)
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
        backends["dispatch"] = kernels
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"selected backend: {kernels.BACKEND}; products with d >= {kernels.BLAS_MIN_DIM} use numpy")
    print(f"{'kernel':<28}{'backend':<9}{'best ms':>10}{'speedup':>9}")
    for d in (4, 6, 16):
        steps = random_steps(rng, args.steps, d)
        block = np.eye(d, dtype=complex)[:, :2].copy()
        cases = {
            f"ordered_product d={d}": lambda m: m.ordered_product(steps),
            f"propagate d={d} stride=1": lambda m: m.propagate(steps, block, 1),
        }
        for name, fn in cases.items():
            ref = fn(_pykernels)
            times = {}
            for label, mod in backends.items():
                out = fn(mod)
                if not np.allclose(out, ref, atol=1e-9):
                    raise SystemExit(f"{name}: {label} disagrees with the fallback")
                times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) * 1e3
            for label, t in times.items():
                print(f"{name:<28}{label:<9}{t:>10.2f}{times['python'] / t:>8.2f}x")


if __name__ == "__main__":
    main()
