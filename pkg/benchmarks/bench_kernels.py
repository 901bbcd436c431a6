"""Compiled sweep kernels vs the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 8 12] [--repeat 5]

Both paths produce bit-identical results (see tests/test_backend.py); this
only measures time per decomposition.
"""
import argparse
import statistics
import timeit

import numpy as np

from evdrange import FixedFormat, random_spsd, scale_matrix
from evdrange import _fallback
from evdrange.fixedpoint import GUARD_BITS, fx_quantize

try:
    from evdrange import _kernels
except ImportError:
    _kernels = None


def _raw(M, fmt):
    return np.array([[fx_quantize(float(v), fmt).raw for v in row] for row in M.entries],
                    dtype=np.int64)


def _cases(n):
    A = scale_matrix(random_spsd(n, 2024)).scaled
    fmt = FixedFormat(32, 2)
    raw = _raw(A, fmt)
    yield "float", lambda mod: mod.float_evd(np.array(A.entries), n, False, 0.0)
    yield "float+trace", lambda mod: mod.float_evd(np.array(A.entries), n, True, 0.0)
    yield "fixed 32:2", lambda mod: mod.fixed_evd(raw.copy(), 32, 2, n, False, GUARD_BITS)


def _time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    runs = timeit.repeat(fn, number=number, repeat=repeat)
    return statistics.median(runs) / number


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[4, 8, 12, 16])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback can be timed")
    print(f"{'n':>3}  {'kernel':<12} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in args.n:
        for name, run in _cases(n):
            py = _time(lambda: run(_fallback), args.repeat)
            if _kernels is None:
                print(f"{n:>3}  {name:<12} {py * 1e3:>10.3f} {'-':>12} {'-':>8}")
                continue
            cc = _time(lambda: run(_kernels), args.repeat)
            print(f"{n:>3}  {name:<12} {py * 1e3:>10.3f} {cc * 1e3:>12.4f} {py / cc:>7.0f}x")


if __name__ == "__main__":
    main()
