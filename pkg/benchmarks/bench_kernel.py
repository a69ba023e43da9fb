"""Benchmark: compiled convolution kernel vs the pure-Python fallback.

Times the truncated sparse multiplication that dominates every mirror
computation (exp, log, Newton and fixed-point iterations all reduce to
it).  Run as ``python benchmarks/bench_kernel.py``.
"""

import random
import time
from fractions import Fraction

from syzmirror import _kernel_py

try:
    from syzmirror import _kernel
except ImportError:
    _kernel = None


def random_series_terms(rng, nvars, order, density=0.6):
    terms = {}
    for exps in _all_exponents(nvars, order):
        if rng.random() < density:
            terms[exps] = Fraction(rng.randint(-99, 99), rng.randint(1, 30))
    terms[(0,) * nvars] = Fraction(1)
    return terms


def _all_exponents(nvars, order):
    if nvars == 0:
        return [()]
    out = []
    for head in range(order + 1):
        for tail in _all_exponents(nvars - 1, order - head):
            out.append((head,) + tail)
    return out


def time_kernel(kernel, a, b, grading, order, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = kernel.mul_terms(a, b, grading, order)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    rng = random.Random(20240811)
    cases = [(1, 64), (2, 16), (3, 10)]
    print(f"{'nvars':>5} {'order':>5} {'terms':>6} {'python':>12} {'cython':>12} {'speedup':>8}")
    for nvars, order in cases:
        grading = (1,) * nvars
        a = random_series_terms(rng, nvars, order)
        b = random_series_terms(rng, nvars, order)
        py_time, py_result = time_kernel(_kernel_py, a, b, grading, order, repeats=3)
        if _kernel is None:
            print(f"{nvars:>5} {order:>5} {len(a):>6} {py_time * 1e3:>10.2f}ms {'absent':>12}")
            continue
        cy_time, cy_result = time_kernel(_kernel, a, b, grading, order, repeats=3)
        assert py_result == cy_result, "kernels disagree"
        print(
            f"{nvars:>5} {order:>5} {len(a):>6} {py_time * 1e3:>10.2f}ms "
            f"{cy_time * 1e3:>10.2f}ms {py_time / cy_time:>7.2f}x"
        )
    if _kernel is None:
        print("compiled kernel not built; run pip install -e . --no-build-isolation")


if __name__ == "__main__":
    main()
