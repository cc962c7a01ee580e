"""Compiled-extension vs pure-NumPy kernel benchmark.

The cost of one logarithm evaluation is dominated by the resolvent
accumulation: every abscissa requires one dense LU factorization plus a
full set of triangular solves, and nothing else in the pipeline grows
faster than O(m n^3). This script times that hot path on both backends
over representative orders and mesh sizes and reports the speedup.

Run from the repository root: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from quadlog import _kernels_py as kpy
from quadlog.linalg import estimate_params
from quadlog.quadrature import de_transform
from quadlog.testmats import gen_spd, precondition_scale
from quadlog.truncation import select_interval

try:
    from quadlog import _kernels_c as kc
except ImportError:
    kc = None


def mesh(a, m):
    """Shifted nodes and combined trapezoid coefficients for the selected
    window of a matrix, mirroring the fixed-mesh driver."""
    iv = select_interval(estimate_params(a), 2.0**-53)
    xs = np.linspace(iv.l, iv.r, m)
    h = xs[1] - xs[0]
    ps, ws = de_transform(xs)
    cs = np.full(m, h)
    cs[0] = cs[-1] = 0.5 * h
    return ps, cs * ws


def best_of(fn, repeats):
    out = None
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    if kc is None:
        print("compiled extension not available; nothing to compare")
        return
    print(f"{'n':>5} {'m':>5} {'compiled':>12} {'pure numpy':>12} {'speedup':>9}")
    for n, m, repeats in ((50, 241, 5), (100, 241, 3), (200, 241, 3)):
        a, _ = precondition_scale(gen_spd(n, 1e4, seed=1))
        ami = a - np.eye(n)
        ps, cs = mesh(a, m)
        out_c, t_c = best_of(lambda: kc.resolvent_sum(ami, ps, cs), repeats)
        out_p, t_p = best_of(lambda: kpy.resolvent_sum(ami, ps, cs), repeats)
        assert np.array_equal(out_c, out_p), "backends disagree"
        print(f"{n:>5} {m:>5} {t_c:>11.3f}s {t_p:>11.3f}s {t_p / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
