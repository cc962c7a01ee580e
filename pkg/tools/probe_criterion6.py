"""Measurement-noise probe for the truncation-guarantee acceptance check.

Compares two ways of measuring the truncation error of a selected window
[l, r] on the harshest corpus members (top-30 SPD by condition number plus
all diagonalizable members):

* single-grid subtraction: 4001-point trapezoid on [l-8, r+8] minus a
  4001-point trapezoid on [l, r] — two full-size sums whose difference is
  tiny, so double precision leaves a cancellation floor near 1e-11 * theta;
* per-eigenvalue direct tail integral — no large-term cancellation.

Observed: both agree to four digits at eps 1e-4 and 1e-8 (max ratio 0.546),
but at eps = 1e-12 the subtraction reports ratios up to ~14 while the true
tail stays at 0.333. The acceptance test therefore evaluates the
wide-reference difference tail-side on a shared mesh, which is algebraically
identical to the subtraction but free of the floor.

Run from the repository root: python3 tools/probe_criterion6.py
"""

import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests"))

from quadlog.linalg import estimate_params
from quadlog.truncation import select_interval


def de_pw(x):
    """Stable (p, w) = (1 + tanh(sinh x), cosh(x) sech^2(sinh x))."""
    x = np.asarray(x, dtype=np.float64)
    s = np.sinh(x)
    e = np.exp(-2.0 * np.abs(s))
    w = np.cosh(x) * 4.0 * e / (1.0 + e) ** 2
    p = np.where(s >= 0.0, 2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
    return p, w


def quad_trapezoid(a, lo, hi, m):
    """m-point trapezoid of w(x) [p(x)(A-I)+2I]^{-1} over [lo, hi]."""
    n = a.shape[0]
    xs = np.linspace(lo, hi, m)
    h = xs[1] - xs[0]
    ps, ws = de_pw(xs)
    cs = np.full(m, h)
    cs[0] = cs[-1] = 0.5 * h
    ami = a - np.eye(n)
    systems = ps[:, None, None] * ami[None] + 2.0 * np.eye(n)[None]
    invs = np.linalg.solve(systems, np.broadcast_to(np.eye(n), (m, n, n)))
    return np.tensordot(cs * ws, invs, axes=1)


def measured_subtraction(a, iv, theta, m=4001, pad=8.0):
    ami = a - np.eye(a.shape[0])
    q_narrow = quad_trapezoid(a, iv.l, iv.r, m)
    q_wide = quad_trapezoid(a, iv.l - pad, iv.r + pad, m)
    return np.linalg.norm(ami @ (q_wide - q_narrow), 2) / theta


def measured_eigen_tail(a, iv, theta, spd, m=4001):
    """Direct tail mass via eigendecomposition (no large-term cancellation)."""
    n = a.shape[0]
    if spd:
        lam, v = np.linalg.eigh(a)
        vinv = v.T
    else:
        lam_c, v = np.linalg.eig(a)
        assert np.abs(lam_c.imag).max() < 1e-8 * np.abs(lam_c.real).max()
        lam = lam_c.real
        v = v.real
        vinv = np.linalg.inv(v)
    tau = np.zeros(n)
    for lo, hi in ((min(iv.l, -6.7) - 0.3, iv.l), (iv.r, max(iv.r, 6.7) + 0.3)):
        xs = np.linspace(lo, hi, m)
        h = xs[1] - xs[0]
        ps, ws = de_pw(xs)
        cs = np.full(m, h)
        cs[0] = cs[-1] = 0.5 * h
        g = (cs * ws)[:, None] / (ps[:, None] * (lam[None] - 1.0) + 2.0)
        tau += g.sum(axis=0)
    e_mat = (v * ((lam - 1.0) * tau)) @ vinv
    return np.linalg.norm(e_mat, 2) / theta


def main():
    from conftest import CORPUS_SEED, _random_diagonalizable, _random_spd

    master = np.random.default_rng(CORPUS_SEED)
    spd = [_random_spd(master) for _ in range(200)]
    master = np.random.default_rng(CORPUS_SEED + 1)
    diag = [_random_diagonalizable(master) for _ in range(50)]

    spd_sorted = sorted(spd, key=lambda m: -np.linalg.cond(m))[:30]
    cases = [(a, True) for a in spd_sorted] + [(a, False) for a in diag]
    t0 = time.perf_counter()
    violations = []
    for eps in (1e-4, 1e-8, 1e-12):
        ratios_sub, ratios_eig = [], []
        for a, spd_flag in cases:
            params = estimate_params(a)
            iv = select_interval(params, eps, s_mode="exact")
            r_sub = measured_subtraction(a, iv, params.theta) / eps
            r_eig = measured_eigen_tail(a, iv, params.theta, spd_flag) / eps
            ratios_sub.append(r_sub)
            ratios_eig.append(r_eig)
            if r_sub > 1.0 or r_eig > 1.0:
                violations.append((eps, float(np.linalg.cond(a)), r_sub, r_eig))
        print(
            f"eps={eps:g}: subtraction max ratio {max(ratios_sub):.3e}  "
            f"eigen-tail max ratio {max(ratios_eig):.3e}"
        )
    print(f"apparent violations: {len(violations)} (eps, cond, subtraction, eigen-tail)")
    for row in violations[:10]:
        print(f"   eps={row[0]:g} cond={row[1]:.2e} sub={row[2]:.2f} eig={row[3]:.3f}")
    print(f"elapsed {time.perf_counter() - t0:.1f}s for {len(cases) * 3} cases")


if __name__ == "__main__":
    main()
