"""Pure-NumPy kernel implementations.

Fallback twin of the compiled ``_kernels_c`` extension; both expose the same
five functions with identical semantics. Selection happens in ``backend``.
"""

import numpy as np

from .errors import NoConvergence, SingularMatrix

PIVOT_DROP_TOL = 1e-300


def lu_factor(a):
    """Partial-pivoting LU. Returns (lu, piv) with L\\U packed in one array.

    piv[k] is the row swapped into position k at step k (LAPACK-style
    successive interchanges).
    """
    lu = np.array(a, dtype=np.float64, copy=True, order="C")
    n = lu.shape[0]
    piv = np.empty(n, dtype=np.int64)
    for k in range(n):
        j = k + int(np.argmax(np.abs(lu[k:, k])))
        piv[k] = j
        if abs(lu[j, k]) < PIVOT_DROP_TOL:
            raise SingularMatrix(f"pivot {abs(lu[j, k]):.3e} below drop tolerance at column {k}")
        if j != k:
            lu[[k, j]] = lu[[j, k]]
        lu[k + 1:, k] /= lu[k, k]
        if k + 1 < n:
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve_factored(lu, piv, b):
    """Solve A x = b given lu_factor output. b may be a vector or matrix."""
    x = np.array(b, dtype=np.float64, copy=True)
    vec = x.ndim == 1
    if vec:
        x = x[:, None]
    n = lu.shape[0]
    for k in range(n):
        j = int(piv[k])
        if j != k:
            x[[k, j]] = x[[j, k]]
    for k in range(n - 1):
        x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        if k:
            x[:k] -= np.outer(lu[:k, k], x[k])
    return x[:, 0] if vec else x


def jacobi_eig(a, off_tol_factor=1e-14, max_sweeps=60):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (w, q) with eigenvalues ascending and a = q @ diag(w) @ q.T.
    Sweeps until the off-diagonal Frobenius mass drops below
    off_tol_factor * ||a||_F.
    """
    w = np.array(a, dtype=np.float64, copy=True, order="C")
    n = w.shape[0]
    q = np.eye(n)
    if n == 1:
        return w.diagonal().copy(), q
    # Accumulate sequentially in the compiled kernel's order so both
    # backends see bit-identical thresholds and stop after the same sweep.
    fro2 = 0.0
    for v in w.ravel():
        fro2 += v * v
    if fro2 == 0.0:
        return np.zeros(n), q
    off_tol2 = off_tol_factor * off_tol_factor * fro2
    skip_tol = off_tol_factor * np.sqrt(fro2) / (2.0 * n)
    for _ in range(max_sweeps):
        # Sum the off-diagonal squares directly: subtracting the diagonal
        # mass from the total cancels catastrophically once the matrix is
        # nearly diagonal and can leave the test unsatisfiable.
        off2 = 0.0
        for p in range(n - 1):
            for v in w[p, p + 1:]:
                off2 += 2.0 * v * v
        if off2 <= off_tol2:
            d = w.diagonal().copy()
            order = np.argsort(d, kind="stable")
            return d[order], q[:, order]
        for p in range(n - 1):
            for qq in range(p + 1, n):
                apq = w[p, qq]
                if abs(apq) <= skip_tol:
                    continue
                tau = (w[qq, qq] - w[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cp = w[:, p].copy()
                cq = w[:, qq].copy()
                w[:, p] = c * cp - s * cq
                w[:, qq] = s * cp + c * cq
                rp = w[p, :].copy()
                rq = w[qq, :].copy()
                w[p, :] = c * rp - s * rq
                w[qq, :] = s * rp + c * rq
                w[p, qq] = 0.0
                w[qq, p] = 0.0
                gp = q[:, p].copy()
                gq = q[:, qq].copy()
                q[:, p] = c * gp - s * gq
                q[:, qq] = s * gp + c * gq
    raise NoConvergence(f"jacobi_eig: off-diagonal mass not below tolerance in {max_sweeps} sweeps")


def resolvent_sum(ami, ps, cs):
    """Sum of scaled resolvents: sum_i cs[i] * inv(ps[i] * ami + 2 I)."""
    ami = np.asarray(ami, dtype=np.float64)
    n = ami.shape[0]
    eye2 = 2.0 * np.eye(n)
    out = np.zeros((n, n))
    ident = np.eye(n)
    for p, c in zip(np.asarray(ps, dtype=np.float64), np.asarray(cs, dtype=np.float64)):
        lu, piv = lu_factor(p * ami + eye2)
        out += c * lu_solve_factored(lu, piv, ident)
    return out


def resolvent_action_sum(ami, ps, cs, v):
    """Vector-action variant: sum_i cs[i] * solve(ps[i] * ami + 2 I, v)."""
    ami = np.asarray(ami, dtype=np.float64)
    n = ami.shape[0]
    eye2 = 2.0 * np.eye(n)
    out = np.zeros(n)
    v = np.asarray(v, dtype=np.float64)
    for p, c in zip(np.asarray(ps, dtype=np.float64), np.asarray(cs, dtype=np.float64)):
        lu, piv = lu_factor(p * ami + eye2)
        out += c * lu_solve_factored(lu, piv, v)
    return out
