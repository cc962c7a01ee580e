# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel implementations.

Same five-function surface as ``_kernels_py``; dense factorizations and
resolvent accumulation run as C loops, with the resolvent sweeps executed
outside the GIL.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

from .errors import NoConvergence, SingularMatrix

cnp.import_array()

DEF PIVOT_DROP_TOL = 1e-300


cdef int _lu_factor_inplace(double* lu, long* piv, int n) nogil:
    """Returns the failing column on a dropped pivot, else -1."""
    cdef int k, i, j, best
    cdef double amax, v, mult
    for k in range(n):
        best = k
        amax = fabs(lu[k * n + k])
        for i in range(k + 1, n):
            v = fabs(lu[i * n + k])
            if v > amax:
                amax = v
                best = i
        piv[k] = best
        if amax < PIVOT_DROP_TOL:
            return k
        if best != k:
            for j in range(n):
                v = lu[k * n + j]
                lu[k * n + j] = lu[best * n + j]
                lu[best * n + j] = v
        for i in range(k + 1, n):
            mult = lu[i * n + k] / lu[k * n + k]
            lu[i * n + k] = mult
            for j in range(k + 1, n):
                lu[i * n + j] -= mult * lu[k * n + j]
    return -1


cdef void _lu_solve_vec(double* lu, long* piv, int n, double* x) nogil:
    cdef int k, i
    cdef double v
    for k in range(n):
        i = <int> piv[k]
        if i != k:
            v = x[k]
            x[k] = x[i]
            x[i] = v
    for k in range(n - 1):
        for i in range(k + 1, n):
            x[i] -= lu[i * n + k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k * n + k]
        for i in range(k):
            x[i] -= lu[i * n + k] * x[k]
    return


def lu_factor(a):
    """Partial-pivoting LU. Returns (lu, piv) with L\\U packed in one array.

    piv[k] is the row swapped into position k at step k (LAPACK-style
    successive interchanges).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] lu = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef int n = lu.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] piv = np.empty(n, dtype=np.int64)
    cdef int bad
    with nogil:
        bad = _lu_factor_inplace(<double*> lu.data, <long*> piv.data, n)
    if bad >= 0:
        raise SingularMatrix(f"pivot below drop tolerance at column {bad}")
    return lu, piv


def lu_solve_factored(lu, piv, b):
    """Solve A x = b given lu_factor output. b may be a vector or matrix."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] lum = np.ascontiguousarray(lu, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pv = np.ascontiguousarray(piv, dtype=np.int64)
    cdef int n = lum.shape[0]
    b_arr = np.array(b, dtype=np.float64, copy=True)
    cdef bint vec = b_arr.ndim == 1
    if vec:
        b_arr = b_arr[:, None]
    # Solve column by column on a Fortran-ordered copy so each RHS is contiguous.
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="fortran"] x = np.asfortranarray(b_arr)
    cdef int nrhs = x.shape[1]
    cdef int j
    with nogil:
        for j in range(nrhs):
            _lu_solve_vec(<double*> lum.data, <long*> pv.data, n, (<double*> x.data) + j * n)
    out = np.ascontiguousarray(x)
    return out[:, 0] if vec else out


def jacobi_eig(a, double off_tol_factor=1e-14, int max_sweeps=60):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (w, q) with eigenvalues ascending and a = q @ diag(w) @ q.T.
    Sweeps until the off-diagonal Frobenius mass drops below
    off_tol_factor * ||a||_F.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] w = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef int n = w.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] q = np.eye(n)
    if n == 1:
        return w.diagonal().copy(), q
    cdef double* wp = <double*> w.data
    cdef double* qp = <double*> q.data
    cdef double fro2 = 0.0, off2, apq, tau, t, c, s, vp, vq
    cdef int i, p, r, sweep
    cdef bint done = False
    for i in range(n * n):
        fro2 += wp[i] * wp[i]
    if fro2 == 0.0:
        return np.zeros(n), q
    cdef double off_tol2 = off_tol_factor * off_tol_factor * fro2
    cdef double skip_tol = off_tol_factor * sqrt(fro2) / (2.0 * n)
    with nogil:
        for sweep in range(max_sweeps):
            off2 = 0.0
            for p in range(n):
                for r in range(p + 1, n):
                    off2 += 2.0 * wp[p * n + r] * wp[p * n + r]
            if off2 <= off_tol2:
                done = True
                break
            for p in range(n - 1):
                for r in range(p + 1, n):
                    apq = wp[p * n + r]
                    if fabs(apq) <= skip_tol:
                        continue
                    tau = (wp[r * n + r] - wp[p * n + p]) / (2.0 * apq)
                    t = (1.0 if tau >= 0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for i in range(n):
                        vp = wp[i * n + p]
                        vq = wp[i * n + r]
                        wp[i * n + p] = c * vp - s * vq
                        wp[i * n + r] = s * vp + c * vq
                    for i in range(n):
                        vp = wp[p * n + i]
                        vq = wp[r * n + i]
                        wp[p * n + i] = c * vp - s * vq
                        wp[r * n + i] = s * vp + c * vq
                    wp[p * n + r] = 0.0
                    wp[r * n + p] = 0.0
                    for i in range(n):
                        vp = qp[i * n + p]
                        vq = qp[i * n + r]
                        qp[i * n + p] = c * vp - s * vq
                        qp[i * n + r] = s * vp + c * vq
    if not done:
        raise NoConvergence(f"jacobi_eig: off-diagonal mass not below tolerance in {max_sweeps} sweeps")
    d = w.diagonal().copy()
    order = np.argsort(d, kind="stable")
    return d[order], q[:, order]


def resolvent_sum(ami, ps, cs):
    """Sum of scaled resolvents: sum_i cs[i] * inv(ps[i] * ami + 2 I)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] am = np.ascontiguousarray(ami, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pv = np.ascontiguousarray(ps, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cv = np.ascontiguousarray(cs, dtype=np.float64)
    cdef int n = am.shape[0]
    cdef int npts = pv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, n))
    cdef double* amp = <double*> am.data
    cdef double* outp = <double*> out.data
    cdef double* mwork
    cdef double* col
    cdef long* piv
    cdef double pval, cval
    cdef int k, i, j, bad = -1
    with nogil:
        mwork = <double*> malloc(n * n * sizeof(double))
        col = <double*> malloc(n * sizeof(double))
        piv = <long*> malloc(n * sizeof(long))
        if mwork == NULL or col == NULL or piv == NULL:
            bad = -2
        else:
            for k in range(npts):
                pval = pv[k]
                cval = cv[k]
                for i in range(n * n):
                    mwork[i] = pval * amp[i]
                for i in range(n):
                    mwork[i * n + i] += 2.0
                bad = _lu_factor_inplace(mwork, piv, n)
                if bad >= 0:
                    break
                for j in range(n):
                    for i in range(n):
                        col[i] = 0.0
                    col[j] = 1.0
                    _lu_solve_vec(mwork, piv, n, col)
                    for i in range(n):
                        outp[i * n + j] += cval * col[i]
        free(mwork)
        free(col)
        free(piv)
    if bad == -2:
        raise MemoryError("resolvent_sum scratch allocation failed")
    if bad >= 0:
        raise SingularMatrix(f"pivot below drop tolerance at column {bad}")
    return out


def resolvent_action_sum(ami, ps, cs, v):
    """Vector-action variant: sum_i cs[i] * solve(ps[i] * ami + 2 I, v)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] am = np.ascontiguousarray(ami, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pv = np.ascontiguousarray(ps, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cv = np.ascontiguousarray(cs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef int n = am.shape[0]
    cdef int npts = pv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double* amp = <double*> am.data
    cdef double* outp = <double*> out.data
    cdef double* vp = <double*> vv.data
    cdef double* mwork
    cdef double* x
    cdef long* piv
    cdef double pval, cval
    cdef int k, i, bad = -1
    with nogil:
        mwork = <double*> malloc(n * n * sizeof(double))
        x = <double*> malloc(n * sizeof(double))
        piv = <long*> malloc(n * sizeof(long))
        if mwork == NULL or x == NULL or piv == NULL:
            bad = -2
        else:
            for k in range(npts):
                pval = pv[k]
                cval = cv[k]
                for i in range(n * n):
                    mwork[i] = pval * amp[i]
                for i in range(n):
                    mwork[i * n + i] += 2.0
                bad = _lu_factor_inplace(mwork, piv, n)
                if bad >= 0:
                    break
                for i in range(n):
                    x[i] = vp[i]
                _lu_solve_vec(mwork, piv, n, x)
                for i in range(n):
                    outp[i] += cval * x[i]
        free(mwork)
        free(x)
        free(piv)
    if bad == -2:
        raise MemoryError("resolvent_action_sum scratch allocation failed")
    if bad >= 0:
        raise SingularMatrix(f"pivot below drop tolerance at column {bad}")
    return out
