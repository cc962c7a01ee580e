"""Dense linear-algebra primitives: LU solves, symmetric eigensolver wrappers,
matrix exponential, spectral-parameter estimation.

Everything here is pure with respect to its inputs and safe to call
concurrently. Matrix-matrix products use NumPy; factorizations and
eigensweeps go through the selected kernel backend.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NoConvergence,
    NotSPD,
    NotSymmetric,
    Overflow,
    SingularMatrix,
)

SYMMETRY_REL_TOL = 1e-12
DEFAULT_POWER_TOL = 0.01
EXACT_POWER_TOL = 1e-13


@dataclass(frozen=True)
class SpectralParams:
    """Spectral quantities driving interval selection.

    rho_a_inv is populated only when the matrix was judged symmetric
    positive definite (then it equals norm_a_inv); its presence is what
    enables the tighter theta.
    """

    rho_a: float
    norm_a_minus_i: float
    norm_a_inv: float
    rho_a_inv: float | None
    theta: float
    mode: str


@dataclass(frozen=True)
class PowerInfo:
    """Diagnostics from a power-iteration run."""

    iterations: int
    converged: bool
    oscillating: bool


def validate_matrix(a):
    """Coerce to a square, finite float64 array (C order)."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return np.ascontiguousarray(m)


def is_symmetric(a):
    """Frobenius symmetry test at relative tolerance 1e-12."""
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return True
    return np.linalg.norm(a - a.T) <= SYMMETRY_REL_TOL * fro


def lu_solve(a, b):
    """Solve a @ x = b (b a vector or matrix) by partial-pivoting LU."""
    a = validate_matrix(a)
    b_arr = np.asarray(b, dtype=np.float64)
    if b_arr.ndim not in (1, 2) or b_arr.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"right-hand side shape {b_arr.shape} does not match order {a.shape[0]}")
    lu, piv = backend.lu_factor(a)
    return backend.lu_solve_factored(lu, piv, b_arr)


def inverse(a):
    """Explicit inverse via one factorization and n unit solves."""
    a = validate_matrix(a)
    lu, piv = backend.lu_factor(a)
    return backend.lu_solve_factored(lu, piv, np.eye(a.shape[0]))


def sym_eig(a):
    """Eigendecomposition of a symmetric matrix: (ascending eigenvalues, Q)."""
    a = validate_matrix(a)
    if not is_symmetric(a):
        raise NotSymmetric("matrix fails the 1e-12 relative Frobenius symmetry test")
    return backend.jacobi_eig(a)


def _power_sequence(g, tol_dir, cap):
    """Normalized power iteration from the all-ones direction.

    Returns (iterate-norm history, final unit vector, converged flag).
    Convergence means the iterate direction moved (up to sign) by at most
    tol_dir in one step.
    """
    n = g.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    rs = []
    for _ in range(cap):
        y = g @ x
        r = float(np.linalg.norm(y))
        if r == 0.0:
            return [0.0], x, True
        y = y / r
        rs.append(r)
        d = min(float(np.linalg.norm(y - x)), float(np.linalg.norm(y + x)))
        x = y
        if len(rs) >= 3 and d <= tol_dir:
            return rs, x, True
    return rs, x, False


def _accelerate(rs):
    """Aitken extrapolation of the iterate-norm sequence (guarded)."""
    r = rs[-1]
    if len(rs) >= 3:
        d1 = rs[-1] - rs[-2]
        d2 = rs[-2] - rs[-3]
        if d2 != 0.0 and abs(d1) < abs(d2):
            q = d1 / d2
            ext = rs[-1] + d1 * q / (1.0 - q)
            if math.isfinite(ext) and ext > 0.0:
                return ext
    return r


def _iteration_cap(n):
    return 10 * n + 100


def _power_largest(g, tol_dir, cap):
    """Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Returns (eigenvalue estimate, final vector, iterations). Raises
    NoConvergence at the cap; PSD spectra have no complex pair to fall
    back on.
    """
    rs, x, converged = _power_sequence(g, tol_dir, cap)
    if not converged:
        raise NoConvergence(f"power iteration did not settle within {cap} iterations")
    return _accelerate(rs), x, len(rs)


def _power_rho(a, tol_dir, cap):
    """Spectral-radius power iteration with a complex-pair fallback.

    When the direction never settles but successive iterate norms are
    stable (the signature of a dominant complex-conjugate pair, whose
    iterates rotate forever), the magnitude sqrt(r_k * r_{k-1}) is
    returned with the oscillation flag set.
    """
    rs, _x, converged = _power_sequence(a, tol_dir, cap)
    if converged:
        return _accelerate(rs), PowerInfo(len(rs), True, False)
    if len(rs) >= 2 and abs(rs[-1] - rs[-2]) <= 0.25 * max(rs[-1], rs[-2]):
        return math.sqrt(rs[-1] * rs[-2]), PowerInfo(len(rs), False, True)
    suspected = False
    if len(rs) >= 5:
        deltas = np.diff(rs[-5:])
        suspected = bool((np.sign(deltas[:-1]) * np.sign(deltas[1:]) < 0).all())
    raise NoConvergence(
        f"spectral-radius iteration did not settle within {cap} iterations",
        oscillating=suspected,
    )


def two_norm(a, mode="exact", tol=DEFAULT_POWER_TOL):
    """Matrix 2-norm.

    exact: square root of the top eigenvalue of A^T A by the Jacobi sweep.
    approximate: power iteration on A^T A at stopping tolerance tol.
    """
    a = validate_matrix(a)
    g = a.T @ a
    if mode == "exact":
        w, _ = backend.jacobi_eig(g)
        return math.sqrt(max(float(w[-1]), 0.0))
    if mode == "approximate":
        nu, _x, _its = _power_largest(g, tol, _iteration_cap(a.shape[0]))
        return math.sqrt(max(nu, 0.0))
    raise ValueError(f"mode must be 'exact' or 'approximate', got {mode!r}")


def spectral_radius(a, mode="exact", tol=DEFAULT_POWER_TOL, return_info=False):
    """Spectral radius.

    exact + symmetric: via the Jacobi eigensolver. Otherwise power
    iteration (direction-change stop at 1e-13 in exact mode, tol in
    approximate mode) with the complex-pair magnitude fallback; pass
    return_info=True for the (value, PowerInfo) pair.
    """
    a = validate_matrix(a)
    if mode not in ("exact", "approximate"):
        raise ValueError(f"mode must be 'exact' or 'approximate', got {mode!r}")
    if mode == "exact" and is_symmetric(a):
        w, _ = backend.jacobi_eig(a)
        rho = float(np.abs(w).max())
        info = PowerInfo(0, True, False)
    else:
        tol_dir = EXACT_POWER_TOL if mode == "exact" else tol
        rho, info = _power_rho(a, tol_dir, _iteration_cap(a.shape[0]))
    return (rho, info) if return_info else rho


def expm(x):
    """Matrix exponential by scaling-and-squaring with a degree-20 Taylor core.

    Intended as a residual oracle, not a production exponential.
    """
    x = validate_matrix(x)
    n = x.shape[0]
    norm1 = float(np.abs(x).sum(axis=0).max())
    if norm1 == 0.0:
        return np.eye(n)
    sigma = max(0, math.ceil(math.log2(norm1)) + 1)
    y = x / (2.0 ** sigma)
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, 21):
        term = term @ y / k
        total = total + term
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(sigma):
            total = total @ total
            if not np.isfinite(total).all() or np.abs(total).max() > 1e300:
                raise Overflow("matrix exponential exceeded 1e300 during squaring")
    return total


def eig_logm_spd(a):
    """Logarithm of a symmetric positive definite matrix by eigendecomposition."""
    w, q = sym_eig(a)
    if float(w[0]) <= 0.0:
        raise NotSPD(f"smallest eigenvalue {float(w[0]):.6e} is not positive")
    return (q * np.log(w)) @ q.T


def theta_from(rho_a, rho_a_inv):
    """Lower bound on ||log A||_2 from spectral radii; see theta_lower_bound."""
    theta = abs(math.log(rho_a))
    if rho_a_inv is not None:
        theta = max(theta, abs(math.log(rho_a_inv)))
    if theta == 0.0:
        raise DegenerateSpectrum("spectral radius 1 gives a zero lower bound on ||log A||")
    return theta


def estimate_params(a, mode="exact", tol=DEFAULT_POWER_TOL):
    """Estimate (rho(A), ||A-I||_2, ||A^-1||_2) and the theta lower bound.

    exact mode resolves every quantity through the Jacobi eigensolver
    (symmetric input needs a single sweep of A itself); approximate mode
    uses power iterations at tolerance tol throughout. Positive
    definiteness is detected automatically: exactly via the spectrum when
    symmetric, heuristically via the Rayleigh quotient of the
    smallest-magnitude eigenvector in approximate mode.
    """
    a = validate_matrix(a)
    if mode not in ("exact", "approximate"):
        raise ValueError(f"mode must be 'exact' or 'approximate', got {mode!r}")
    n = a.shape[0]
    symmetric = is_symmetric(a)
    cap = _iteration_cap(n)
    if mode == "exact":
        if symmetric:
            w, _ = backend.jacobi_eig(a)
            absw = np.abs(w)
            rho = float(absw.max())
            nrm_ami = float(np.abs(w - 1.0).max())
            wmin = float(absw.min())
            if wmin == 0.0:
                raise SingularMatrix("matrix has a zero eigenvalue")
            nrm_inv = 1.0 / wmin
            spd = float(w[0]) > 0.0
        else:
            rho, _info = _power_rho(a, EXACT_POWER_TOL, cap)
            ami = a - np.eye(n)
            wg, _ = backend.jacobi_eig(ami.T @ ami)
            nrm_ami = math.sqrt(max(float(wg[-1]), 0.0))
            x = inverse(a)
            wi, _ = backend.jacobi_eig(x.T @ x)
            nrm_inv = math.sqrt(max(float(wi[-1]), 0.0))
            spd = False
        mode_str = "exact"
    else:
        rho, _info = _power_rho(a, tol, cap)
        ami = a - np.eye(n)
        nu_ami, _xg, _ = _power_largest(ami.T @ ami, tol, cap)
        nrm_ami = math.sqrt(max(nu_ami, 0.0))
        x = inverse(a)
        nu_inv, xvec, _ = _power_largest(x.T @ x, tol, cap)
        nrm_inv = math.sqrt(max(nu_inv, 0.0))
        # xvec approximates the eigenvector of the smallest-magnitude
        # eigenvalue of a symmetric A; its Rayleigh sign separates SPD
        # from spectra straddling zero.
        spd = symmetric and float(xvec @ (a @ xvec)) > 0.0
        mode_str = f"approximate({tol:g})"
    rho_inv = nrm_inv if spd else None
    theta = theta_from(rho, rho_inv)
    return SpectralParams(
        rho_a=rho,
        norm_a_minus_i=nrm_ami,
        norm_a_inv=nrm_inv,
        rho_a_inv=rho_inv,
        theta=theta,
        mode=mode_str,
    )


def householder_qr(a):
    """QR factorization by Householder reflections: A = Q @ R, Q orthogonal."""
    r = np.array(validate_matrix(a), copy=True)
    n = r.shape[0]
    q = np.eye(n)
    for k in range(n - 1):
        v = r[k:, k].copy()
        alpha = -math.copysign(float(np.linalg.norm(v)), float(v[0]) if v[0] != 0 else 1.0)
        if alpha == 0.0:
            continue
        v[0] -= alpha
        vn = float(np.linalg.norm(v))
        if vn == 0.0:
            continue
        v /= vn
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        q[:, k:] -= 2.0 * np.outer(q[:, k:] @ v, v)
    return q, r
