"""Integrands and quadrature rules for the shifted log integral.

The DE path evaluates F(x) = cosh(x) sech^2(sinh x) * [(1+tanh(sinh x))(A-I) + 2I]^-1
on a trapezoid mesh with halving refinement; the GL path evaluates
[(1+u)(A-I) + 2I]^-1 at Gauss-Legendre nodes. Both feed the kernel
backend's fused resolvent accumulation.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import NoConvergence, PreconditionViolated
from .linalg import validate_matrix

# Beyond this |x| the DE weight underflows to exactly 0 and sinh itself
# risks overflow; short-circuit.
_DE_X_CUTOFF = 350.0


@dataclass(frozen=True)
class QuadratureState:
    """Running trapezoid value of the DE integral, without the (A-I) factor."""

    T: np.ndarray
    h: float
    m: int
    l: float
    r: float
    evals: int


@dataclass(frozen=True)
class GLRule:
    """Gauss-Legendre nodes (ascending, sign-symmetric) and weights on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray


def de_transform(x):
    """Map a DE abscissa to (1 + tanh(sinh x), weight cosh(x) sech^2(sinh x)).

    Both values are computed through exp(-2|sinh x|) so neither factor
    overflows and the shifted node 1+u keeps full relative accuracy near
    the u = -1 end. Accepts a scalar or an ndarray.
    """
    if np.ndim(x) == 0:
        xf = float(x)
        if xf >= _DE_X_CUTOFF:
            return 2.0, 0.0
        if xf <= -_DE_X_CUTOFF:
            return 0.0, 0.0
        s = math.sinh(xf)
        e = math.exp(-2.0 * abs(s))
        w = math.cosh(xf) * 4.0 * e / ((1.0 + e) ** 2)
        p = 2.0 / (1.0 + e) if s >= 0.0 else 2.0 * e / (1.0 + e)
        return p, w
    xa = np.asarray(x, dtype=np.float64)
    inside = np.abs(xa) < _DE_X_CUTOFF
    xs = np.where(inside, xa, 0.0)
    s = np.sinh(xs)
    e = np.exp(-2.0 * np.abs(s))
    w = np.where(inside, np.cosh(xs) * 4.0 * e / ((1.0 + e) ** 2), 0.0)
    p_inside = np.where(s >= 0.0, 2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
    p = np.where(inside, p_inside, np.where(xa > 0.0, 2.0, 0.0))
    return p, w


def f_de(x, a):
    """DE integrand cosh(x) sech^2(sinh x) * [(1+tanh(sinh x))(A-I) + 2I]^-1."""
    a = validate_matrix(a)
    p, w = de_transform(float(x))
    n = a.shape[0]
    system = p * (a - np.eye(n)) + 2.0 * np.eye(n)
    lu, piv = backend.lu_factor(system)
    return w * backend.lu_solve_factored(lu, piv, np.eye(n))


def f_de_action(x, a, v):
    """F_DE(x) @ v through a single linear solve; the inverse is never formed."""
    a = validate_matrix(a)
    v = np.asarray(v, dtype=np.float64)
    p, w = de_transform(float(x))
    n = a.shape[0]
    system = p * (a - np.eye(n)) + 2.0 * np.eye(n)
    lu, piv = backend.lu_factor(system)
    return w * backend.lu_solve_factored(lu, piv, v)


def f_gl(u, a):
    """GL integrand [(1+u)(A-I) + 2I]^-1 on the shifted variable u = 2t-1."""
    a = validate_matrix(a)
    n = a.shape[0]
    system = (1.0 + float(u)) * (a - np.eye(n)) + 2.0 * np.eye(n)
    lu, piv = backend.lu_factor(system)
    return backend.lu_solve_factored(lu, piv, np.eye(n))


def _de_coefficients(l, r, m):
    """Abscissas, shifted nodes, and trapezoid coefficients for an m-point mesh."""
    h = (r - l) / (m - 1)
    xs = l + h * np.arange(m)
    xs[-1] = r
    ps, ws = de_transform(xs)
    coeff = np.full(m, h)
    coeff[0] = 0.5 * h
    coeff[-1] = 0.5 * h
    return h, ps, coeff * ws


def trapezoid_de(a, l, r, m):
    """m-point trapezoid value of the DE integral on [l, r].

    Endpoint terms carry weight h/2; interior points accumulate in
    ascending index order, so results are bit-reproducible.
    """
    a = validate_matrix(a)
    if not (l < r):
        raise PreconditionViolated(f"need l < r, got l={l!r}, r={r!r}")
    if m < 2:
        raise PreconditionViolated(f"need at least 2 abscissas, got m={m}")
    h, ps, cs = _de_coefficients(float(l), float(r), int(m))
    t = backend.resolvent_sum(a - np.eye(a.shape[0]), ps, cs)
    return QuadratureState(T=t, h=h, m=int(m), l=float(l), r=float(r), evals=int(m))


def refine(state, a):
    """Halve the mesh, reusing all previous abscissas.

    T(h/2) = T(h)/2 + (h/2) * sum of the m-1 new midpoint evaluations;
    the count goes m -> 2m - 1.
    """
    a = validate_matrix(a)
    mids = state.l + (np.arange(1, state.m) - 0.5) * state.h
    ps, ws = de_transform(mids)
    half_h = 0.5 * state.h
    t = 0.5 * state.T + backend.resolvent_sum(a - np.eye(a.shape[0]), ps, half_h * ws)
    return QuadratureState(
        T=t,
        h=half_h,
        m=2 * state.m - 1,
        l=state.l,
        r=state.r,
        evals=state.evals + state.m - 1,
    )


def gl_nodes(m):
    """Gauss-Legendre rule of m points by Newton on the Legendre recurrence.

    Chebyshev-angle initial guesses; converged when every update is at
    most 1e-15; weights 2/((1-x^2) P'_m(x)^2); the node array is made
    exactly sign-symmetric.
    """
    if not (1 <= m <= 4096):
        raise PreconditionViolated(f"node count must be in [1, 4096], got {m}")
    if m == 1:
        return GLRule(nodes=np.zeros(1), weights=np.full(1, 2.0))
    k = np.arange(1, m + 1)
    x = np.cos(math.pi * (4.0 * k - 1.0) / (4.0 * m + 2.0))
    pd = np.empty_like(x)
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j
        pd = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / pd
        x -= dx
        if float(np.abs(dx).max()) <= 1e-15:
            break
    else:
        raise NoConvergence("Legendre-root Newton iteration did not converge in 100 steps")
    nodes = x[::-1].copy()
    p0 = np.ones_like(nodes)
    p1 = nodes.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2.0 * j - 1.0) * nodes * p1 - (j - 1.0) * p0) / j
    pd = m * (nodes * p1 - p0) / (nodes * nodes - 1.0)
    weights = 2.0 / ((1.0 - nodes * nodes) * pd * pd)
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return GLRule(nodes=nodes, weights=weights)
