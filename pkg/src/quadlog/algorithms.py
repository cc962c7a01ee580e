"""End-to-end matrix-logarithm drivers.

Four entry points: fixed-mesh DE, adaptive DE (mesh halving with full node
reuse), adaptive GL (node doubling, no reuse), and the log(A) @ v action
variant. All return evaluation counts; the adaptive paths also report
their per-level error estimates.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import PreconditionViolated
from .linalg import estimate_params, validate_matrix
from .quadrature import GLRule, _de_coefficients, gl_nodes, refine, trapezoid_de
from .truncation import ToleranceConfig, TruncationInterval, select_interval

DE_MAX_EVALS_DEFAULT = 1921
GL_MAX_EVALS_DEFAULT = 2032
APPROX_PARAM_TOL = 0.01


@dataclass(frozen=True)
class LogmResult:
    """Computed logarithm plus accounting.

    interval is populated on DE paths only; err_estimate on adaptive
    paths only; stop is one of 'converged', 'eval_limit', 'fixed_m'.
    """

    X: np.ndarray
    evals: int
    interval: TruncationInterval | None
    err_estimate: float | None
    stop: str


@dataclass(frozen=True)
class AdaptiveReport:
    """Per-level (abscissa count, error estimate) history and the final result."""

    levels: list
    final: LogmResult


def _is_identity(a):
    return bool((a == np.eye(a.shape[0])).all())


def _params_for(a, param_mode):
    if param_mode not in ("exact", "approximate"):
        raise ValueError(f"param_mode must be 'exact' or 'approximate', got {param_mode!r}")
    return estimate_params(a, mode=param_mode, tol=APPROX_PARAM_TOL)


def _identity_result(n):
    return LogmResult(X=np.zeros((n, n)), evals=0, interval=None, err_estimate=None, stop="converged")


def logm_de(a, m, eps, param_mode="exact"):
    """log(A) by the m-point DE trapezoid on an interval selected for eps."""
    a = validate_matrix(a)
    if _is_identity(a):
        return _identity_result(a.shape[0])
    params = _params_for(a, param_mode)
    interval = select_interval(params, eps, "linearized")
    state = trapezoid_de(a, interval.l, interval.r, m)
    x = (a - np.eye(a.shape[0])) @ state.T
    return LogmResult(X=x, evals=state.evals, interval=interval, err_estimate=None, stop="fixed_m")


def logm_de_adaptive(a, cfg, param_mode="exact"):
    """Adaptive DE: halve the mesh until the error estimate drops below zeta.

    The estimate for a refinement T_k -> T_{k+1} is ||T_{k+1} - T_k||_F / (3 theta).
    Stops 'converged' on estimate <= cfg.zeta, or 'eval_limit' when the
    next level would exceed the evaluation budget (default 1921).
    """
    a = validate_matrix(a)
    n = a.shape[0]
    if _is_identity(a):
        final = LogmResult(X=np.zeros((n, n)), evals=0, interval=None, err_estimate=0.0, stop="converged")
        return AdaptiveReport(levels=[], final=final)
    params = _params_for(a, param_mode)
    interval = select_interval(params, cfg.eps, "linearized")
    max_evals = cfg.max_evals if cfg.max_evals is not None else DE_MAX_EVALS_DEFAULT
    state = trapezoid_de(a, interval.l, interval.r, cfg.m0)
    levels = []
    est = None
    stop = None
    while True:
        if 2 * state.m - 1 > max_evals:
            stop = "eval_limit"
            break
        prev = state.T
        state = refine(state, a)
        est = float(np.linalg.norm(state.T - prev)) / (3.0 * params.theta)
        levels.append((state.m, est))
        if est <= cfg.zeta:
            stop = "converged"
            break
    x = (a - np.eye(n)) @ state.T
    final = LogmResult(X=x, evals=state.evals, interval=interval, err_estimate=est, stop=stop)
    return AdaptiveReport(levels=levels, final=final)


def _gl_value(a, m, rule=None):
    if rule is None:
        rule = gl_nodes(m)
    return backend.resolvent_sum(a - np.eye(a.shape[0]), 1.0 + rule.nodes, rule.weights)


def logm_gl(a, m):
    """log(A) by the m-point Gauss-Legendre rule on the shifted integral."""
    a = validate_matrix(a)
    if m < 1:
        raise PreconditionViolated(f"need at least 1 node, got m={m}")
    n = a.shape[0]
    if _is_identity(a):
        return _identity_result(n)
    g = _gl_value(a, m)
    x = (a - np.eye(n)) @ g
    return LogmResult(X=x, evals=int(m), interval=None, err_estimate=None, stop="fixed_m")


def logm_gl_adaptive(a, cfg):
    """Adaptive GL: double the node count until successive values agree.

    Each level is computed from scratch (GL nodes do not nest), so evals
    accumulate across levels; the estimate is ||G_{k+1} - G_k||_F / theta.
    Budget default 2032 cumulative evaluations.
    """
    a = validate_matrix(a)
    n = a.shape[0]
    if _is_identity(a):
        final = LogmResult(X=np.zeros((n, n)), evals=0, interval=None, err_estimate=0.0, stop="converged")
        return AdaptiveReport(levels=[], final=final)
    params = estimate_params(a, mode="exact")
    max_evals = cfg.max_evals if cfg.max_evals is not None else GL_MAX_EVALS_DEFAULT
    m = cfg.m0
    g = _gl_value(a, m)
    total = m
    levels = []
    est = None
    stop = None
    while True:
        m_next = 2 * m
        if total + m_next > max_evals:
            stop = "eval_limit"
            break
        g_next = _gl_value(a, m_next)
        total += m_next
        est = float(np.linalg.norm(g_next - g)) / params.theta
        levels.append((m_next, est))
        g = g_next
        m = m_next
        if est <= cfg.zeta:
            stop = "converged"
            break
    x = (a - np.eye(n)) @ g
    final = LogmResult(X=x, evals=total, interval=None, err_estimate=est, stop=stop)
    return AdaptiveReport(levels=levels, final=final)


def logm_action_de(a, v, m, eps, param_mode="exact"):
    """log(A) @ v by the m-point DE trapezoid: m linear solves, no inverses."""
    a = validate_matrix(a)
    v = np.asarray(v, dtype=np.float64)
    if m < 2:
        raise PreconditionViolated(f"need at least 2 abscissas, got m={m}")
    if _is_identity(a):
        return np.zeros_like(v)
    params = _params_for(a, param_mode)
    interval = select_interval(params, eps, "linearized")
    _h, ps, cs = _de_coefficients(interval.l, interval.r, int(m))
    t_v = backend.resolvent_action_sum(a - np.eye(a.shape[0]), ps, cs, v)
    return (a - np.eye(a.shape[0])) @ t_v
