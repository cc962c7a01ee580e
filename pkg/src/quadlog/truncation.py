"""Finite-interval selection for the double-exponential log integral.

Given spectral parameters, pick [l, r] so the discarded integral tails
contribute at most eps * theta in 2-norm: the left cutoff a comes from a
Neumann-series tail bound, the right cutoff b from a monotone scalar
equation solved exactly or by its first-order linearization, and both map
to DE abscissas through asinh(atanh(2t - 1)).

Quantities near the singular end are carried as complements (1 - b) so
cutoffs at distance ~1e-17 from 1 survive double precision.
"""

import math
from dataclasses import dataclass

from .errors import (
    AIsIdentity,
    DegenerateSpectrum,
    NoRoot,
    PreconditionViolated,
    QuadlogError,
)
from .linalg import SpectralParams  # noqa: F401  (re-exported for callers)

S_EXACT_RESIDUAL_RTOL = 1e-12


@dataclass(frozen=True)
class TruncationInterval:
    """Selected integration window in both coordinates.

    (a, b) live on the t-axis of the shifted integral, (l, r) on the DE
    x-axis. one_minus_b stores 1 - b at full precision; b itself rounds
    to 1.0 once the right tail is thinner than machine epsilon.
    """

    a: float
    b: float
    l: float
    r: float
    eps_effective: float
    clamped: bool
    one_minus_b: float


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances and budget for the adaptive drivers.

    eps bounds the interval-truncation error, zeta the quadrature-error
    estimate; max_evals None lets each algorithm apply its own budget.
    """

    eps: float
    zeta: float
    m0: int = 16
    max_evals: int | None = None

    def __post_init__(self):
        if not (self.eps > 0.0):
            raise ValueError("eps must be positive")
        if not (self.zeta > 0.0):
            raise ValueError("zeta must be positive")
        if self.m0 < 2:
            raise ValueError("m0 must be at least 2")
        if self.max_evals is not None and self.max_evals < 1:
            raise ValueError("max_evals must be positive")


def theta_lower_bound(params, spd):
    """Lower bound on ||log A||_2: |log rho(A)|, tightened by |log rho(A^-1)|
    for positive definite input."""
    if params.rho_a <= 0.0:
        raise PreconditionViolated("rho_a must be positive")
    theta = abs(math.log(params.rho_a))
    if spd:
        if params.rho_a_inv is None:
            raise PreconditionViolated("spd asserted but rho_a_inv is unavailable")
        theta = max(theta, abs(math.log(params.rho_a_inv)))
    if theta == 0.0:
        raise DegenerateSpectrum("unit spectral radius gives a zero lower bound on ||log A||")
    return theta


def tail_bound_left(a, norm_a_minus_i):
    """Bound (3a/2)*||A-I|| on the discarded [0, a] tail of the integral."""
    if norm_a_minus_i <= 0.0:
        raise PreconditionViolated("||A-I|| must be positive")
    if not (0.0 < a <= 1.0 / (2.0 * norm_a_minus_i)):
        raise PreconditionViolated(
            f"left cutoff {a!r} outside (0, 1/(2||A-I||)] = (0, {1.0 / (2.0 * norm_a_minus_i)!r}]"
        )
    return 1.5 * a * norm_a_minus_i


def _right_tail_factor(one_minus_b):
    """-log(b) + (1-b)/(2b) evaluated from the complement d = 1-b."""
    d = one_minus_b
    return -math.log1p(-d) + d / (2.0 * (1.0 - d))


def tail_bound_right(b, norm_a_minus_i, norm_a_inv):
    """Bound (-log b + (1-b)/(2b))*||A-I||*||A^-1|| on the [b, 1] tail."""
    return tail_bound_right_complement(1.0 - b, norm_a_minus_i, norm_a_inv)


def tail_bound_right_complement(one_minus_b, norm_a_minus_i, norm_a_inv):
    """tail_bound_right parameterized by d = 1-b, exact for d near 0."""
    if norm_a_inv <= 0.0:
        raise PreconditionViolated("||A^-1|| must be positive")
    d_max = 1.0 / (2.0 * norm_a_inv + 1.0)
    # Tiny relative slack: a caller handing us b = 1 - d_max re-rounds the
    # complement, which may overshoot d_max by a few ulps.
    if not (0.0 < one_minus_b <= d_max * (1.0 + 1e-9)):
        raise PreconditionViolated(
            f"right cutoff complement {one_minus_b!r} outside (0, 1/(2||A^-1||+1)] = (0, {d_max!r}]"
        )
    return _right_tail_factor(one_minus_b) * norm_a_minus_i * norm_a_inv


def truncation_bound(interval, params):
    """Total tail bound for an interval built from the same params."""
    return tail_bound_left(interval.a, params.norm_a_minus_i) + tail_bound_right_complement(
        interval.one_minus_b, params.norm_a_minus_i, params.norm_a_inv
    )


def epsilon_max(params):
    """Largest tolerance the interval construction can honor."""
    if params.theta <= 0.0:
        raise DegenerateSpectrum("theta must be positive")
    if params.norm_a_minus_i <= 0.0:
        raise AIsIdentity("||A-I|| = 0: the logarithm is the zero matrix")
    return (3.0 / params.theta) * params.norm_a_minus_i * params.norm_a_inv / (1.0 + params.norm_a_inv)


def _solve_d(params, eps):
    """Root d = 1-s of -log(1-d) + d/(2(1-d)) = eps*theta/(2*||A-I||*||A^-1||).

    The left side is strictly increasing from 0, so bisection brackets the
    unique root; Newton sharpens it to the 1e-12 relative residual
    contract.
    """
    c = params.norm_a_minus_i * params.norm_a_inv
    target = eps * params.theta / (2.0 * c)
    d_hi = max(0.5, 1.0 / (2.0 * params.norm_a_inv + 1.0))
    expansions = 0
    while _right_tail_factor(d_hi) < target:
        d_hi = 0.5 * (1.0 + d_hi)
        expansions += 1
        if expansions > 60:
            raise NoRoot("right-cutoff bracket failed to enclose the target")
    # Coarse bisection locates the scale of the root ...
    lo, hi = 0.0, d_hi
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if _right_tail_factor(mid) < target:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    if target < 0.1:
        # ... but absolute bisection resolves tiny roots poorly; the
        # small-d expansion of the tail factor, (3/2) d + O(d^2), seeds
        # Newton at nearly full relative accuracy.
        d = min(max((2.0 / 3.0) * target, lo), hi)
    # The tail factor is increasing and convex on (0, 1), so unclipped
    # Newton converges from any seed on the right scale.
    for _ in range(30):
        resid = _right_tail_factor(d) - target
        if abs(resid) <= 1e-13 * target:
            break
        deriv = 1.0 / (1.0 - d) + 1.0 / (2.0 * (1.0 - d) ** 2)
        nxt = d - resid / deriv
        if nxt <= 0.0:
            nxt = 0.5 * d
        elif nxt >= 1.0:
            nxt = 0.5 * (d + 1.0)
        if nxt == d:
            break
        d = nxt
    if abs(_right_tail_factor(d) - target) > S_EXACT_RESIDUAL_RTOL * target:
        raise NoRoot("right-cutoff root failed the residual contract")
    return d


def solve_s_exact(params, eps):
    """Exact right cutoff s solving the tail equation; see _solve_d.

    For tolerances near machine epsilon the mathematical root lies within
    one ulp of 1 and the returned float rounds to 1.0; select_interval
    works with the complement internally and does not lose precision.
    """
    if not (eps < epsilon_max(params)):
        raise PreconditionViolated("eps must be below epsilon_max")
    return 1.0 - _solve_d(params, eps)


def _d_tilde(params, eps):
    return params.theta * eps / (3.0 * params.norm_a_minus_i * params.norm_a_inv)


def s_tilde(params, eps):
    """First-order approximation 1 - theta*eps/(3*||A-I||*||A^-1||) of the
    exact right cutoff; never exceeds it."""
    if not (eps < epsilon_max(params)):
        raise PreconditionViolated("eps must be below epsilon_max")
    return 1.0 - _d_tilde(params, eps)


def _asinh_atanh_shifted(t):
    """asinh(atanh(2t - 1)) via logs of t and 1-t, stable for t near 0."""
    return math.asinh(0.5 * (math.log(t) - math.log1p(-t)))


def _asinh_atanh_shifted_complement(d):
    """asinh(atanh(2(1-d) - 1)) from the complement d, stable for d near 0."""
    return math.asinh(-0.5 * (math.log(d) - math.log1p(-d)))


def select_interval(params, eps, s_mode="linearized"):
    """Choose the finite window [a, b] (equivalently [l, r]) whose discarded
    tails stay below eps * theta, clamping eps to epsilon_max/2 when it is
    unattainably large."""
    if s_mode not in ("linearized", "exact"):
        raise ValueError(f"s_mode must be 'linearized' or 'exact', got {s_mode!r}")
    if params.norm_a_minus_i <= 0.0:
        raise AIsIdentity("||A-I|| = 0: the logarithm is the zero matrix")
    if params.theta <= 0.0:
        raise DegenerateSpectrum("theta must be positive")
    emax = epsilon_max(params)
    clamped = eps >= emax
    eff = 0.5 * emax if clamped else eps
    a = min(
        params.theta * eff / (3.0 * params.norm_a_minus_i),
        0.5 / params.norm_a_minus_i,
    )
    d_s = _d_tilde(params, eff) if s_mode == "linearized" else _solve_d(params, eff)
    d_b = min(d_s, 1.0 / (2.0 * params.norm_a_inv + 1.0))
    b = 1.0 - d_b
    if not (a < b):
        raise QuadlogError(f"degenerate interval: a={a!r} >= b={b!r}")
    l = _asinh_atanh_shifted(a)
    r = _asinh_atanh_shifted_complement(d_b)
    if not (l < r):
        raise QuadlogError(f"degenerate abscissa window: l={l!r} >= r={r!r}")
    return TruncationInterval(
        a=a, b=b, l=l, r=r, eps_effective=eff, clamped=clamped, one_minus_b=d_b
    )
