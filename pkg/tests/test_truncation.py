"""Interval truncation: tail bounds, the tolerance-to-interval selection
chain, and the exact-s root solve.

The frozen constants below were derived with 60-digit Decimal arithmetic
(tools/derive_interval_constants.py) and rounded to doubles.
"""

import math

import numpy as np
import pytest

from quadlog.errors import (
    AIsIdentity,
    DegenerateSpectrum,
    PreconditionViolated,
    QuadlogError,
)
from quadlog.linalg import SpectralParams, estimate_params
from quadlog.quadrature import f_de
from quadlog.truncation import (
    S_EXACT_RESIDUAL_RTOL,
    ToleranceConfig,
    epsilon_max,
    select_interval,
    s_tilde,
    solve_s_exact,
    tail_bound_left,
    tail_bound_right,
    tail_bound_right_complement,
    theta_lower_bound,
    truncation_bound,
)

EPS53 = 2.0**-53


def make_params(theta, nmi, ninv, rho_a=10.0, rho_a_inv=None):
    return SpectralParams(
        rho_a=rho_a,
        norm_a_minus_i=nmi,
        norm_a_inv=ninv,
        rho_a_inv=rho_a_inv,
        theta=theta,
        mode="exact",
    )


# Case 1: theta=ln 10, |A-I|=9, |A^-1|=10, eps=2^-53.
CASE1 = dict(
    a=9.468085134817211e-18,
    one_minus_b=9.46808513481721e-19,
    l=-3.6692913415906,
    r=3.726302201033284,
)
# Case 2: theta=6 ln 10, |A-I|=9, |A^-1|=1e6, eps=2^-53.
CASE2 = dict(
    a=5.680851080890326e-17,
    one_minus_b=5.680851080890327e-23,
    l=-3.622567615398933,
    r=3.936556998015841,
)
# Root of -ln s + (1-s)/(2s) = 1/10 (theta=1, unit norms, eps=0.2).
S_ROOT_CASE = 0.9362000402449691
EPSMAX_CASE1 = 10.659955464898
EPSMAX_CASE2 = 1.954323214241419


def test_theta_lower_bound():
    p = make_params(theta=1.0, nmi=9.0, ninv=10.0, rho_a=10.0)
    assert theta_lower_bound(p, spd=False) == pytest.approx(math.log(10.0), rel=1e-15)
    p2 = make_params(theta=1.0, nmi=9.0, ninv=1e6, rho_a=10.0, rho_a_inv=1e6)
    assert theta_lower_bound(p2, spd=True) == pytest.approx(math.log(1e6), rel=1e-15)
    with pytest.raises(DegenerateSpectrum):
        theta_lower_bound(make_params(theta=1.0, nmi=1.0, ninv=1.0, rho_a=1.0), spd=False)


def test_tail_bound_left_formula_and_preconditions():
    assert tail_bound_left(0.5, 1.0) == pytest.approx(0.75, rel=1e-15)
    assert tail_bound_left(1e-300, 1.0) <= 2e-300
    with pytest.raises(PreconditionViolated):
        tail_bound_left(0.6, 1.0)  # beyond 1/(2*1) = 0.5
    with pytest.raises(PreconditionViolated):
        tail_bound_left(0.0, 1.0)


def test_tail_bound_right_formula_and_preconditions():
    val = tail_bound_right(0.9, 1.0, 2.0)
    assert val == pytest.approx((-math.log(0.9) + 0.1 / 1.8) * 2.0, rel=1e-14)
    with pytest.raises(PreconditionViolated):
        tail_bound_right(0.7, 1.0, 2.0)  # below 2*2/(2*2+1) = 0.8
    with pytest.raises(PreconditionViolated):
        tail_bound_right(1.0, 1.0, 2.0)
    # Complement form agrees where both are representable.
    assert tail_bound_right_complement(0.1, 1.0, 2.0) == pytest.approx(val, rel=1e-12)
    # Vanishes as b -> 1.
    assert tail_bound_right_complement(1e-300, 1.0, 2.0) <= 1e-290


def _dense_left_tail(a_mat, a_end, points=100001):
    """||(A-I) * integral_0^a [t(A-I)+I]^{-1} dt|| by composite Simpson."""
    n = a_mat.shape[0]
    ts = np.linspace(0.0, a_end, points)
    mats = ts[:, None, None] * (a_mat - np.eye(n)) + np.eye(n)
    vals = np.linalg.inv(mats)
    w = np.ones(points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integral = (a_end / (points - 1) / 3.0) * np.einsum("k,kij->ij", w, vals)
    return np.linalg.norm((a_mat - np.eye(n)) @ integral, 2)


def _dense_right_tail(a_mat, b_start, points=100001):
    n = a_mat.shape[0]
    ts = np.linspace(b_start, 1.0, points)
    mats = ts[:, None, None] * (a_mat - np.eye(n)) + np.eye(n)
    vals = np.linalg.inv(mats)
    w = np.ones(points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integral = ((1.0 - b_start) / (points - 1) / 3.0) * np.einsum("k,kij->ij", w, vals)
    return np.linalg.norm((a_mat - np.eye(n)) @ integral, 2)


def test_tail_bounds_dominate_brute_force_tails():
    a_mat = np.diag([1.5, 0.8])
    nmi = 0.5  # ||A - I||
    ninv = 1.25  # ||A^-1||
    a_end = 1.0 / (2.0 * nmi)
    assert _dense_left_tail(a_mat, a_end) <= tail_bound_left(a_end, nmi)
    assert _dense_right_tail(a_mat, 0.96) <= tail_bound_right(0.96, nmi, ninv)


def test_truncation_bound_is_additive_and_valid():
    p = make_params(theta=abs(math.log(0.8)), nmi=0.5, ninv=1.25, rho_a=1.5)
    a_mat = np.diag([1.5, 0.8])
    a_end, b_start = 0.1, 0.96
    interval = select_interval(p, 1e-2)  # only for the dataclass shape
    # Build the bound by hand for (a, b) = (0.1, 0.96) and compare against
    # the truncated-integral error measured in the transformed variable.
    bound = tail_bound_left(a_end, 0.5) + tail_bound_right(b_start, 0.5, 1.25)
    l = math.asinh(math.atanh(2 * a_end - 1))
    r = math.asinh(math.atanh(2 * b_start - 1))
    xs = np.linspace(l, r, 4001)
    vals = np.stack([f_de(x, a_mat) for x in xs])
    t_mat = np.trapezoid(vals, dx=xs[1] - xs[0], axis=0)
    x_trunc = (a_mat - np.eye(2)) @ t_mat
    x_true = np.diag(np.log(np.diag(a_mat)))
    err = np.linalg.norm(x_true - x_trunc, 2)
    assert err <= bound
    assert interval.eps_effective == 1e-2


def test_epsilon_max_cases():
    p1 = make_params(theta=math.log(10.0), nmi=9.0, ninv=10.0)
    assert epsilon_max(p1) == pytest.approx(EPSMAX_CASE1, rel=1e-13)
    p2 = make_params(theta=6 * math.log(10.0), nmi=9.0, ninv=1e6)
    assert epsilon_max(p2) == pytest.approx(EPSMAX_CASE2, rel=1e-13)


def test_solve_s_exact_root_and_residual_contract():
    p = make_params(theta=1.0, nmi=1.0, ninv=1.0, rho_a=math.e)
    s = solve_s_exact(p, 0.2)
    assert s == pytest.approx(S_ROOT_CASE, rel=1e-13)
    # Residual contract on a spread of tolerances, checked on the
    # complement root where the solve happens (evaluating through the
    # rounded s loses the small-residual information near s = 1).
    from quadlog.truncation import _solve_d

    for eps in (1e-2, 1e-6, 1e-10, 1e-13):
        d = _solve_d(p, eps)
        target = eps * p.theta / (2.0 * p.norm_a_minus_i * p.norm_a_inv)
        resid = -math.log1p(-d) + d / (2.0 * (1.0 - d)) - target
        assert abs(resid) <= S_EXACT_RESIDUAL_RTOL * target
    with pytest.raises(PreconditionViolated):
        solve_s_exact(p, epsilon_max(p) * 1.5)


def test_s_tilde_formula_and_undershoot():
    p = make_params(theta=1.0, nmi=1.0, ninv=1.0, rho_a=math.e)
    assert s_tilde(p, 0.2) == pytest.approx(1.0 - 0.2 / 3.0, rel=1e-15)
    for eps in (0.2, 1e-3, 1e-8):
        assert s_tilde(p, eps) <= solve_s_exact(p, eps)


def test_select_interval_case1_oracle():
    p = make_params(theta=math.log(10.0), nmi=9.0, ninv=10.0)
    iv = select_interval(p, EPS53, "linearized")
    assert iv.a == pytest.approx(CASE1["a"], rel=1e-13)
    assert iv.one_minus_b == pytest.approx(CASE1["one_minus_b"], rel=1e-13)
    assert iv.l == pytest.approx(CASE1["l"], rel=1e-13)
    assert iv.r == pytest.approx(CASE1["r"], rel=1e-13)
    assert not iv.clamped
    assert iv.eps_effective == EPS53


def test_select_interval_case2_oracle():
    p = make_params(theta=6 * math.log(10.0), nmi=9.0, ninv=1e6, rho_a_inv=1e6)
    iv = select_interval(p, EPS53, "linearized")
    assert iv.a == pytest.approx(CASE2["a"], rel=1e-13)
    assert iv.one_minus_b == pytest.approx(CASE2["one_minus_b"], rel=1e-13)
    assert iv.l == pytest.approx(CASE2["l"], rel=1e-13)
    assert iv.r == pytest.approx(CASE2["r"], rel=1e-13)


def test_select_interval_clamps_large_eps():
    p = make_params(theta=math.log(10.0), nmi=9.0, ninv=10.0)
    emax = epsilon_max(p)
    iv = select_interval(p, 10 * emax)
    assert iv.clamped
    assert iv.eps_effective == pytest.approx(emax / 2.0, rel=1e-15)
    # Exactly eps_max clamps too.
    assert select_interval(p, emax).clamped
    just_below = select_interval(p, emax * (1 - 1e-12))
    assert not just_below.clamped


def test_select_interval_identity_and_degenerate():
    with pytest.raises(AIsIdentity):
        select_interval(make_params(theta=1.0, nmi=0.0, ninv=1.0), 1e-8)
    with pytest.raises(QuadlogError):
        select_interval(make_params(theta=0.0, nmi=1.0, ninv=1.0), 1e-8)


def test_select_interval_exact_mode_tightens_b():
    p = make_params(theta=math.log(10.0), nmi=9.0, ninv=10.0)
    lin = select_interval(p, 1e-6, "linearized")
    ex = select_interval(p, 1e-6, "exact")
    assert lin.l < lin.r and ex.l < ex.r
    # The linearized s undershoots the exact root, so its b is smaller
    # (complement larger) and the interval stops slightly earlier.
    assert lin.one_minus_b >= ex.one_minus_b
    assert lin.r <= ex.r


def test_select_interval_invariants_on_random_params(full_corpus):
    for a_mat in full_corpus[:40]:
        p = estimate_params(a_mat, mode="exact")
        for eps in (1e-4, 1e-8, 1e-12):
            for s_mode in ("linearized", "exact"):
                iv = select_interval(p, eps, s_mode)
                assert iv.l < iv.r
                assert 0.0 < iv.a <= 1.0 / (2.0 * p.norm_a_minus_i) * (1 + 1e-12)
                assert 0.0 < iv.one_minus_b <= 1.0 / (2.0 * p.norm_a_inv + 1.0) * (1 + 1e-9)
                assert iv.eps_effective <= eps


def test_root_solve_residual_contract_on_corpus(full_corpus):
    # The root is found on the complement d = 1 - s; check the residual
    # there, since s itself rounds to 1.0 once d drops below 1e-16.
    from quadlog.truncation import _solve_d

    for a_mat in full_corpus[:30]:
        p = estimate_params(a_mat, mode="exact")
        for eps in (1e-4, 1e-8, 1e-12):
            if eps >= epsilon_max(p):
                continue
            d = _solve_d(p, eps)
            target = eps * p.theta / (2.0 * p.norm_a_minus_i * p.norm_a_inv)
            resid = -math.log1p(-d) + d / (2.0 * (1.0 - d)) - target
            assert abs(resid) <= S_EXACT_RESIDUAL_RTOL * target


def test_tolerance_config_validation():
    cfg = ToleranceConfig(eps=1e-8, zeta=1e-8)
    assert cfg.m0 == 16 and cfg.max_evals is None
    with pytest.raises(ValueError):
        ToleranceConfig(eps=0.0, zeta=1e-8)
    with pytest.raises(ValueError):
        ToleranceConfig(eps=1e-8, zeta=-1.0)
    with pytest.raises(ValueError):
        ToleranceConfig(eps=1e-8, zeta=1e-8, m0=1)


def test_interval_is_immutable():
    p = make_params(theta=math.log(10.0), nmi=9.0, ninv=10.0)
    iv = select_interval(p, 1e-8)
    with pytest.raises(Exception):
        iv.l = 0.0
