import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strohhacker import thresholds as th
from strohhacker.errors import DomainError, Infeasible, SingularDenominator
from strohhacker.schemas import TheoremId

P_VALUES = range(1, 6)


# ── phi ───────────────────────────────────────────────
def test_phi_examples():
    assert th.phi(0, 1, 0.5) == pytest.approx(4)
    assert th.phi(1, 2, 0.5) == pytest.approx(0.8)
    assert th.phi(1e9, 3, 0) == pytest.approx(1 / 9, rel=1e-8)


def test_phi_domain():
    with pytest.raises(SingularDenominator):
        th.phi(0, 1, 0)
    with pytest.raises(DomainError):
        th.phi(1, 1, 1)
    with pytest.raises(DomainError):
        th.phi(1, 1, -0.1)
    with pytest.raises(DomainError):
        th.phi(-1, 2, 0.5)


def test_phi_min_examples():
    assert th.phi_min(1, 0.5) == pytest.approx(4, abs=1e-12)
    assert th.phi_min(2, 1.8) == pytest.approx(1 / 3.24, abs=1e-12)
    assert th.phi_min(3, 0) == pytest.approx(1 / 9, abs=1e-12)


def test_phi_min_matches_bruteforce():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        a = rng.uniform(0.1, 5.0)
        b = a * rng.uniform(0.0, 0.99)
        assert th.phi_min_bruteforce(a, b) == pytest.approx(th.phi_min(a, b), rel=1e-6)


def test_phi_min_bruteforce_handles_b_zero():
    assert th.phi_min_bruteforce(2.0, 0.0) == pytest.approx(0.25, rel=1e-12)


# ── A_p ───────────────────────────────────────────────
def test_alpha_t22_examples():
    assert th.alpha_T22(0.5, 1) == pytest.approx(0, abs=1e-12)
    assert th.alpha_T22(0, 3) == 3
    assert th.alpha_T22(0.75, 2) == pytest.approx(5 / 3, abs=1e-12)
    with pytest.raises(DomainError):
        th.alpha_T22(1.0, 1)
    with pytest.raises(DomainError):
        th.alpha_T22(0.5, 0)


def test_beta_t24_examples():
    assert th.beta_T24(2 / 3, 1) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert th.beta_T24(0.9, 2) == pytest.approx(math.sqrt(0.875), abs=1e-12)
    assert th.beta_T24(1 - 1e-12, 1) == pytest.approx(1, abs=1e-6)


def test_beta_t24_open_interval():
    with pytest.raises(DomainError):
        th.beta_T24(0.5, 1)          # lower endpoint (1 + 1)/4
    with pytest.raises(DomainError):
        th.beta_T24(1.0, 1)


def test_beta_t25():
    assert th.beta_T25(1) == 0.5
    assert th.beta_T25(4) == 1
    assert th.beta_T25(2) == pytest.approx(math.sqrt(2) / 2)


def test_h_at_zero():
    for p in P_VALUES:
        gamma = 0.5 * (th.t24_lower(p) + 1)
        assert th.h_function(0, gamma, p) == pytest.approx(((2 * p + 1) * gamma - 1) / p, abs=1e-12)


def test_h_second_derivative_matches_finite_difference():
    exact = th.h_second_deriv_at0(0.7, 1)
    fd = th.second_derivative_fd(lambda eta: th.h_function(eta, 0.7, 1))
    assert abs(fd - exact) / abs(exact) < 1e-5


def test_h_second_derivative_oracle_sweep():
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = int(rng.integers(1, 6))
        lo = th.t24_lower(p)
        gamma = lo + (1 - lo) * rng.uniform(0.05, 0.95)
        exact = th.h_second_deriv_at0(gamma, p)
        fd = th.second_derivative_fd(lambda eta: th.h_function(eta, gamma, p))
        assert abs(fd - exact) / abs(exact) < 1e-5


def test_h_second_derivative_negative():
    for p in P_VALUES:
        lo = th.t24_lower(p)
        for gamma in np.linspace(lo, 1, 102)[1:-1]:
            assert th.h_second_deriv_at0(gamma, p) < 0


# ── A_{p,b} ───────────────────────────────────────────
def test_alpha_t31_examples():
    assert th.alpha_T31(1, 2, 2) == pytest.approx(0.5, abs=1e-12)
    assert th.alpha_T31(0, 3, 1) == 0
    with pytest.raises(DomainError):
        th.alpha_T31(1, 2, 2.5)
    with pytest.raises(DomainError):
        th.alpha_T31(2, 2, 0)


def test_beta_t32_examples():
    assert th.beta_T32(0.5, 1, 0) == pytest.approx(0, abs=1e-12)
    for p in P_VALUES:
        for b in np.linspace(0, 1, 11):
            assert th.beta_T32(0.5, p, b) == pytest.approx(p - 1 / (1 + b), abs=1e-12)
    with pytest.raises(DomainError):
        th.beta_T32(0, 1, 0)


def test_alpha_t33_examples():
    # b = 0: p - 2 beta/(1 - beta)
    assert th.alpha_T33(0.25, 2, 0) == pytest.approx(4 / 3, abs=1e-12)
    assert th.alpha_T33(0.25, 1, 0) == pytest.approx(1 - 0.5 / 0.75, abs=1e-12)
    with pytest.raises(DomainError):
        th.alpha_T33(0.5, 1, 1.5)   # (p + 1) b = 3 > 4p(1 - beta) = 2


def test_corollary_anchors():
    for p in P_VALUES:
        for b in np.linspace(0, p, 9):
            assert th.alpha_T31(p / 2, p, b) == pytest.approx((p / 2) * (1 - 2 / (p + b)), abs=1e-12)
            assert th.corollary_T31(p, b) == pytest.approx((p / 2) * (1 - 2 / (p + b)), abs=1e-12)
        for b in np.linspace(0, 1, 9):
            assert th.corollary_T32(p, b) == pytest.approx(p - 1 / (1 + b), abs=1e-12)
            assert th.beta_T38(p, 1) == pytest.approx(math.sqrt(p) / 2, abs=1e-12)
        for b in np.linspace(0, 2 * p / (p + 1), 9):
            expected = p - 4 * p / (2 * p + (p + 1) * b)
            assert th.alpha_T33(0.5, p, b) == pytest.approx(expected, abs=1e-12)
            assert th.corollary_T33(p, b) == pytest.approx(expected, abs=1e-12)


def test_branch_continuity():
    for p in P_VALUES:
        lo = th.alpha_T22(0.5, p)
        hi = p - (1 - 0.5) / 0.5
        assert lo == pytest.approx(hi, abs=1e-12)
        for b in (0.0, 0.3, p):
            beta = p / 2
            d = 2 * (p - beta) + b
            second = beta * (1 - 2 * (p - beta) ** 2 / (beta**2 * d))
            assert th.alpha_T31(beta, p, b) == pytest.approx(second, abs=1e-12)
        for b in (0.0, 0.5, 1.0):
            second = p - 2 * 0.25 / (0.5 * (1 + b))
            assert th.beta_T32(0.5, p, b) == pytest.approx(second, abs=1e-12)
            d = 2 * p + (p + 1) * b
            assert th.alpha_T33(0.5, p, b) == pytest.approx(p - 8 * p * 0.25 / (0.5 * d), abs=1e-12)


def test_monotone_in_b():
    for p in P_VALUES:
        beta, gamma = 0.3 * p, 0.4
        b31 = np.linspace(0, 2 * (p - beta), 25)
        a31 = [th.alpha_T31(beta, p, b) for b in b31]
        assert all(y >= x - 1e-15 for x, y in zip(a31, a31[1:]))
        b32 = np.linspace(0, 2 * (1 - gamma), 25)
        s32 = [th.beta_T32(gamma, p, b) for b in b32]
        assert all(y >= x - 1e-15 for x, y in zip(s32, s32[1:]))
        b33 = np.linspace(0, 4 * p * 0.7 / (p + 1), 25)
        a33 = [th.alpha_T33(0.3, p, b) for b in b33]
        assert all(y >= x - 1e-15 for x, y in zip(a33, a33[1:]))


# ── reductions ────────────────────────────────────────
def test_t33_reduces_to_t22():
    for p in P_VALUES:
        for beta in np.linspace(0, 0.99, 40):
            b = 4 * p * (1 - beta) / (p + 1)
            assert th.alpha_T33(beta, p, b) == pytest.approx(th.alpha_T22(beta, p), abs=1e-10)


def test_t37_reduces_to_t24():
    for p in P_VALUES:
        lo = th.t24_lower(p)
        for gamma in np.linspace(lo, 1, 42)[1:-1]:
            assert th.beta_T37(gamma, p, 2 * (1 - gamma)) == pytest.approx(th.beta_T24(gamma, p), abs=1e-10)


def test_t38_reduces_to_t25():
    for p in range(1, 201):
        assert th.beta_T38(p, 1) == pytest.approx(th.beta_T25(p), abs=1e-10)


def test_unfixed_reductions():
    for p in P_VALUES:
        for beta in np.linspace(0, p * 0.99, 40):
            assert th.alpha_T31(beta, p, 2 * (p - beta)) == pytest.approx(
                th.alpha_T31_unfixed(beta, p), abs=1e-12)
        for gamma in np.linspace(0.01, 0.99, 40):
            assert th.beta_T32(gamma, p, 2 * (1 - gamma)) == pytest.approx(
                th.beta_T32_unfixed(gamma, p), abs=1e-12)


# ── T37 ───────────────────────────────────────────────
def test_t37_infeasible_point():
    assert th.feasibility_lhs(0.3, 1, 0.1) > 0
    assert not th.feasible_T37(0.3, 1, 0.1)
    with pytest.raises(Infeasible):
        th.beta_T37(0.3, 1, 0.1)


def test_infeasible_is_a_domain_error():
    with pytest.raises(DomainError):
        th.beta_T37(0.3, 1, 0.1)


def test_feasibility_matches_root_interval():
    for p in range(1, 5):
        for b in np.linspace(0, 2, 20):
            roots = th.gamma_roots(p, b)
            assert roots.gamma2 >= 1 - 1e-12
            assert roots.gamma4 >= 1 - 1e-12
            for gamma in np.linspace(0.01, 0.99, 50):
                if abs(th.feasibility_lhs(gamma, p, b)) < 1e-9:
                    continue
                assert th.feasible_T37(gamma, p, b) == (roots.gamma3 < gamma < 1)


def test_root_ordering():
    for p in range(1, 5):
        for b in np.linspace(0, 2, 20):
            r = th.gamma_roots(p, b)
            if r.gamma3 < 1 - 1e-9:
                assert r.gamma1 < r.gamma3 < 1 <= min(r.gamma2, r.gamma4) + 1e-12


def test_roots_at_b_zero():
    for p in P_VALUES:
        r = th.gamma_roots(p, 0)
        assert r.gamma1 == pytest.approx(1 / (1 + p), abs=1e-12)
        assert r.gamma2 == pytest.approx(1, abs=1e-12)
        assert r.gamma3 == pytest.approx((p**2 + 4) / (p + 2) ** 2, abs=1e-12)
        assert r.gamma4 == pytest.approx(1, abs=1e-12)


def _feasible_points():
    for p in range(1, 5):
        for gamma in np.linspace(0.6, 0.98, 10):
            for frac in (0.0, 0.3, 0.6, 0.9):
                b = frac * 2 * (1 - gamma)
                if not th.feasible_T37(gamma, p, b):
                    continue
                r = th.gamma_roots(p, b)
                if min(abs(gamma - r.gamma1), abs(gamma - r.gamma3), abs(r.gamma2 - gamma)) < 1e-3:
                    continue
                yield gamma, p, b


def test_g_factored_form_agrees():
    points = list(_feasible_points())
    assert points
    for gamma, p, b in points:
        assert th.g_second_deriv_at0_factored(gamma, p, b) == pytest.approx(
            th.g_second_deriv_at0(gamma, p, b), rel=1e-10)


def test_g_second_derivative_matches_finite_difference():
    exact = th.g_second_deriv_at0(0.95, 2, 0.05)
    fd = th.second_derivative_fd(lambda eta: th.g_function(eta, 0.95, 2, 0.05))
    assert abs(fd - exact) / abs(exact) < 1e-5


def test_g_second_derivative_oracle_sweep_and_sign():
    points = list(_feasible_points())[:50]
    assert len(points) >= 20
    for gamma, p, b in points:
        exact = th.g_second_deriv_at0(gamma, p, b)
        assert exact < 0
        if exact > -0.05:
            continue    # round-off of the difference quotient dominates near the feasibility edge
        fd =th.second_derivative_fd(lambda eta: th.g_function(eta, gamma, p, b))
        assert abs(fd - exact) / abs(exact) < 1e-5


def test_g_is_even():
    assert th.g_function(0.3, 0.9, 1, 0.1) == th.g_function(-0.3, 0.9, 1, 0.1)


def test_beta_t38_domain():
    assert th.beta_T38(2, 0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        th.beta_T38(1, 1.5)


# ── dispatch ──────────────────────────────────────────
def test_threshold_dispatch():
    spec = th.threshold("T31", 2, 2, 1)
    assert spec.theorem_id is TheoremId.T31
    assert spec.output_level == pytest.approx(0.5)
    assert th.threshold(TheoremId.T25, 4).output_level == 1
    assert th.threshold("LemmaPhi", 1, 0.5, 1.0).output_level == pytest.approx(4)
    with pytest.raises(DomainError):
        th.threshold("T32", 1, None, 0.5)


@given(st.floats(min_value=0.0, max_value=0.999), st.integers(min_value=1, max_value=8))
def test_alpha_t22_below_p(beta, p):
    assert th.alpha_T22(beta, p) <= p
