"""
Closed-form thresholds of the Marx-Strohhäcker type implications, the
auxiliary functions their proofs maximise, and independent numerical oracles.

Piecewise thresholds evaluate their first branch at the junction (the two
branches agree there). Parameters outside a theorem's stated range raise
DomainError; nothing is clamped.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from strohhacker.errors import DomainError, Infeasible, SingularDenominator
from strohhacker.schemas import RootQuadruple, TheoremId, ThresholdSpec

RANGE_TOL = 1e-12
FD_STEP = 1e-4


def _check_p(p: int) -> int:
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    return int(p)


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


# ── phi(x, a, b) = (1 + x) / ((a - b)^2 x + b^2) ──
def phi(x: float, a: float, b: float) -> float:
    _check(0 <= b < a, f"phi needs 0 <= b < a, got a={a}, b={b}")
    _check(x >= 0, f"phi is defined on [0, inf), got x={x}")
    den = (a - b) ** 2 * x + b**2
    if den == 0:
        raise SingularDenominator("phi(0, a, 0) is unbounded")
    return (1.0 + x) / den


def phi_min(a: float, b: float) -> float:
    _check(0 <= b < a, f"phi_min needs 0 <= b < a, got a={a}, b={b}")
    if b <= a / 2:
        return 1.0 / (a - b) ** 2   # decreasing: attained at infinity
    return 1.0 / b**2               # increasing: attained at the origin


def phi_at_infinity(a: float, b: float) -> float:
    _check(0 <= b < a, f"phi needs 0 <= b < a, got a={a}, b={b}")
    return 1.0 / (a - b) ** 2


def phi_min_bruteforce(a: float, b: float, samples: int = 100_000, x_max: float = 1e6) -> float:
    """Minimum of phi over a log grid on [0, x_max], the point x = inf and a bounded
    local refinement around the best grid node."""
    _check(0 <= b < a, f"phi needs 0 <= b < a, got a={a}, b={b}")
    xs = np.concatenate([[0.0], np.logspace(-8.0, math.log10(x_max), samples)])

    def values(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (1.0 + x) / ((a - b) ** 2 * x + b**2)
        return np.where(np.isfinite(v), v, np.inf)   # b = 0, x = 0 sentinel

    grid = values(xs)
    j = int(np.argmin(grid))
    best = float(grid[j])
    lo, hi = xs[max(j - 1, 0)], xs[min(j + 1, xs.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: float(values(np.array([x]))[0]),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    # t = x / (1 + x) = 1 closes [0, inf)
    return min(best, phi_at_infinity(a, b))


# ── A_p ───────────────────────────────────────────────
def alpha_T22(beta: float, p: int) -> float:
    p = _check_p(p)
    _check(0 <= beta < 1, f"T22 needs 0 <= beta < 1, got {beta}")
    if beta <= 0.5:
        return p - beta / (1 - beta)
    return p - (1 - beta) / beta


def t24_lower(p: int) -> float:
    p = _check_p(p)
    return (p**2 + 1) / (p + 1) ** 2


def _check_t24(gamma: float, p: int) -> int:
    p = _check_p(p)
    _check(t24_lower(p) < gamma < 1,
           f"T24 needs {(p**2 + 1)}/{(p + 1) ** 2} < gamma < 1, got {gamma}")
    return p


def beta_T24(gamma: float, p: int) -> float:
    p = _check_t24(gamma, p)
    return math.sqrt(((2 * p + 1) * gamma - 1) / (2 * p))


def beta_T25(p: int) -> float:
    return math.sqrt(_check_p(p)) / 2


def h_function(eta: float, gamma: float, p: int) -> float:
    p = _check_t24(gamma, p)
    x = gamma - ((1 - gamma) ** 2 + eta**2) / (2 * p * (1 - gamma))
    return x + math.hypot(x, eta)


def h_second_deriv_at0(gamma: float, p: int) -> float:
    p = _check_t24(gamma, p)
    num = 2 * (1 - (2 * p + 1) * gamma + p**2 * (1 - gamma))
    return num / (p * (1 - gamma) * ((2 * p + 1) * gamma - 1))


# ── A_{p,b} ───────────────────────────────────────────
def alpha_T31(beta: float, p: int, b: float) -> float:
    p = _check_p(p)
    _check(0 <= beta < p, f"T31 needs 0 <= beta < p, got beta={beta}")
    _check(0 <= b <= 2 * (p - beta) + RANGE_TOL, f"T31 needs 0 <= b <= 2(p - beta), got b={b}")
    d = 2 * (p - beta) + b
    if beta <= p / 2:
        return beta * (1 - 2 / d)
    return beta * (1 - 2 * (p - beta) ** 2 / (beta**2 * d))


def alpha_T31_unfixed(beta: float, p: int) -> float:
    """T31 at b = 2(p - beta), the bound without a fixed coefficient."""
    p = _check_p(p)
    _check(0 <= beta < p, f"T31 needs 0 <= beta < p, got beta={beta}")
    if beta <= p / 2:
        return beta * (1 - 1 / (2 * (p - beta)))
    return beta - (p - beta) / (2 * beta)


def beta_T32(gamma: float, p: int, b: float) -> float:
    p = _check_p(p)
    _check(0 < gamma < 1, f"T32 needs 0 < gamma < 1, got {gamma}")
    _check(0 <= b <= 2 * (1 - gamma) + RANGE_TOL, f"T32 needs 0 <= b <= 2(1 - gamma), got b={b}")
    d = 2 * (1 - gamma) + b
    if gamma <= 0.5:
        return p - 2 * gamma / d
    return p - 2 * (1 - gamma) ** 2 / (gamma * d)


def beta_T32_unfixed(gamma: float, p: int) -> float:
    """T32 at b = 2(1 - gamma)."""
    p = _check_p(p)
    _check(0 < gamma < 1, f"T32 needs 0 < gamma < 1, got {gamma}")
    if gamma <= 0.5:
        return p - gamma / (2 * (1 - gamma))
    return p - (1 - gamma) / (2 * gamma)


def alpha_T33(beta: float, p: int, b: float) -> float:
    p = _check_p(p)
    _check(0 <= beta < 1, f"T33 needs 0 <= beta < 1, got {beta}")
    _check(0 <= (p + 1) * b <= 4 * p * (1 - beta) + RANGE_TOL,
           f"T33 needs 0 <= (p + 1) b <= 4p(1 - beta), got b={b}")
    d = 4 * p * (1 - beta) + (p + 1) * b
    if beta <= 0.5:
        return p - 8 * p * beta / d
    return p - 8 * p * (1 - beta) ** 2 / (beta * d)


def corollary_T31(p: int, b: float) -> float:
    """Convexity bound giving Re(z f'/f) > p/2, for 0 <= b <= p."""
    return alpha_T31(_check_p(p) / 2, p, b)


def corollary_T32(p: int, b: float) -> float:
    """Starlikeness bound p - 1/(1 + b) giving Re(f/z^p) > 1/2, for 0 <= b <= 1."""
    return beta_T32(0.5, p, b)


def corollary_T33(p: int, b: float) -> float:
    """Convexity bound p - 4p/(2p + (p + 1) b) giving Re sqrt(f'/(p z^(p-1))) > 1/2."""
    return alpha_T33(0.5, p, b)


# ── T37 ───────────────────────────────────────────────
def _check_t37_domain(gamma: float, p: int, b: float) -> int:
    p = _check_p(p)
    _check(0 < gamma < 1, f"T37 needs 0 < gamma < 1, got {gamma}")
    _check(0 <= b <= 2 * (1 - gamma) + RANGE_TOL, f"T37 needs 0 <= b <= 2(1 - gamma), got b={b}")
    return p


def feasibility_lhs(gamma: float, p: int, b: float) -> float:
    d = 2 * (1 - gamma) + b
    return p**2 * d**2 + 16 * (1 - gamma) ** 2 - 8 * p * gamma * d


def feasible_T37(gamma: float, p: int, b: float) -> bool:
    p = _check_p(p)
    _check(0 < gamma < 1 and b >= 0, f"T37 feasibility needs 0 < gamma < 1, b >= 0")
    return feasibility_lhs(gamma, p, b) < 0


def _t37_numerator(gamma: float, p: int, b: float) -> float:
    return (4 + (2 + b) * p) * gamma - 2 * (1 + p) * gamma**2 - 2


def _check_t37(gamma: float, p: int, b: float) -> int:
    p = _check_t37_domain(gamma, p, b)
    if not feasible_T37(gamma, p, b):
        raise Infeasible(f"T37 feasibility condition fails at gamma={gamma}, p={p}, b={b}")
    return p


def beta_T37(gamma: float, p: int, b: float) -> float:
    p = _check_t37(gamma, p, b)
    return math.sqrt(_t37_numerator(gamma, p, b) / (p * (b + 2 * (1 - gamma))))


def gamma_roots(p: int, b: float) -> RootQuadruple:
    p = _check_p(p)
    _check(b >= 0, f"the fixed coefficient must be non-negative, got {b}")
    s12 = math.sqrt(p) * math.sqrt(b * (8 + b * p) + 4 * p * (1 + b))
    s34 = 4 * math.sqrt(p**2 * (1 + b) + 2 * p * b)
    c12 = 4 + (2 + b) * p
    c34 = 8 + p * (2 + b) * (2 + p)
    return RootQuadruple(
        gamma1=(c12 - s12) / (4 * (1 + p)),
        gamma2=(c12 + s12) / (4 * (1 + p)),
        gamma3=(c34 - s34) / (2 * (p + 2) ** 2),
        gamma4=(c34 + s34) / (2 * (p + 2) ** 2),
    )


def g_function(eta: float, gamma: float, p: int, b: float) -> float:
    p = _check_t37(gamma, p, b)
    d = 2 * (1 - gamma) + b
    x = (_t37_numerator(gamma, p, b) - 2 * eta**2) / (p * d)
    return x + math.hypot(x, eta)


def g_second_deriv_at0(gamma: float, p: int, b: float) -> float:
    p = _check_t37(gamma, p, b)
    d = 2 * (1 - gamma) + b
    return feasibility_lhs(gamma, p, b) / (p * d * _t37_numerator(gamma, p, b))


def g_second_deriv_at0_factored(gamma: float, p: int, b: float) -> float:
    p = _check_t37(gamma, p, b)
    r = gamma_roots(p, b)
    d = 2 * (1 - gamma) + b
    num = 2 * (p + 2) ** 2 * (gamma - r.gamma3) * (gamma - r.gamma4)
    return num / (p * (p + 1) * d * (gamma - r.gamma1) * (r.gamma2 - gamma))


def beta_T38(p: int, b: float) -> float:
    p = _check_p(p)
    _check(0 <= b <= 1, f"T38 needs 0 <= b <= 1, got {b}")
    return math.sqrt((1 + b) * p / 8)


# ── oracles ───────────────────────────────────────────
def second_derivative_fd(fn: Callable[[float], float], x: float = 0.0, step: float = FD_STEP) -> float:
    """Central second difference with one Richardson extrapolation step."""

    def central(h: float) -> float:
        return (fn(x + h) - 2 * fn(x) + fn(x - h)) / h**2

    coarse, fine = central(step), central(step / 2)
    return (4 * fine - coarse) / 3


# ── dispatch ──────────────────────────────────────────
def threshold(theorem_id: TheoremId | str, p: int, b: float | None = None,
              level: float | None = None) -> ThresholdSpec:
    """The output bound of one theorem; `level` is beta (T22, T31, T33), gamma
    (T24, T32, T37) or, for LemmaPhi, the parameter a of phi."""
    tid = TheoremId(theorem_id)

    def need(value, name):
        if value is None:
            raise DomainError(f"{tid.value} needs {name}")
        return value

    if tid is TheoremId.T22:
        out = alpha_T22(need(level, "beta"), p)
    elif tid is TheoremId.T24:
        out = beta_T24(need(level, "gamma"), p)
    elif tid is TheoremId.T25:
        out = beta_T25(p)
    elif tid is TheoremId.T31:
        out = alpha_T31(need(level, "beta"), p, need(b, "b"))
    elif tid is TheoremId.T32:
        out = beta_T32(need(level, "gamma"), p, need(b, "b"))
    elif tid is TheoremId.T33:
        out = alpha_T33(need(level, "beta"), p, need(b, "b"))
    elif tid is TheoremId.T37:
        out = beta_T37(need(level, "gamma"), p, need(b, "b"))
    elif tid is TheoremId.T38:
        out = beta_T38(p, need(b, "b"))
    else:
        out = phi_min(need(level, "a"), need(b, "b"))
    return ThresholdSpec(theorem_id=tid, p=p, b=b, input_level=level, output_level=out)
