"""
Admissibility of the theorem-specific psi functions.

Every implication is proved by showing psi(i rho, sigma) stays outside the
half-plane {Re w > threshold} for sigma <= -k (1 + rho^2). This module samples
that region and certifies sup Re psi <= threshold, patching the supremum with
the closed-form limit when it is only approached as |rho| -> inf.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from strohhacker import thresholds
from strohhacker.errors import DomainError, PoleHit
from strohhacker.schemas import AdmissibilityProblem, PsiId, SupReport, TheoremId

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12
CERT_TOL = 1e-9
RHO_MAX = 1e3
SAMPLES = 2001
INTERIOR_SCALES = (1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0)

REGION_NOTE = (
    "admissibility region sampled as sigma <= -n(1+rho^2)/2; "
    "the variant -n(1+rho)^2/2 is not used."
)
FIXED_B_NOTE = "fixed-coefficient region applied with n = 1."

RATIONAL = {PsiId.T22, PsiId.T31, PsiId.T32, PsiId.T33}
UNFIXED = {PsiId.T22, PsiId.T24, PsiId.T25}


def _theorem(psi_id: PsiId) -> TheoremId:
    return TheoremId(psi_id.value.removeprefix("Psi"))


def _zeta(psi_id: PsiId, p: int, b: float, level: float | None) -> float:
    if psi_id is PsiId.T31:
        return b / (p - level)
    if psi_id in (PsiId.T32, PsiId.T37):
        return b / (1 - level)
    if psi_id is PsiId.T33:
        return (p + 1) * b / (2 * p * (1 - level))
    return 2 * b   # T38: sigma <= -(1 + rho^2)/(1 + b)


def make_problem(psi_id: PsiId | str, p: int, b: float = 0.0,
                 level: float | None = None) -> AdmissibilityProblem:
    """Region and threshold of one theorem; `level` is beta for T22/T31/T33 and
    gamma for T24/T32/T37, unused for T25/T38."""
    pid = PsiId(psi_id)
    tid = _theorem(pid)
    if pid in UNFIXED:
        if b:
            raise DomainError(f"{pid.value} has no fixed coefficient, got b={b}")
        spec = thresholds.threshold(tid, p, None, level)
        return AdmissibilityProblem(psi_id=pid, p=p, b=0.0, level=level,
                                    curve_k=0.5, zeta=None, threshold=spec.output_level)
    spec = thresholds.threshold(tid, p, b, level)
    zeta = _zeta(pid, p, b, level)
    if not 0 <= zeta <= 2 + thresholds.RANGE_TOL:
        raise DomainError(f"{pid.value} needs 0 <= zeta <= 2, got {zeta}")
    return AdmissibilityProblem(psi_id=pid, p=p, b=b, level=level,
                                curve_k=2 / (2 + zeta), zeta=zeta, threshold=spec.output_level)


def _guard(den: np.ndarray, psi_id: PsiId) -> None:
    if np.any(np.abs(den) <= POLE_TOL):
        raise PoleHit(f"{psi_id.value}: denominator vanishes on the sampled region")


def psi_eval(problem: AdmissibilityProblem, r, s):
    """psi(r, s) for scalars or arrays; square roots are principal."""
    r = np.asarray(r, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    pid, p, lv = problem.psi_id, problem.p, problem.level
    if pid in (PsiId.T22, PsiId.T33):
        den = (1 - lv) * r + lv
        _guard(den, pid)
        out = 2 * (1 - lv) * s / den + p
    elif pid is PsiId.T31:
        den = (p - lv) * r + lv
        _guard(den, pid)
        out = (p - lv) * s / den + (p - lv) * r + lv
    elif pid is PsiId.T32:
        den = (1 - lv) * r + lv
        _guard(den, pid)
        out = (1 - lv) * s / den + p
    elif pid in (PsiId.T24, PsiId.T37):
        out = np.sqrt((1 - lv) * r + lv + (1 - lv) * s / p)
    else:
        out = np.sqrt((r + s / p + 1) / 2)
    return complex(out) if out.ndim == 0 else out


def asymptotic_limit(problem: AdmissibilityProblem) -> float:
    """lim Re psi(i rho, -k(1 + rho^2)) as |rho| -> inf."""
    pid, p, lv, k = problem.psi_id, problem.p, problem.level, problem.curve_k
    if pid in (PsiId.T22, PsiId.T33):
        return p - 2 * lv * k / (1 - lv)
    if pid is PsiId.T31:
        return lv * (1 - k / (p - lv))
    if pid is PsiId.T32:
        return p - lv * k / (1 - lv)
    if pid in (PsiId.T24, PsiId.T37):
        return math.sqrt(p * (1 - lv) / (4 * k))
    return math.sqrt(p / (8 * k))


def rho_grid(rho_max: float = RHO_MAX, samples: int = SAMPLES) -> np.ndarray:
    """sinh-spaced nodes on [-rho_max, rho_max], odd count so rho = 0 is a node."""
    n = samples | 1
    spread = math.asinh(rho_max)
    u = np.linspace(-1.0, 1.0, n)
    rho = rho_max * np.sinh(spread * u) / math.sinh(spread)
    rho[n // 2] = 0.0
    return rho


def boundary_sigma(problem: AdmissibilityProblem, rho) -> np.ndarray:
    return -problem.curve_k * (1.0 + np.asarray(rho, dtype=np.float64) ** 2)


def re_psi(problem: AdmissibilityProblem, rho, sigma) -> np.ndarray:
    return np.real(psi_eval(problem, 1j * np.asarray(rho, dtype=np.float64), sigma))


def sup_on_region(problem: AdmissibilityProblem, rho_max: float = RHO_MAX,
                  samples: int = SAMPLES) -> SupReport:
    if rho_max <= 0:
        raise DomainError(f"rho_max must be positive, got {rho_max}")
    if samples < 64:
        raise DomainError(f"at least 64 samples are needed, got {samples}")
    rho = rho_grid(rho_max, samples)
    sigma = boundary_sigma(problem, rho)
    curve = re_psi(problem, rho, sigma)
    # boundary first, so ties resolve to the boundary curve and the lowest rho index
    stacked = np.concatenate([curve] + [re_psi(problem, rho, c * sigma) for c in INTERIOR_SCALES])
    numeric_max = float(np.max(stacked))
    # among samples within round-off of the maximum, the one nearest rho = 0
    near = np.flatnonzero(stacked >= numeric_max - 1e-12)
    j = int(near[np.argmin(np.abs(rho[near % rho.size]))])
    arg_rho = float(rho[j % rho.size])

    far = np.abs(rho) > rho_max / 10
    at_infinity = bool(np.max(curve[far]) > np.max(curve[~far]) + 1e-12)
    limit = asymptotic_limit(problem)
    sup_value = max(numeric_max, limit) if at_infinity else numeric_max

    notes = [REGION_NOTE]
    if problem.zeta is not None:
        notes.append(FIXED_B_NOTE)
    if at_infinity:
        notes.append("supremum approached as |rho| -> inf; closed-form limit used")
    certified = sup_value <= problem.threshold + CERT_TOL
    if not certified:
        logger.warning("[admissibility] %s p=%s b=%s level=%s: sup %.12g above threshold %.12g",
                       problem.psi_id.value, problem.p, problem.b, problem.level,
                       sup_value, problem.threshold)
    return SupReport(
        psi_id=problem.psi_id,
        sup_value=sup_value,
        arg_rho=arg_rho,
        attained_at_infinity=at_infinity,
        margin=problem.threshold - sup_value,
        threshold=problem.threshold,
        numeric_max=numeric_max,
        asymptotic_limit=limit,
        curve_k=problem.curve_k,
        rho_max=rho_max,
        samples=int(rho.size),
        certified=certified,
        notes=notes,
    )


def interior_monotonicity_check(problem: AdmissibilityProblem, rho: float,
                                sigma_floor: float = -10.0, samples: int = 257) -> bool:
    """Re psi(i rho, sigma) is non-decreasing in sigma from deep inside the region
    up to the boundary curve, so the boundary carries the supremum."""
    top = float(boundary_sigma(problem, rho))
    sigmas = np.linspace(min(sigma_floor, 3 * top), top, samples)
    values = re_psi(problem, np.full(samples, rho), sigmas)
    return bool(np.all(np.diff(values) >= -1e-12))


def rho_curve(problem: AdmissibilityProblem, rho_max: float = RHO_MAX,
              samples: int = SAMPLES) -> list[tuple[float, float]]:
    """(rho, Re psi) along the boundary curve, for plotting."""
    rho = rho_grid(rho_max, samples)
    values = re_psi(problem, rho, boundary_sigma(problem, rho))
    return [(float(x), float(y)) for x, y in zip(rho, values)]
