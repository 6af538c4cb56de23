"""
The four disk functionals of the implication chains and the estimator of
inf Re over the unit disk.

For f = z^p u with v = f'/(p z^(p-1)) = u + z u'/p:

    Convexity       1 + z f''/f'         = p + z v'/v
    Starlikeness    z f'/f               = p + z u'/u
    SqrtDerivative  sqrt(f'/(p z^(p-1))) = sqrt(v),  sqrt(1) = 1
    PowerRatio      f / z^p              = u

`functional_series` works on coefficients; `functional_values` evaluates the
same expressions pointwise for the polynomial f, which is what the
implication checks sample.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from strohhacker.schemas import DiskGrid, FunctionalCheck, FunctionalKind, InfEstimate
from strohhacker.series import (
    MultivalentFunction,
    PowerSeries,
    div,
    euler_operator,
    evaluate_many,
    evaluate_on_circle,
    sqrt1,
)

logger = logging.getLogger(__name__)

REFINE_ROUNDS = 3
TRUNCATION_WARN = 1e-8


def functional_series(f: MultivalentFunction, kind: FunctionalKind) -> PowerSeries:
    kind = FunctionalKind(kind)
    u = f.unit
    if kind is FunctionalKind.POWER_RATIO:
        return u
    if kind is FunctionalKind.STARLIKENESS:
        return f.p + div(euler_operator(u), u)
    v = f.normalized_derivative()
    if kind is FunctionalKind.CONVEXITY:
        return f.p + div(euler_operator(v), v)
    if kind is FunctionalKind.SQRT_DERIVATIVE:
        return sqrt1(v)
    raise ValueError(f"unknown functional {kind!r}")


def _truncation_flag(coeffs: np.ndarray, r: float) -> bool:
    n = coeffs.size - 1
    return bool(abs(coeffs[-1]) * r**n * (n + 1) > TRUNCATION_WARN)


class _SeriesOnDisk:
    """A plain power series sampled on circles."""

    def __init__(self, h: PowerSeries):
        self.h = h

    def on_circle(self, r: float, count: int) -> tuple[np.ndarray, np.ndarray]:
        values = evaluate_on_circle(self.h.coeffs, r, count)
        return values, np.ones(count)

    def at(self, zs: np.ndarray) -> np.ndarray:
        return evaluate_many(self.h, zs)

    def truncation_warning(self, r: float) -> bool:
        return _truncation_flag(self.h.coeffs, r)


class FunctionalOnDisk:
    """Exact pointwise values of one functional of the polynomial f = z^p u."""

    def __init__(self, f: MultivalentFunction, kind: FunctionalKind):
        self.f = f
        self.kind = FunctionalKind(kind)
        k = np.arange(f.order + 1)
        u = f.unit.coeffs
        self._jets = (u, k * u, k * (k - 1) * u)   # u, z u', z^2 u''
        self._jet_series = [PowerSeries(c) for c in self._jets]

    def _combine(self, u: np.ndarray, zu1: np.ndarray, zu2: np.ndarray):
        p = self.f.p
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind is FunctionalKind.POWER_RATIO:
                return u, np.ones(u.shape)
            if self.kind is FunctionalKind.STARLIKENESS:
                return p + zu1 / u, np.abs(u)
            v = u + zu1 / p
            if self.kind is FunctionalKind.SQRT_DERIVATIVE:
                # Re of the principal root is |Re| of the analytic branch; the
                # branch has mean Re equal to 1 on each circle, so the circle
                # minima agree whenever either is non-negative.
                return np.sqrt(v), np.abs(v)
            zv1 = zu1 + (zu1 + zu2) / p
            return p + zv1 / v, np.abs(v)

    def on_circle(self, r: float, count: int) -> tuple[np.ndarray, np.ndarray]:
        jets = [evaluate_on_circle(c, r, count) for c in self._jets]
        return self._combine(*jets)

    def at(self, zs: np.ndarray) -> np.ndarray:
        jets = [evaluate_many(s, zs) for s in self._jet_series]
        return self._combine(*jets)[0]

    def truncation_warning(self, r: float) -> bool:
        return _truncation_flag(self.f.unit.coeffs, r)


def functional_values(f: MultivalentFunction, kind: FunctionalKind, zs) -> np.ndarray:
    return FunctionalOnDisk(f, kind).at(np.asarray(zs, dtype=np.complex128))


def _real_parts(values: np.ndarray) -> np.ndarray:
    re = np.real(values)
    # a vanishing denominator on a sample point makes the functional unbounded below
    return np.where(np.isfinite(re), re, -np.inf)


def _circle_minimum(fn, r: float, count: int) -> tuple[float, complex, float]:
    values, denominators = fn.on_circle(r, count)
    re = _real_parts(values)
    j = int(np.argmin(re))
    best = float(re[j])
    theta = 2.0 * math.pi * j / count
    step = 2.0 * math.pi / count
    if np.isfinite(best):
        for _ in range(REFINE_ROUNDS):
            step /= 2.0
            candidates = theta + np.array([-step, step])
            local = _real_parts(fn.at(r * np.exp(1j * candidates)))
            k = int(np.argmin(local))
            if local[k] < best:
                best, theta = float(local[k]), float(candidates[k])
    return best, r * complex(math.cos(theta), math.sin(theta)), float(np.min(denominators))


def inf_real_disk(h: PowerSeries | FunctionalOnDisk, grid: DiskGrid) -> InfEstimate:
    """Minimum of Re h on each grid circle; the value is the outermost circle's minimum,
    an upper bound for the infimum over the open disk."""
    fn = _SeriesOnDisk(h) if isinstance(h, PowerSeries) else h
    per_radius: list[float] = []
    argmin = 0j
    min_denominator = math.inf
    for r in grid.radii:
        value, argmin, denominator = _circle_minimum(fn, r, grid.angular_count)
        per_radius.append(value)
        min_denominator = min(min_denominator, denominator)
    return InfEstimate(
        value=per_radius[-1],
        argmin=(argmin.real, argmin.imag),
        per_radius_min=per_radius,
        min_modulus_denominator=min_denominator,
        truncation_warning=fn.truncation_warning(grid.r_max),
    )


def pointwise_check(
    f: MultivalentFunction,
    kind: FunctionalKind,
    bound: float,
    grid: DiskGrid,
    mode: str = "pointwise",
) -> FunctionalCheck:
    kind = FunctionalKind(kind)
    if mode == "pointwise":
        target = FunctionalOnDisk(f, kind)
    elif mode == "series":
        target = functional_series(f, kind)
    else:
        raise ValueError(f"unknown evaluation mode {mode!r}")
    estimate = inf_real_disk(target, grid)
    margin = estimate.value - bound
    if estimate.truncation_warning:
        logger.debug("[functionals] truncation tail above %.0e for %s", TRUNCATION_WARN, kind.value)
    return FunctionalCheck(
        kind=kind,
        bound=bound,
        margin=margin,
        passed=margin > 0,
        estimate=estimate,
        grid_fingerprint=grid.fingerprint,
        mode=mode,
    )
