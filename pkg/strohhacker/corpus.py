"""
Test-function families in A_p and A_{p,b}.

Every generated f = z^p u is a polynomial whose normalized part u is zero-free
on the sampling disk; random families are regenerated with a halved
perturbation size until that holds. Corpus members must also keep u and
f'/(p z^(p-1)) at least MEMBER_FLOOR away from 0.
"""
from __future__ import annotations

import logging
import math
from typing import Iterable, Iterator

import numpy as np

from strohhacker.config import DEFAULT_ORDER
from strohhacker.errors import DomainError, NotLocallyValent, StrohhackerError, UnitVanishes
from strohhacker.schemas import CorpusEntry, CorpusManifest, DiskGrid, FamilyId, FamilySpec
from strohhacker.series import (
    MultivalentFunction,
    PowerSeries,
    binomial_series,
    evaluate_on_circle,
    mul,
    scale,
    series_exp,
)

logger = logging.getLogger(__name__)

VANISH_TOL = 1e-8
MEMBER_FLOOR = 0.05
MAX_RETRIES = 8
MAX_WINDING_COUNT = 1 << 18
DILATION_RADII = (0.25, 0.35, 0.45, 0.55, 0.65, 0.75)

RANDOM_FAMILIES = {FamilyId.FIXED_B_PERTURBATION, FamilyId.RANDOM_BOUNDED,
                   FamilyId.KERNEL_PERTURBATION}


# ── guards ────────────────────────────────────────────
def winding_number(coeffs: np.ndarray, r: float, count: int) -> int:
    """Turns of the polynomial around 0 along |z| = r, i.e. its zeros inside the circle."""
    n = max(count, 4 * (1 << max(len(coeffs) - 1, 1).bit_length()))
    values = evaluate_on_circle(coeffs, r, min(n, MAX_WINDING_COUNT))
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2 * math.pi)))


def zero_free(coeffs: np.ndarray, grid: DiskGrid, floor: float = VANISH_TOL) -> bool:
    for r in grid.radii:
        if np.min(np.abs(evaluate_on_circle(coeffs, r, grid.angular_count))) <= floor:
            return False
    return winding_number(coeffs, grid.r_max, grid.angular_count) == 0


def unit_guard(f: MultivalentFunction, grid: DiskGrid | None = None,
               floor: float = VANISH_TOL) -> bool:
    return zero_free(f.unit.coeffs, grid or DiskGrid.default(), floor)


def local_valence_guard(f: MultivalentFunction, grid: DiskGrid | None = None,
                        floor: float = VANISH_TOL) -> bool:
    """f'/(p z^(p-1)) stays away from 0 on the grid and has no zero inside the outer circle."""
    return zero_free(f.normalized_derivative().coeffs, grid or DiskGrid.default(), floor)


# ── families ──────────────────────────────────────────
def _tail(seed: int, order: int, first: int = 2) -> np.ndarray:
    """Seeded coefficients d_k / k^2 for k = first..order, with |d_k| <= 1."""
    rng = np.random.default_rng(seed)
    n = max(order - first + 1, 0)
    moduli = rng.uniform(0.0, 1.0, n)
    phases = rng.uniform(0.0, 2 * math.pi, n)
    k = np.arange(first, first + n)
    return moduli * np.exp(1j * phases) / k**2


def _pin_second(coeffs: np.ndarray, b: float | None) -> np.ndarray:
    """Replace u_1 by the declared b when they agree up to rounding."""
    if b is None or coeffs.size < 2:
        return coeffs
    if abs(coeffs[1] - b) > 1e-12:
        raise DomainError(f"family produces u_1 = {coeffs[1]}, not the declared b = {b}")
    out = np.array(coeffs, dtype=np.complex128)
    out[1] = b
    return out


def _odd_log(order: int) -> PowerSeries:
    """log((1 + z)/(1 - z)) = 2 (z + z^3/3 + ...)."""
    c = np.zeros(order + 1)
    k = np.arange(1, order + 1, 2)
    c[k] = 2.0 / k
    return PowerSeries(c)


def _need_b(spec: FamilySpec) -> float:
    if spec.b is None:
        raise DomainError(f"{spec.family_id.value} needs the fixed coefficient b")
    return spec.b


def _unit_coeffs(spec: FamilySpec, eps: float) -> np.ndarray:
    p, n, x = spec.p, spec.order, spec.parameter
    fam = spec.family_id
    if fam is FamilyId.MONOMIAL:
        if spec.b:
            raise DomainError("z^p lies in A_{p,0} only")
        return np.ones(1, dtype=np.complex128)
    if fam is FamilyId.HALF_PLANE_KERNEL:
        if not 0 < x <= 2 * p:
            raise DomainError(f"HalfPlaneKernel needs 0 < t <= 2p, got t={x}")
        return binomial_series(x, n).coeffs
    if fam is FamilyId.CONVEX_EXTREMAL:
        if not 0 < x <= 1:
            raise DomainError(f"ConvexExtremal needs 0 < s <= 1, got s={x}")
        v = series_exp(_odd_log(n) * x).coeffs
        # f = integral of p z^(p-1) v  =>  u_k = p v_k / (p + k)
        return p * v / (p + np.arange(n + 1))
    if fam is FamilyId.DILATED_KERNEL:
        b = _need_b(spec)
        if not 0 < x < 1 or b <= 0:
            raise DomainError(f"DilatedKernel needs 0 < r < 1 and b > 0, got r={x}, b={b}")
        return scale(binomial_series(b / x, n), x).coeffs
    if n < 1:
        raise DomainError(f"{fam.value} needs order >= 1")
    if fam is FamilyId.FIXED_B_PERTURBATION:
        b = spec.b or 0.0
        return np.concatenate([[1.0, b], eps * _tail(spec.seed, n)])
    if fam is FamilyId.RANDOM_BOUNDED:
        c = np.concatenate([[1.0], eps * _tail(spec.seed, n, first=1)])
        if spec.b is not None:
            c[1] = spec.b
        return c
    if fam is FamilyId.KERNEL_PERTURBATION:
        b = _need_b(spec)
        base = scale(binomial_series(2 * b, n), 0.5)
        bump = PowerSeries(np.concatenate([[1.0, 0.0], eps * _tail(spec.seed, n)]))
        return mul(base, bump).coeffs
    raise DomainError(f"unknown family {fam!r}")


def _attempt(spec: FamilySpec, eps: float) -> MultivalentFunction:
    coeffs = _pin_second(_unit_coeffs(spec, eps), spec.b)
    return MultivalentFunction(p=spec.p, unit=PowerSeries(coeffs), b=spec.b)


def generate_with_spec(spec: FamilySpec, grid: DiskGrid | None = None, valent: bool = False,
                       floor: float = VANISH_TOL) -> tuple[MultivalentFunction, FamilySpec]:
    """The function and the FamilySpec that produced it (with the perturbation size
    actually used after any halving). `valent` also requires f'/(p z^(p-1)) to
    clear `floor`."""
    grid = grid or DiskGrid.default()
    eps = spec.parameter
    retries = MAX_RETRIES if spec.family_id in RANDOM_FAMILIES and eps else 0
    for attempt in range(retries + 1):
        f = _attempt(spec, eps)
        unit_ok = unit_guard(f, grid, floor)
        if unit_ok and (not valent or local_valence_guard(f, grid, floor)):
            return f, spec.model_copy(update={"parameter": eps})
        if attempt < retries:
            logger.info("[corpus] %s: %s within %.0e of 0 at eps=%.3g, halving",
                        function_id(spec), "u" if not unit_ok else "f'", floor, eps)
            eps /= 2
    if not unit_ok:
        raise UnitVanishes(f"{function_id(spec)}: u comes within {floor:g} of 0 on the sampling disk")
    raise NotLocallyValent(f"{function_id(spec)}: f'/(p z^(p-1)) comes within {floor:g} of 0")


def generate(spec: FamilySpec, grid: DiskGrid | None = None) -> MultivalentFunction:
    return generate_with_spec(spec, grid)[0]


def function_id(spec: FamilySpec) -> str:
    parts = [spec.family_id.value, f"p{spec.p}"]
    if spec.b is not None:
        parts.append(f"b{spec.b:g}")
    parts.append(f"x{spec.parameter:g}")
    if spec.family_id in RANDOM_FAMILIES:
        parts.append(f"s{spec.seed}")
    return "-".join(parts)


def to_entry(f: MultivalentFunction, spec: FamilySpec) -> CorpusEntry:
    return CorpusEntry(function_id=function_id(spec), spec=spec, p=f.p, b=f.b,
                       unit_coeffs=f.unit.to_json())


def from_entry(entry: CorpusEntry) -> MultivalentFunction:
    return MultivalentFunction(p=entry.p, unit=PowerSeries.from_json(entry.unit_coeffs), b=entry.b)


# ── corpora ───────────────────────────────────────────
def _candidates(p: int, b: float | None, seed: int, order: int) -> Iterator[FamilySpec]:
    def spec(family: FamilyId, parameter: float, s: int = 0) -> FamilySpec:
        return FamilySpec(family_id=family, p=p, b=b, parameter=parameter, seed=s, order=order)

    fixed = b or 0.0
    if not fixed:
        yield spec(FamilyId.MONOMIAL, 0.0)
    if b is None:
        # partial sums of (1 - z)^(-t) keep their zeros off the open disk for t <= 1
        for t in (0.25, 0.5, 0.75, 1.0):
            yield spec(FamilyId.HALF_PLANE_KERNEL, t)
        for s in (0.25, 0.5, 0.75, 1.0):
            yield spec(FamilyId.CONVEX_EXTREMAL, s)
        cycle = (FamilyId.RANDOM_BOUNDED, FamilyId.FIXED_B_PERTURBATION)
    else:
        if fixed > 0:
            # z^p + b z^(p+1)
            yield spec(FamilyId.FIXED_B_PERTURBATION, 0.0)
        if 0 < fixed <= 1:
            yield spec(FamilyId.HALF_PLANE_KERNEL, fixed)
        s = fixed * (p + 1) / (2 * p)
        if 0 < s <= 1:
            yield spec(FamilyId.CONVEX_EXTREMAL, s)
        if fixed > 0:
            for r in DILATION_RADII:
                yield spec(FamilyId.DILATED_KERNEL, r)
        if fixed < 1:
            cycle = (FamilyId.FIXED_B_PERTURBATION, FamilyId.RANDOM_BOUNDED,
                     FamilyId.KERNEL_PERTURBATION)
        else:
            cycle = (FamilyId.KERNEL_PERTURBATION,)
    sizes = (0.5, 0.25, 0.1)
    i = 0
    while True:
        yield spec(cycle[i % len(cycle)], sizes[i % len(sizes)], seed + i)
        i += 1


def build_corpus(p: int, b: float | None = None, size: int = 20, seed: int = 0,
                 order: int = DEFAULT_ORDER, grid: DiskGrid | None = None,
                 valent: bool = True) -> CorpusManifest:
    """`size` functions of A_p (b = None) or A_{p,b}, deterministic in `seed`.
    Members keep u (and, when `valent`, f'/(p z^(p-1))) at least MEMBER_FLOOR
    away from 0 on the grid."""
    grid = grid or DiskGrid.default()
    entries: list[CorpusEntry] = []
    if size <= 0:
        return CorpusManifest(seed=seed, entries=entries)
    for attempts, spec in enumerate(_candidates(p, b, seed, order)):
        if len(entries) >= size or attempts >= 10 * size:
            break
        try:
            f, used = generate_with_spec(spec, grid, valent, MEMBER_FLOOR)
        except StrohhackerError as err:
            logger.info("[corpus] skipping %s: %s", function_id(spec), err)
            continue
        entries.append(to_entry(f, used))
    if len(entries) < size:
        logger.warning("[corpus] only %d of %d functions for p=%s b=%s", len(entries), size, p, b)
    return CorpusManifest(seed=seed, entries=entries)


def monomial_corpus(ps: Iterable[int]) -> CorpusManifest:
    entries = []
    for p in sorted(set(ps)):
        spec = FamilySpec(family_id=FamilyId.MONOMIAL, p=p, b=0.0)
        entries.append(to_entry(generate(spec), spec))
    return CorpusManifest(seed=0, entries=entries)


def merge(manifests: Iterable[CorpusManifest], seed: int = 0) -> CorpusManifest:
    seen: dict[str, CorpusEntry] = {}
    for m in manifests:
        for e in m.entries:
            seen.setdefault(e.function_id, e)
    return CorpusManifest(seed=seed, entries=[seen[k] for k in sorted(seen)])
