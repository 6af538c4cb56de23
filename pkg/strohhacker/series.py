"""
Truncated complex power series on the closed unit disk.

A `PowerSeries` stores c_0..c_N densely; every binary operation truncates to
the smaller operand order. `MultivalentFunction` wraps f(z) = z^p u(z) with
u(0) = 1, the representation the functionals and the corpus work with.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from strohhacker.config import DEFAULT_ORDER
from strohhacker.errors import (
    ClassMismatch,
    NotNormalized,
    OutOfDisk,
    ZeroLeadingCoefficient,
)

LEAD_TOL = 1e-14
DISK_TOL = 1e-12
HORNER_MAX_ORDER = 256

Number = complex | float | int


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("power series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # ── construction ──────────────────────────────────
    @classmethod
    def constant(cls, value: Number, order: int = 0) -> "PowerSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The series z."""
        c = np.zeros(max(order, 1) + 1, dtype=np.complex128)
        c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def truncate(self, order: int) -> "PowerSeries":
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        if order >= self.order:
            return self
        return PowerSeries(self.coeffs[: order + 1])

    def pad(self, order: int) -> "PowerSeries":
        if order <= self.order:
            return self
        c = np.zeros(order + 1, dtype=np.complex128)
        c[: self.coeffs.size] = self.coeffs
        return PowerSeries(c)

    # ── arithmetic ────────────────────────────────────
    def _coerce(self, other) -> "PowerSeries | None":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries.constant(other, self.order)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        n = min(self.order, rhs.order)
        return PowerSeries(self.coeffs[: n + 1] + rhs.coeffs[: n + 1])

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return div(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries(self.coeffs / other)
        return NotImplemented

    def allclose(self, other: "PowerSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.allclose(self.coeffs[: n + 1], other.coeffs[: n + 1], rtol=0.0, atol=atol))

    # ── JSON codec: [[re, im], ...] ───────────────────
    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, pairs: Iterable[Sequence[float]]) -> "PowerSeries":
        return cls([complex(re, im) for re, im in pairs])


def derive(f: PowerSeries) -> PowerSeries:
    if f.order == 0:
        return PowerSeries([0.0])
    k = np.arange(1, f.order + 1)
    return PowerSeries(k * f.coeffs[1:])


def integrate(f: PowerSeries) -> PowerSeries:
    """Termwise antiderivative with zero constant term, one order higher."""
    k = np.arange(1, f.order + 2, dtype=np.float64)
    return PowerSeries(np.concatenate([[0.0], f.coeffs / k]))


def scale(f: PowerSeries, c: complex) -> PowerSeries:
    """The series of f(c z)."""
    return PowerSeries(f.coeffs * np.power(complex(c), np.arange(f.order + 1)))


def euler_operator(f: PowerSeries) -> PowerSeries:
    """z·f'(z), kept at the order of f."""
    return PowerSeries(np.arange(f.order + 1) * f.coeffs)


def mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = min(f.order, g.order)
    return PowerSeries(np.convolve(f.coeffs[: n + 1], g.coeffs[: n + 1])[: n + 1])


def div(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = min(f.order, g.order)
    num = f.coeffs[: n + 1]
    den = g.coeffs[: n + 1]
    g0 = den[0]
    if abs(g0) < LEAD_TOL:
        raise ZeroLeadingCoefficient(f"cannot divide by a series with |g0| = {abs(g0):.3e}")
    h = np.zeros(n + 1, dtype=np.complex128)
    for k in range(n + 1):
        acc = den[1 : k + 1] @ h[k - 1 :: -1] if k else 0.0
        h[k] = (num[k] - acc) / g0
    return PowerSeries(h)


def sqrt1(g: PowerSeries) -> PowerSeries:
    """Square root with the branch fixed by s(0) = 1."""
    c = g.coeffs
    if abs(c[0] - 1.0) > LEAD_TOL:
        raise NotNormalized(f"sqrt1 needs g(0) = 1, got {c[0]}")
    s = np.zeros(g.order + 1, dtype=np.complex128)
    s[0] = 1.0
    for n in range(1, g.order + 1):
        acc = s[1:n] @ s[n - 1 : 0 : -1] if n > 1 else 0.0
        s[n] = (c[n] - acc) / 2.0
    return PowerSeries(s)


def series_exp(h: PowerSeries) -> PowerSeries:
    """exp(h) for h(0) = 0, via e_n = (1/n) Σ k h_k e_{n-k}."""
    if abs(h.coeffs[0]) > LEAD_TOL:
        raise NotNormalized("series_exp expects a vanishing constant term")
    kh = np.arange(h.order + 1) * h.coeffs
    e = np.zeros(h.order + 1, dtype=np.complex128)
    e[0] = 1.0
    for n in range(1, h.order + 1):
        e[n] = (kh[1 : n + 1] @ e[n - 1 :: -1]) / n
    return PowerSeries(e)


def binomial_series(t: float, order: int = DEFAULT_ORDER) -> PowerSeries:
    """(1 - z)^(-t) expanded to the given order."""
    n = np.arange(1, order + 1, dtype=np.float64)
    ratios = (t + n - 1.0) / n
    return PowerSeries(np.concatenate([[1.0], np.cumprod(ratios)]))


# ── evaluation ────────────────────────────────────────
def _check_disk(modulus: float) -> None:
    if modulus > 1.0 + DISK_TOL:
        raise OutOfDisk(f"|z| = {modulus:.15g} lies outside the closed unit disk")


def evaluate(f: PowerSeries, z: complex) -> complex:
    """Horner evaluation of Σ c_k z^k for |z| ≤ 1."""
    z = complex(z)
    _check_disk(abs(z))
    acc = 0j
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return acc


def evaluate_many(f: PowerSeries, zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=np.complex128)
    if zs.size:
        _check_disk(float(np.max(np.abs(zs))))
    if f.order <= HORNER_MAX_ORDER:
        acc = np.zeros_like(zs)
        for c in f.coeffs[::-1]:
            acc = acc * zs + c
        return acc
    # long series: explicit powers r^k e^{ik theta}, a few points at a time
    k = np.arange(f.order + 1, dtype=np.float64)
    flat = zs.reshape(-1)
    out = np.empty(flat.size, dtype=np.complex128)
    for start in range(0, flat.size, 16):
        chunk = flat[start : start + 16]
        powers = np.power(np.abs(chunk)[:, None], k) * np.exp(1j * np.angle(chunk)[:, None] * k)
        out[start : start + 16] = powers @ f.coeffs
    return out.reshape(zs.shape)


def evaluate_on_circle(coeffs: np.ndarray, r: float, count: int) -> np.ndarray:
    """Values of Σ c_k z^k at z_j = r·exp(2πij/count), folded through one inverse FFT."""
    _check_disk(r)
    c = np.asarray(coeffs, dtype=np.complex128)
    weighted = c * np.power(r, np.arange(c.size, dtype=np.float64))
    bins = -(-weighted.size // count) * count
    folded = np.zeros(bins, dtype=np.complex128)
    folded[: weighted.size] = weighted
    folded = folded.reshape(-1, count).sum(axis=0)
    return count * np.fft.ifft(folded)


# ── A_p / A_{p,b} members ─────────────────────────────
@dataclass(frozen=True, eq=False)
class MultivalentFunction:
    """f(z) = z^p · u(z); `b` is set when f is declared in A_{p,b}."""

    p: int
    unit: PowerSeries
    b: float | None = None

    def __post_init__(self) -> None:
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"valence must be a positive integer, got {self.p}")
        object.__setattr__(self, "p", int(self.p))
        if self.unit.coeffs[0] != 1.0:
            raise NotNormalized(f"u(0) must be exactly 1, got {self.unit.coeffs[0]}")
        if self.b is not None:
            b = float(self.b)
            if b < 0:
                raise ClassMismatch(f"fixed coefficient must be non-negative, got {b}")
            if abs(self.second_coefficient - b) > LEAD_TOL:
                raise ClassMismatch(
                    f"declared b = {b} but the second coefficient is {self.second_coefficient}"
                )
            object.__setattr__(self, "b", b)

    @classmethod
    def monomial(cls, p: int, order: int = 0) -> "MultivalentFunction":
        return cls(p=p, unit=PowerSeries.constant(1.0, order), b=0.0)

    @property
    def order(self) -> int:
        return self.unit.order

    @property
    def second_coefficient(self) -> complex:
        return complex(self.unit.coeffs[1]) if self.unit.order >= 1 else 0j

    def normalized_derivative(self) -> PowerSeries:
        """f'(z) / (p z^(p-1)) = u + z u'/p."""
        k = np.arange(self.order + 1)
        return PowerSeries(self.unit.coeffs * (1.0 + k / self.p))

    def full_series(self) -> PowerSeries:
        """The coefficients of f itself, z^p shift included."""
        return PowerSeries(np.concatenate([np.zeros(self.p), self.unit.coeffs]))

    def to_json(self) -> dict:
        return {"p": self.p, "b": self.b, "unit_coeffs": self.unit.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MultivalentFunction":
        return cls(p=data["p"], unit=PowerSeries.from_json(data["unit_coeffs"]), b=data.get("b"))
