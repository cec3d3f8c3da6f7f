"""Polynomial-times-Fourier functions of the phase variable.

A :class:`PhasePolyFourier` represents

    f(phi) = sum_d phi**d * sum_k c[d, k] * exp(i k phi)

with finitely many terms. The space is closed under differentiation,
multiplication by ``phi`` and multiplication by finite Fourier series, which
is all the oscillator operators in the phase representation need. Degree-0
elements are exactly the 2*pi-periodic functions; anything with a ``phi**d``
term (d >= 1) is aperiodic.

Coefficients are plain Python complex numbers. Only exact zeros are removed
when canonicalising, so algebraic cancellation can be asserted with ``==``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Iterable, Mapping

import numpy as np

__all__ = [
    "Bounds",
    "DEFAULT_BOUNDS",
    "SupportOverflowError",
    "FourierSeries",
    "PhasePolyFourier",
    "PhysicalConstants",
    "ZERO",
    "ONE",
    "PHI",
    "constant",
    "harmonic",
    "fock_eigenfunction",
    "add",
    "scale",
    "mul_by_phase",
    "mul_by_fourier",
    "multiply",
    "differentiate",
    "conjugate",
    "evaluate",
    "prune",
    "to_dict",
    "from_dict",
    "to_json",
    "from_json",
]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class SupportOverflowError(ValueError):
    """Raised when a result would exceed the configured degree/harmonic bounds."""


@dataclass(frozen=True)
class Bounds:
    max_degree: int = 8
    max_harmonic: int = 2048
    max_terms: int = 4096

    def check(self, terms: Mapping[int, Mapping[int, complex]]) -> None:
        for d, series in terms.items():
            if d > self.max_degree:
                raise SupportOverflowError(
                    f"degree {d} exceeds bound {self.max_degree}"
                )
            if len(series) > self.max_terms:
                raise SupportOverflowError(
                    f"{len(series)} harmonics at degree {d} exceed bound {self.max_terms}"
                )
            for k in series:
                if abs(k) > self.max_harmonic:
                    raise SupportOverflowError(
                        f"harmonic {k} exceeds bound {self.max_harmonic}"
                    )


DEFAULT_BOUNDS = Bounds()


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar (action) and omega (1/time); both must be finite and positive."""

    hbar: float = 1.0
    omega: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    @property
    def hbar_omega(self) -> float:
        return self.hbar * self.omega


def _canonical(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    return {int(k): complex(c) for k, c in sorted(coeffs.items()) if c != 0}


class FourierSeries:
    """Finite Fourier series ``sum_k c_k exp(i k phi)``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None,
                 bounds: Bounds = DEFAULT_BOUNDS):
        canon = _canonical(coeffs or {})
        bounds.check({0: canon})
        self._coeffs = MappingProxyType(canon)

    @property
    def coeffs(self) -> Mapping[int, complex]:
        return self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return dict(self._coeffs) == dict(other._coeffs)

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def __repr__(self) -> str:
        return f"FourierSeries({dict(self._coeffs)!r})"


class PhasePolyFourier:
    """Immutable map ``degree -> FourierSeries``.

    Build instances with the module helpers (:func:`constant`, :func:`harmonic`,
    :data:`PHI`, :func:`fock_eigenfunction`) or directly from a nested dict
    ``{degree: {k: coefficient}}``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Mapping[int, complex] | FourierSeries] | None = None,
                 bounds: Bounds = DEFAULT_BOUNDS):
        canon: dict[int, FourierSeries] = {}
        for d, series in sorted((terms or {}).items()):
            if d < 0:
                raise ValueError(f"negative degree {d}")
            fs = series if isinstance(series, FourierSeries) else FourierSeries(series, bounds)
            if fs:
                canon[int(d)] = fs
        bounds.check({d: fs.coeffs for d, fs in canon.items()})
        self._terms = MappingProxyType(canon)

    @property
    def terms(self) -> Mapping[int, FourierSeries]:
        return self._terms

    def items(self) -> Iterable[tuple[int, int, complex]]:
        """Yield ``(degree, k, coefficient)`` in ascending order."""
        for d, fs in self._terms.items():
            for k, c in fs.coeffs.items():
                yield d, k, c

    @property
    def degree_max(self) -> int:
        """Highest power of phi present; 0 for the zero function."""
        return max(self._terms, default=0)

    @property
    def is_periodic(self) -> bool:
        return self.degree_max == 0

    def is_zero(self) -> bool:
        return not self._terms

    def nested(self) -> dict[int, dict[int, complex]]:
        return {d: dict(fs.coeffs) for d, fs in self._terms.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhasePolyFourier):
            return NotImplemented
        return self.nested() == other.nested()

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        return f"PhasePolyFourier({self.nested()!r})"

    def __add__(self, other: PhasePolyFourier) -> PhasePolyFourier:
        return add(self, other)

    def __sub__(self, other: PhasePolyFourier) -> PhasePolyFourier:
        return add(self, scale(other, -1))

    def __neg__(self) -> PhasePolyFourier:
        return scale(self, -1)

    def __mul__(self, c: complex) -> PhasePolyFourier:
        if isinstance(c, PhasePolyFourier):
            return multiply(self, c)
        return scale(self, c)

    __rmul__ = __mul__

    def __call__(self, phi):
        return evaluate(self, phi)


def constant(c: complex) -> PhasePolyFourier:
    return PhasePolyFourier({0: {0: c}})


def harmonic(k: int, c: complex = 1.0) -> PhasePolyFourier:
    """``c * exp(i k phi)``."""
    return PhasePolyFourier({0: {k: c}})


ZERO = PhasePolyFourier()
ONE = constant(1.0)
PHI = PhasePolyFourier({1: {0: 1.0}})


def fock_eigenfunction(n: int) -> PhasePolyFourier:
    """Energy eigenstate ``<phi|n> = exp(-i n phi) / sqrt(2 pi)``.

    Any integer is accepted; restricting to the physical spectrum n >= 0 is
    left to the matrix builders.
    """
    return PhasePolyFourier({0: {-int(n): INV_SQRT_2PI}})


def add(f: PhasePolyFourier, g: PhasePolyFourier) -> PhasePolyFourier:
    out = f.nested()
    for d, k, c in g.items():
        series = out.setdefault(d, {})
        series[k] = series.get(k, 0j) + c
    return PhasePolyFourier(out)


def scale(f: PhasePolyFourier, c: complex) -> PhasePolyFourier:
    if c == 0:
        return ZERO
    return PhasePolyFourier(
        {d: {k: a * c for k, a in fs.coeffs.items()} for d, fs in f.terms.items()}
    )


def mul_by_phase(f: PhasePolyFourier, bounds: Bounds = DEFAULT_BOUNDS) -> PhasePolyFourier:
    """Multiply by the phase variable: every degree shifts up by one."""
    return PhasePolyFourier({d + 1: fs for d, fs in f.terms.items()}, bounds)


def _convolve(a: Mapping[int, complex], b: Mapping[int, complex],
              into: dict[int, complex]) -> None:
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            into[k1 + k2] = into.get(k1 + k2, 0j) + c1 * c2


def mul_by_fourier(f: PhasePolyFourier, g: FourierSeries,
                   bounds: Bounds = DEFAULT_BOUNDS) -> PhasePolyFourier:
    out: dict[int, dict[int, complex]] = {}
    for d, fs in f.terms.items():
        _convolve(fs.coeffs, g.coeffs, out.setdefault(d, {}))
    return PhasePolyFourier(out, bounds)


def multiply(f: PhasePolyFourier, g: PhasePolyFourier,
             bounds: Bounds = DEFAULT_BOUNDS) -> PhasePolyFourier:
    """Pointwise product of two functions (degrees add, harmonics convolve)."""
    out: dict[int, dict[int, complex]] = {}
    for d1, fs1 in f.terms.items():
        for d2, fs2 in g.terms.items():
            _convolve(fs1.coeffs, fs2.coeffs, out.setdefault(d1 + d2, {}))
    return PhasePolyFourier(out, bounds)


def differentiate(f: PhasePolyFourier) -> PhasePolyFourier:
    """d/dphi, by the product rule on each ``phi**d * exp(i k phi)`` term."""
    out: dict[int, dict[int, complex]] = {}
    for d, k, c in f.items():
        if k != 0:
            series = out.setdefault(d, {})
            series[k] = series.get(k, 0j) + (1j * k) * c
        if d > 0:
            series = out.setdefault(d - 1, {})
            series[k] = series.get(k, 0j) + d * c
    return PhasePolyFourier(out)


def conjugate(f: PhasePolyFourier) -> PhasePolyFourier:
    """Complex conjugate for real phi: c -> conj(c), k -> -k."""
    return PhasePolyFourier(
        {d: {-k: c.conjugate() for k, c in fs.coeffs.items()} for d, fs in f.terms.items()}
    )


def evaluate(f: PhasePolyFourier, phi):
    """Value of ``f`` at real ``phi`` (scalar or numpy array)."""
    if np.ndim(phi) == 0:
        x = float(phi)
        total = 0j
        for d, fs in f.terms.items():
            inner = sum(c * cmath.exp(1j * k * x) for k, c in fs.coeffs.items())
            total += x**d * inner
        return total
    x = np.asarray(phi, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for d, fs in f.terms.items():
        ks = np.fromiter(fs.coeffs.keys(), dtype=float)
        cs = np.fromiter(fs.coeffs.values(), dtype=complex)
        inner = np.exp(1j * x[..., None] * ks) @ cs
        total += x**d * inner
    return total


def prune(f: PhasePolyFourier, eps: float) -> PhasePolyFourier:
    """Drop coefficients with magnitude <= eps (display helper only)."""
    return PhasePolyFourier(
        {d: {k: c for k, c in fs.coeffs.items() if abs(c) > eps}
         for d, fs in f.terms.items()}
    )


def to_dict(f: PhasePolyFourier) -> dict[str, Any]:
    return {
        "terms": [
            {
                "degree": d,
                "harmonics": [
                    {"k": k, "re": c.real, "im": c.imag} for k, c in fs.coeffs.items()
                ],
            }
            for d, fs in f.terms.items()
        ]
    }


def from_dict(data: Mapping[str, Any]) -> PhasePolyFourier:
    terms: dict[int, dict[int, complex]] = {}
    for term in data["terms"]:
        series = terms.setdefault(int(term["degree"]), {})
        for h in term["harmonics"]:
            series[int(h["k"])] = complex(h["re"], h["im"])
    return PhasePolyFourier(terms)


def to_json(f: PhasePolyFourier, **kwargs) -> str:
    return json.dumps(to_dict(f), **kwargs)


def from_json(text: str) -> PhasePolyFourier:
    return from_dict(json.loads(text))
