"""Inner products on [0, 2*pi].

Two independent routes:

* closed form, expanding ``conj(f) * g`` into monomials ``phi**d exp(i k phi)``
  and integrating each by the integration-by-parts recurrence;
* composite Gauss-Legendre quadrature on sampled values.

Also the hermiticity defect ``<f|Hg> - <Hf|g>``, which for the phase-space
Hamiltonian reduces to the boundary term ``i hbar omega [conj(f) g]_0^{2pi}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .phasefn import DEFAULT_BOUNDS, PhasePolyFourier, PhysicalConstants, evaluate

__all__ = [
    "InconsistencyError",
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "DEFECT_TOL",
    "monomial_integral",
    "inner_product",
    "inner_product_quadrature",
    "quadrature_rule",
    "hermiticity_defect",
    "hermiticity_defect_table",
    "boundary_term",
]

TWO_PI = 2.0 * math.pi
MAX_INTEGRAND_DEGREE = 2 * DEFAULT_BOUNDS.max_degree

# absolute, at hbar*omega = 1
DEFECT_TOL = 1e-12
ROUNDING_SLACK = 8.0


class InconsistencyError(RuntimeError):
    """Two routes to the same quantity disagree; indicates an algebra bug."""


@dataclass(frozen=True)
class QuadratureSpec:
    panels: int = 16
    nodes_per_panel: int = 24

    def __post_init__(self) -> None:
        if self.panels < 1:
            raise ValueError(f"panels must be >= 1, got {self.panels}")
        if not 2 <= self.nodes_per_panel <= 64:
            raise ValueError(
                f"nodes_per_panel must be in [2, 64], got {self.nodes_per_panel}"
            )

    @classmethod
    def parse(cls, text: str) -> QuadratureSpec:
        """Parse ``"PxN"`` (panels x nodes per panel)."""
        try:
            p, n = text.lower().split("x")
            return cls(int(p), int(n))
        except ValueError as exc:
            raise ValueError(f"bad quadrature spec {text!r}: {exc}") from None

    def __str__(self) -> str:
        return f"{self.panels}x{self.nodes_per_panel}"


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=None)
def quadrature_rule(q: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on [0, 2*pi]."""
    x, w = np.polynomial.legendre.leggauss(q.nodes_per_panel)
    h = TWO_PI / q.panels
    left = h * np.arange(q.panels)
    nodes = (left[:, None] + 0.5 * h * (x + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, q.panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=4096)
def monomial_integral(d: int, k: int) -> complex:
    """``int_0^{2pi} phi**d exp(i k phi) dphi``.

    For k != 0 the upward recurrence
    ``I_d = (2pi)**d / (ik) - d/(ik) * I_{d-1}`` with ``I_0 = 0`` is used.
    """
    if d < 0 or d > MAX_INTEGRAND_DEGREE:
        raise ValueError(f"degree {d} outside [0, {MAX_INTEGRAND_DEGREE}]")
    if k == 0:
        return complex(TWO_PI ** (d + 1) / (d + 1))
    ik = 1j * k
    value = 0j
    for j in range(1, d + 1):
        value = TWO_PI**j / ik - (j / ik) * value
    return value


def inner_product(f: PhasePolyFourier, g: PhasePolyFourier) -> complex:
    """``<f|g> = int_0^{2pi} conj(f) g dphi`` in closed form."""
    real: list[float] = []
    imag: list[float] = []
    g_items = list(g.items())
    for d1, k1, c1 in f.items():
        a = c1.conjugate()
        for d2, k2, c2 in g_items:
            term = a * c2 * monomial_integral(d1 + d2, k2 - k1)
            real.append(term.real)
            imag.append(term.imag)
    return complex(math.fsum(real), math.fsum(imag))


def inner_product_quadrature(f: PhasePolyFourier, g: PhasePolyFourier,
                             q: QuadratureSpec = DEFAULT_QUADRATURE) -> complex:
    nodes, weights = quadrature_rule(q)
    values = np.conj(evaluate(f, nodes)) * evaluate(g, nodes)
    return complex(np.dot(weights, values))


# The defect check runs both routes in the widest native float: the integrand
# terms reach ~1e4 for modest degrees, which would swamp a 1e-12 comparison
# done in double precision.
_XF = np.longdouble
_XC = np.clongdouble
_XEPS = float(np.finfo(_XF).eps)
_TWO_PI_X = _XF(2) * _XF("3.141592653589793238462643383279502884")

XTerms = list[tuple[int, int, np.clongdouble]]


def _extended(f: PhasePolyFourier) -> XTerms:
    return [(d, k, _XC(c)) for d, k, c in f.items()]


def _monomial_integral_x(d: int, k: int) -> np.clongdouble:
    if k == 0:
        return _XC(_TWO_PI_X ** (d + 1) / _XF(d + 1))
    inv_ik = _XC(-1j) / _XF(k)
    value = _XC(0)
    for j in range(1, d + 1):
        value = (_TWO_PI_X**j - _XF(j) * value) * inv_ik
    return value


def _hamiltonian_x(f: XTerms, c: PhysicalConstants) -> XTerms:
    """Same action as :func:`apply_hamiltonian`, carried out in extended precision."""
    hw = _XF(c.hbar) * _XF(c.omega)
    out: dict[tuple[int, int], np.clongdouble] = {}
    for d, k, a in f:
        # i hw (i k) a + hw/2 a
        out[d, k] = out.get((d, k), _XC(0)) + (hw * (_XF(0.5) - _XF(k))) * a
        if d > 0:
            out[d - 1, k] = out.get((d - 1, k), _XC(0)) + _XC(1j) * (hw * _XF(d)) * a
    return [(d, k, a) for (d, k), a in out.items()]


def _inner_product_x(f: XTerms, g: XTerms) -> tuple[np.clongdouble, float]:
    total = _XC(0)
    magnitude = 0.0
    for d1, k1, a in f:
        ca = np.conj(a)
        for d2, k2, b in g:
            term = ca * b * _monomial_integral_x(d1 + d2, k2 - k1)
            total += term
            magnitude += float(abs(term))
    return total, magnitude


def _endpoint_values(f: XTerms) -> tuple[np.clongdouble, np.clongdouble]:
    """``f(0)`` and ``f(2pi)``; every harmonic equals exactly 1 at both ends."""
    start = _XC(0)
    end = _XC(0)
    for d, _, a in f:
        if d == 0:
            start += a
        end += _TWO_PI_X**d * a
    return start, end


def _boundary_x(f: XTerms, g: XTerms, c: PhysicalConstants) -> np.clongdouble:
    f0, f1 = _endpoint_values(f)
    g0, g1 = _endpoint_values(g)
    hw = _XF(c.hbar) * _XF(c.omega)
    return _XC(1j) * hw * (np.conj(f1) * g1 - np.conj(f0) * g0)


def boundary_term(f: PhasePolyFourier, g: PhasePolyFourier,
                  c: PhysicalConstants) -> complex:
    """``i hbar omega [conj(f) g]`` evaluated between 0 and 2*pi."""
    return complex(_boundary_x(_extended(f), _extended(g), c))


def _defect_x(fx: XTerms, hfx: XTerms, gx: XTerms, hgx: XTerms,
              c: PhysicalConstants, tol: float) -> complex:
    left, left_mag = _inner_product_x(fx, hgx)
    right, right_mag = _inner_product_x(hfx, gx)
    by_products = left - right
    closed = _boundary_x(fx, gx, c)
    mismatch = float(abs(by_products - closed))
    allowed = tol * c.hbar_omega + ROUNDING_SLACK * _XEPS * (left_mag + right_mag)
    if not mismatch <= allowed:
        raise InconsistencyError(
            f"hermiticity defect mismatch: inner products give {complex(by_products)}, "
            f"boundary term gives {complex(closed)} (allowed {allowed:.3g})"
        )
    return complex(by_products)


def hermiticity_defect(f: PhasePolyFourier, g: PhasePolyFourier,
                       c: PhysicalConstants = PhysicalConstants(),
                       tol: float = DEFECT_TOL) -> complex:
    """``<f|Hg> - <Hf|g>``, cross-checked against the boundary term.

    Zero when both functions are periodic. The difference of inner products
    and the boundary term must agree to ``tol * hbar * omega`` (plus a rounding
    allowance that only matters where long double is plain double); otherwise
    :class:`InconsistencyError` is raised.
    """
    fx, gx = _extended(f), _extended(g)
    return _defect_x(fx, _hamiltonian_x(fx, c), gx, _hamiltonian_x(gx, c), c, tol)


def hermiticity_defect_table(bras: Sequence[PhasePolyFourier], kets: Sequence[PhasePolyFourier],
                             c: PhysicalConstants = PhysicalConstants(),
                             tol: float = DEFECT_TOL) -> np.ndarray:
    """``hermiticity_defect(bras[i], kets[j])`` for all pairs."""
    bx = [(x, _hamiltonian_x(x, c)) for x in map(_extended, bras)]
    kx = [(x, _hamiltonian_x(x, c)) for x in map(_extended, kets)]
    return np.array([[_defect_x(f, hf, g, hg, c, tol) for g, hg in kx] for f, hf in bx],
                    dtype=complex)
