"""Hamiltonian, phase and time operators acting in the phase representation.

In the representation where the phase operator is diagonal,

    H f   = i hbar omega f' + (hbar omega / 2) f
    phi f = phi * f
    chi f = ((pi/2) f - phi * f) / omega

The operators act on the whole :class:`PhasePolyFourier` space, aperiodic
functions included. H is hermitian only on the periodic (degree-0) subspace.
The additive ``G(H)`` term in the time operator is taken to be zero; it
commutes with H and drops out of every commutator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .phasefn import (
    ZERO,
    PhasePolyFourier,
    PhysicalConstants,
    add,
    differentiate,
    mul_by_phase,
    multiply,
    scale,
)

__all__ = [
    "PhaseRepOperator",
    "apply_hamiltonian",
    "apply_phase",
    "apply_time",
    "commutator_action",
    "hamiltonian",
    "phase",
    "time",
]

Kind = Literal["hamiltonian", "phase", "time", "custom"]


def apply_hamiltonian(f: PhasePolyFourier, c: PhysicalConstants) -> PhasePolyFourier:
    hw = c.hbar_omega
    return add(scale(differentiate(f), 1j * hw), scale(f, 0.5 * hw))


def apply_phase(f: PhasePolyFourier) -> PhasePolyFourier:
    return mul_by_phase(f)


def apply_time(f: PhasePolyFourier, c: PhysicalConstants) -> PhasePolyFourier:
    # G(H) = 0
    shifted = add(scale(f, math.pi / 2), scale(mul_by_phase(f), -1))
    return scale(shifted, 1.0 / c.omega)


@dataclass(frozen=True)
class PhaseRepOperator:
    """An operator ``f -> a f' + V f`` in the phase representation.

    The three named kinds dispatch to their dedicated ``apply_*`` functions.
    ``custom`` uses ``derivative_coeff`` (a) and ``multiplier`` (V).
    """

    kind: Kind
    constants: PhysicalConstants = PhysicalConstants()
    derivative_coeff: complex = 0j
    multiplier: PhasePolyFourier = ZERO

    def __call__(self, f: PhasePolyFourier) -> PhasePolyFourier:
        if self.kind == "hamiltonian":
            return apply_hamiltonian(f, self.constants)
        if self.kind == "phase":
            return apply_phase(f)
        if self.kind == "time":
            return apply_time(f, self.constants)
        if self.kind == "custom":
            out = multiply(self.multiplier, f)
            if self.derivative_coeff != 0:
                out = add(scale(differentiate(f), self.derivative_coeff), out)
            return out
        raise ValueError(f"unknown operator kind {self.kind!r}")


def hamiltonian(c: PhysicalConstants = PhysicalConstants()) -> PhaseRepOperator:
    return PhaseRepOperator("hamiltonian", c)


def phase(c: PhysicalConstants = PhysicalConstants()) -> PhaseRepOperator:
    return PhaseRepOperator("phase", c)


def time(c: PhysicalConstants = PhysicalConstants()) -> PhaseRepOperator:
    return PhaseRepOperator("time", c)


def commutator_action(A: PhaseRepOperator, B: PhaseRepOperator,
                      f: PhasePolyFourier) -> PhasePolyFourier:
    """``[A, B] f = A(B f) - B(A f)``."""
    return add(A(B(f)), scale(B(A(f)), -1))
