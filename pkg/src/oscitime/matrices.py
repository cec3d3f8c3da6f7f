"""Matrix elements between oscillator eigenstates over a window of quantum numbers.

Every builder forms ``<e_m | A e_n>`` by applying the operator to the ket in
the phase representation and integrating against the bra. The spectrum of H
is never inserted on the bra side in the "correct" commutator. The naive
builder does exactly that, ``<m|[B,H]|n> = (n-m) hbar omega <m|B|n>``, and
the difference between the two is a constant boundary term.

Off-diagonal phase elements come out as ``-i/(m-n)``. Diagonal elements are
``pi``, the mean of phi over [0, 2*pi].
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

import numpy as np

from .integrals import (
    QuadratureSpec,
    hermiticity_defect_table,
    inner_product,
    quadrature_rule,
)
from .operators import apply_hamiltonian, apply_time
from .phasefn import (
    PhasePolyFourier,
    PhysicalConstants,
    evaluate,
    fock_eigenfunction,
    mul_by_phase,
)

__all__ = [
    "DEFAULT_MAX_WINDOW",
    "FockWindow",
    "OperatorMatrix",
    "ResidualReport",
    "WindowTooLargeError",
    "check_window_size",
    "commutator_matrix_correct",
    "commutator_matrix_naive",
    "gram_matrix",
    "hermiticity_defect_matrix",
    "max_window",
    "paradox_gap",
    "periodic_defect_matrix",
    "phase_matrix",
    "residual_report",
    "spread",
    "time_matrix",
    "window_commutator",
    "window_hamiltonian",
]

DEFAULT_MAX_WINDOW = 512


class WindowTooLargeError(ValueError):
    pass


def max_window() -> int:
    """Largest allowed window size; ``OSCITIME_MAX_WINDOW`` overrides 512."""
    raw = os.environ.get("OSCITIME_MAX_WINDOW")
    if raw is None:
        return DEFAULT_MAX_WINDOW
    value = int(raw)
    if value < 1:
        raise ValueError(f"OSCITIME_MAX_WINDOW must be >= 1, got {raw!r}")
    return value


@dataclass(frozen=True)
class FockWindow:
    """Inclusive range ``[n_min, n_max]`` of quantum numbers.

    Negative n is rejected unless ``allow_negative`` is set; the oscillator
    spectrum starts at n = 0.
    """

    n_min: int = 0
    n_max: int = 15
    allow_negative: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_min > self.n_max:
            raise ValueError(f"empty window: n_min={self.n_min} > n_max={self.n_max}")
        if self.n_min < 0 and not self.allow_negative:
            raise ValueError(
                f"window starts at n={self.n_min} < 0; pass allow_negative=True to permit it"
            )

    @classmethod
    def parse(cls, text: str, allow_negative: bool = False) -> FockWindow:
        """Parse the inclusive ``"a:b"`` syntax."""
        parts = text.split(":")
        if len(parts) != 2:
            raise ValueError(f"window must look like 'a:b', got {text!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"window bounds must be integers, got {text!r}") from None
        return cls(a, b, allow_negative)

    @property
    def states(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    def __str__(self) -> str:
        return f"{self.n_min}:{self.n_max}"


def check_window_size(w: FockWindow) -> None:
    cap = max_window()
    if w.size > cap:
        raise WindowTooLargeError(
            f"window {w} has {w.size} states; limit is {cap} (set OSCITIME_MAX_WINDOW)"
        )


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix of elements ``<m|A|n>``; row m, column n, both from ``window``."""

    window: FockWindow
    constants: PhysicalConstants
    entries: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        shape = (self.window.size, self.window.size)
        if arr.shape != shape:
            raise ValueError(f"entries have shape {arr.shape}, window needs {shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def element(self, m: int, n: int) -> complex:
        o = self.window.n_min
        return complex(self.entries[m - o, n - o])

    def relabel(self, label: str) -> OperatorMatrix:
        return OperatorMatrix(self.window, self.constants, self.entries, label)

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        return OperatorMatrix(self.window, self.constants, self.entries - other.entries,
                              f"{self.label}-{other.label}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "hbar": self.constants.hbar,
            "omega": self.constants.omega,
            "window": {"n_min": self.window.n_min, "n_max": self.window.n_max},
            "entries": [
                [{"re": float(z.real), "im": float(z.imag)} for z in row]
                for row in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OperatorMatrix:
        w = data["window"]
        window = FockWindow(int(w["n_min"]), int(w["n_max"]), allow_negative=True)
        entries = [[complex(e["re"], e["im"]) for e in row] for row in data["entries"]]
        return cls(window, PhysicalConstants(data["hbar"], data["omega"]),
                   np.array(entries, dtype=complex), data.get("label", ""))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> OperatorMatrix:
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "n", "re", "im"])
        for i, m in enumerate(self.window.states):
            for j, n in enumerate(self.window.states):
                z = self.entries[i, j]
                writer.writerow([m, n, repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, constants: PhysicalConstants = PhysicalConstants(),
                 label: str = "") -> OperatorMatrix:
        rows = list(csv.DictReader(io.StringIO(text)))
        ms = [int(r["m"]) for r in rows]
        window = FockWindow(min(ms), max(ms), allow_negative=True)
        entries = np.zeros((window.size, window.size), dtype=complex)
        o = window.n_min
        for r in rows:
            entries[int(r["m"]) - o, int(r["n"]) - o] = complex(float(r["re"]), float(r["im"]))
        return cls(window, constants, entries, label)


def gram_matrix(bras: Sequence[PhasePolyFourier], kets: Sequence[PhasePolyFourier],
                quadrature: QuadratureSpec | None = None) -> np.ndarray:
    """Matrix of ``<bras[i] | kets[j]>``, closed form or by quadrature."""
    if quadrature is None:
        return np.array([[inner_product(b, k) for k in kets] for b in bras], dtype=complex)
    nodes, weights = quadrature_rule(quadrature)
    B = np.array([evaluate(b, nodes) for b in bras])
    K = np.array([evaluate(k, nodes) for k in kets])
    return (B.conj() * weights) @ K.T


def _fock_states(w: FockWindow) -> list[PhasePolyFourier]:
    return [fock_eigenfunction(n) for n in w.states]


def phase_matrix(w: FockWindow, c: PhysicalConstants = PhysicalConstants(),
                 quadrature: QuadratureSpec | None = None) -> OperatorMatrix:
    check_window_size(w)
    states = _fock_states(w)
    entries = gram_matrix(states, [mul_by_phase(e) for e in states], quadrature)
    return OperatorMatrix(w, c, entries, "phase")


def time_matrix(w: FockWindow, c: PhysicalConstants = PhysicalConstants(),
                quadrature: QuadratureSpec | None = None) -> OperatorMatrix:
    check_window_size(w)
    states = _fock_states(w)
    entries = gram_matrix(states, [apply_time(e, c) for e in states], quadrature)
    return OperatorMatrix(w, c, entries, "time")


def commutator_matrix_correct(w: FockWindow, c: PhysicalConstants = PhysicalConstants(),
                              quadrature: QuadratureSpec | None = None) -> OperatorMatrix:
    """``<m|[chi,H]|n> = -(n+1/2) hbar <m|phi|n> + <e_m | H(phi e_n)> / omega``.

    The second term integrates against H applied to the aperiodic ket
    ``phi e_n``; this is where the boundary contribution comes in.
    """
    check_window_size(w)
    states = _fock_states(w)
    phi_kets = [mul_by_phase(e) for e in states]
    phase = gram_matrix(states, phi_kets, quadrature)
    h_phi = gram_matrix(states, [apply_hamiltonian(k, c) for k in phi_kets], quadrature)
    ket_energy = (np.array(w.states) + 0.5) * c.hbar
    entries = -phase * ket_energy[None, :] + h_phi / c.omega
    return OperatorMatrix(w, c, entries, "commutator_correct")


def commutator_matrix_naive(w: FockWindow, c: PhysicalConstants = PhysicalConstants(),
                            quadrature: QuadratureSpec | None = None) -> OperatorMatrix:
    """What ``<m|[chi,H]|n> = (n-m) hbar omega <m|chi|n>`` would give."""
    chi = time_matrix(w, c, quadrature).entries
    n = np.array(w.states)
    entries = (n[None, :] - n[:, None]) * c.hbar_omega * chi
    return OperatorMatrix(w, c, entries, "commutator_naive")


def paradox_gap(w: FockWindow, c: PhysicalConstants = PhysicalConstants(),
                quadrature: QuadratureSpec | None = None) -> OperatorMatrix:
    correct = commutator_matrix_correct(w, c, quadrature)
    naive = commutator_matrix_naive(w, c, quadrature)
    return (correct - naive).relabel("paradox_gap")


def hermiticity_defect_matrix(w: FockWindow,
                              c: PhysicalConstants = PhysicalConstants()) -> OperatorMatrix:
    """Entry (m, n) is ``<e_m|H(phi e_n)> - <H e_m|phi e_n>``."""
    check_window_size(w)
    states = _fock_states(w)
    kets = [mul_by_phase(e) for e in states]
    return OperatorMatrix(w, c, hermiticity_defect_table(states, kets, c), "hermiticity_defect")


def periodic_defect_matrix(w: FockWindow,
                           c: PhysicalConstants = PhysicalConstants()) -> OperatorMatrix:
    """Control: defect between periodic states ``e_m``, ``e_n``; should vanish."""
    check_window_size(w)
    states = _fock_states(w)
    return OperatorMatrix(w, c, hermiticity_defect_table(states, states, c), "periodic_defect")


def window_hamiltonian(w: FockWindow, c: PhysicalConstants = PhysicalConstants()) -> np.ndarray:
    """``diag((n + 1/2) hbar omega)`` restricted to the window."""
    return np.diag((np.array(w.states) + 0.5) * c.hbar_omega).astype(complex)


def window_commutator(B: OperatorMatrix) -> OperatorMatrix:
    """Truncated matrix commutator ``[B, H_w]`` for an operator confined to the window."""
    H = window_hamiltonian(B.window, B.constants)
    return OperatorMatrix(B.window, B.constants, B.entries @ H - H @ B.entries,
                          f"[{B.label},H_w]")


Target = Literal["ihbar_identity", "ihbar_constant", "zero"]


@dataclass(frozen=True)
class ResidualReport:
    label: str
    target: str
    max_abs: float
    frobenius: float
    worst: tuple[int, int]

    def __str__(self) -> str:
        m, n = self.worst
        return (f"{self.label} vs {self.target}: max |dev| = {self.max_abs:.3e} "
                f"at (m={m}, n={n}), frobenius = {self.frobenius:.3e}")


def _target_entries(M: OperatorMatrix, target: Target) -> np.ndarray:
    size = M.window.size
    ih = 1j * M.constants.hbar
    if target == "ihbar_identity":
        return ih * np.eye(size)
    if target == "ihbar_constant":
        return np.full((size, size), ih)
    if target == "zero":
        return np.zeros((size, size), dtype=complex)
    raise ValueError(f"unknown residual target {target!r}")


def residual_report(M: OperatorMatrix, target: Target) -> ResidualReport:
    dev = np.abs(M.entries - _target_entries(M, target))
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    o = M.window.n_min
    return ResidualReport(M.label, target, float(dev[i, j]),
                          float(np.linalg.norm(dev)), (int(i) + o, int(j) + o))


def spread(M: OperatorMatrix) -> float:
    """Diameter bound for the set of entries; zero iff all entries are equal."""
    re, im = M.entries.real, M.entries.imag
    return float(np.hypot(np.ptp(re), np.ptp(im)))
