"""Command-line interface.

Usage:
    oscitime verify                         # end-to-end check, exit 0/1
    oscitime phase-elements --window 0:3 --format csv
    oscitime time-elements --omega 2
    oscitime paradox --window 0:2
    oscitime defect --omega 2
    oscitime dump-function --state 1 --op time

Exit codes: 0 success, 1 numerical check failed, 2 bad flags.
Machine formats (csv, json) go to stdout (or --out) and are byte-for-byte
reproducible; explanatory notes for them are written to stderr.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import __version__
from .integrals import DEFAULT_QUADRATURE, InconsistencyError, QuadratureSpec
from .matrices import (
    FockWindow,
    OperatorMatrix,
    commutator_matrix_correct,
    commutator_matrix_naive,
    hermiticity_defect_matrix,
    periodic_defect_matrix,
    phase_matrix,
    residual_report,
    spread,
    time_matrix,
    check_window_size,
)
from .operators import apply_hamiltonian, apply_phase, apply_time
from .phasefn import PhysicalConstants, fock_eigenfunction, to_dict

__all__ = ["main", "RunConfig"]

PHASE_NOTE = (
    "off-diagonal <m|phi|n> = -i/(m-n): the factor i is required for "
    "<m|[chi,H]|n> = i hbar delta_mn and is confirmed by quadrature; "
    "diagonal <n|phi|n> = pi is the mean of phi over [0, 2pi] and does not "
    "enter the commutator"
)
TIME_NOTE = "time operator uses omega*chi = pi/2 - phi (G(H) = 0)"

# verify thresholds; commutator-type quantities scale with hbar
VERIFY_TOL = {
    "correct": 1e-10,
    "gap": 1e-10,
    "defect_gap": 1e-10,
    "phase_quadrature": 1e-8,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    window: FockWindow
    hbar: float = 1.0
    omega: float = 1.0
    format: str = "table"
    quadrature: QuadratureSpec | None = None
    output_path: Path | None = None

    @property
    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(self.hbar, self.omega)


def fmt_complex(z: complex) -> str:
    """Human rendering ``re+im i`` with 6 significant digits."""
    re = 0.0 if z.real == 0 else z.real
    im = 0.0 if z.imag == 0 else z.imag
    return f"{re:.6g}{im:+.6g}i"


def _r(x: float) -> str:
    return repr(float(x))


class _QuadratureType(click.ParamType):
    name = "PxN"

    def convert(self, value, param, ctx):
        if isinstance(value, QuadratureSpec):
            return value
        try:
            return QuadratureSpec.parse(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


def _positive(ctx, param, value):
    if not (np.isfinite(value) and value > 0):
        raise click.BadParameter(f"must be finite and > 0, got {value}")
    return value


def common_options(func):
    @click.option("--window", "window_text", default="0:15", show_default=True,
                  help="Inclusive quantum-number range a:b.")
    @click.option("--hbar", default=1.0, type=float, callback=_positive, show_default=True)
    @click.option("--omega", default=1.0, type=float, callback=_positive, show_default=True)
    @click.option("--format", "fmt", default="table",
                  type=click.Choice(["table", "csv", "json"]), show_default=True)
    @click.option("--quadrature", type=_QuadratureType(), default=None,
                  help="Composite Gauss-Legendre rule, panels x nodes (e.g. 16x24).")
    @click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path),
                  default=None, help="Write output here instead of stdout.")
    @click.option("--allow-negative-n", is_flag=True, help="Permit windows with n < 0.")
    @click.pass_context
    @functools.wraps(func)
    def wrapper(ctx, window_text, hbar, omega, fmt, quadrature, out, allow_negative_n,
                **kwargs):
        try:
            window = FockWindow.parse(window_text, allow_negative=allow_negative_n)
            check_window_size(window)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--window") from None
        cfg = RunConfig(ctx.command.name, window, hbar, omega, fmt, quadrature, out)
        return func(cfg, **kwargs)

    return wrapper


def _emit(cfg: RunConfig, text: str, note: str | None = None) -> None:
    if note and cfg.format != "table":
        click.echo(f"note: {note}", err=True)
    if cfg.output_path is not None:
        cfg.output_path.write_text(text)
    else:
        click.echo(text, nl=False)


def _table_header(title: str, cfg: RunConfig, notes: tuple[str, ...] = ()) -> list[str]:
    lines = [
        f"# oscitime {__version__}",
        f"# {title}: window {cfg.window}, hbar={cfg.hbar:g}, omega={cfg.omega:g}",
    ]
    lines += [f"# note: {n}" for n in notes]
    return lines


def _matrix_table(M: OperatorMatrix, cfg: RunConfig, notes: tuple[str, ...] = ()) -> str:
    lines = _table_header(M.label, cfg, notes)
    lines.append(f"{'m':>5} {'n':>5}  value")
    for i, m in enumerate(M.window.states):
        for j, n in enumerate(M.window.states):
            lines.append(f"{m:>5} {n:>5}  {fmt_complex(M.entries[i, j])}")
    return "\n".join(lines) + "\n"


def _render_matrix(cfg: RunConfig, M: OperatorMatrix, note: str) -> None:
    if cfg.format == "csv":
        _emit(cfg, M.to_csv(), note)
    elif cfg.format == "json":
        _emit(cfg, M.to_json() + "\n", note)
    else:
        _emit(cfg, _matrix_table(M, cfg, (note,)))


def _multi_csv(cfg: RunConfig, named: dict[str, OperatorMatrix]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["m", "n"]
    for name in named:
        header += [f"{name}_re", f"{name}_im"]
    writer.writerow(header)
    for i, m in enumerate(cfg.window.states):
        for j, n in enumerate(cfg.window.states):
            row = [m, n]
            for M in named.values():
                z = M.entries[i, j]
                row += [_r(z.real), _r(z.imag)]
            writer.writerow(row)
    return buf.getvalue()


def _multi_table(cfg: RunConfig, title: str, named: dict[str, OperatorMatrix],
                 notes: tuple[str, ...] = ()) -> str:
    lines = _table_header(title, cfg, notes)
    lines.append(f"{'m':>5} {'n':>5}  " + "  ".join(f"{name:>22}" for name in named))
    for i, m in enumerate(cfg.window.states):
        for j, n in enumerate(cfg.window.states):
            cells = "  ".join(f"{fmt_complex(M.entries[i, j]):>22}" for M in named.values())
            lines.append(f"{m:>5} {n:>5}  {cells}")
    return "\n".join(lines) + "\n"


def _render_multi(cfg: RunConfig, title: str, named: dict[str, OperatorMatrix],
                  note: str) -> None:
    if cfg.format == "csv":
        _emit(cfg, _multi_csv(cfg, named), note)
    elif cfg.format == "json":
        doc = {name: M.to_dict() for name, M in named.items()}
        _emit(cfg, json.dumps(doc) + "\n", note)
    else:
        _emit(cfg, _multi_table(cfg, title, named, (note,)))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="oscitime")
def main():
    """Phase-representation time operator of the quantum harmonic oscillator."""


@main.command("phase-elements")
@common_options
def cmd_phase_elements(cfg: RunConfig):
    """Matrix elements <m|phi|n>."""
    _render_matrix(cfg, phase_matrix(cfg.window, cfg.constants, cfg.quadrature), PHASE_NOTE)


@main.command("time-elements")
@common_options
def cmd_time_elements(cfg: RunConfig):
    """Matrix elements <m|chi|n>."""
    _render_matrix(cfg, time_matrix(cfg.window, cfg.constants, cfg.quadrature), TIME_NOTE)


@main.command("paradox")
@common_options
def cmd_paradox(cfg: RunConfig):
    """Naive versus correct <m|[chi,H]|n>, and their difference."""
    c = cfg.constants
    naive = commutator_matrix_naive(cfg.window, c, cfg.quadrature)
    correct = commutator_matrix_correct(cfg.window, c, cfg.quadrature)
    gap = (correct - naive).relabel("paradox_gap")
    note = ("naive = (n-m) hbar omega <m|chi|n> assumes H hermitian on chi|n>; "
            "correct integrates against H(phi e_n); gap is the boundary term i hbar")
    _render_multi(cfg, "commutator <m|[chi,H]|n>",
                  {"naive": naive, "correct": correct, "gap": gap}, note)


@main.command("defect")
@common_options
def cmd_defect(cfg: RunConfig):
    """Hermiticity defect <e_m|H phi e_n> - <H e_m|phi e_n>, with a periodic control."""
    try:
        defect = hermiticity_defect_matrix(cfg.window, cfg.constants)
        control = periodic_defect_matrix(cfg.window, cfg.constants)
    except InconsistencyError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    note = ("defect uses the aperiodic ket phi*e_n and equals i hbar omega; "
            "control uses periodic e_m, e_n and vanishes")
    _render_multi(cfg, "hermiticity defect", {"defect": defect, "control": control}, note)


def run_checks(cfg: RunConfig) -> list[dict]:
    """All verify checks as records with value, tolerance and pass flag."""
    c = cfg.constants
    w = cfg.window
    q = cfg.quadrature or DEFAULT_QUADRATURE
    checks: list[dict] = []

    def add(name: str, value: float, tol: float, detail: str = "") -> None:
        checks.append({"check": name, "value": value, "tolerance": tol,
                       "passed": bool(value <= tol), "detail": detail})

    correct = commutator_matrix_correct(w, c)
    naive = commutator_matrix_naive(w, c)
    gap = (correct - naive).relabel("paradox_gap")
    rep = residual_report(correct, "ihbar_identity")
    add("correct_vs_ihbar_identity", rep.max_abs, VERIFY_TOL["correct"] * c.hbar,
        f"worst at (m={rep.worst[0]}, n={rep.worst[1]})")
    naive_rep = residual_report(naive, "ihbar_identity")
    checks.append({"check": "naive_vs_ihbar_identity", "value": naive_rep.max_abs,
                   "tolerance": None, "passed": True,
                   "detail": "informational: the naive relation misses by hbar"})
    add("gap_vs_ihbar_constant", residual_report(gap, "ihbar_constant").max_abs,
        VERIFY_TOL["gap"] * c.hbar)
    add("gap_spread", spread(gap), VERIFY_TOL["gap"] * c.hbar)
    try:
        defect = hermiticity_defect_matrix(w, c)
    except InconsistencyError as exc:
        add("defect_equals_omega_gap", float("inf"), VERIFY_TOL["defect_gap"] * c.hbar_omega,
            str(exc))
    else:
        cross = float(np.max(np.abs(defect.entries - c.omega * gap.entries)))
        add("defect_equals_omega_gap", cross, VERIFY_TOL["defect_gap"] * c.hbar_omega)
    closed = phase_matrix(w, c)
    quad = phase_matrix(w, c, q)
    add("phase_quadrature_vs_closed", float(np.max(np.abs(quad.entries - closed.entries))),
        VERIFY_TOL["phase_quadrature"],
        f"quadrature {q}, harmonics up to |m-n| = {w.size - 1}")
    return checks


@main.command("verify")
@common_options
def cmd_verify(cfg: RunConfig):
    """Reproduce <m|[chi,H]|n> = i hbar delta_mn and the paradox gap; exit 0 iff all pass."""
    checks = run_checks(cfg)
    ok = all(ch["passed"] for ch in checks)
    if cfg.format == "json":
        doc = {"window": {"n_min": cfg.window.n_min, "n_max": cfg.window.n_max},
               "hbar": cfg.hbar, "omega": cfg.omega, "passed": ok, "checks": checks}
        _emit(cfg, json.dumps(doc) + "\n")
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "value", "tolerance", "passed"])
        for ch in checks:
            tol = "" if ch["tolerance"] is None else _r(ch["tolerance"])
            writer.writerow([ch["check"], _r(ch["value"]), tol, int(ch["passed"])])
        _emit(cfg, buf.getvalue())
    else:
        lines = _table_header("verify", cfg, (PHASE_NOTE, TIME_NOTE))
        for ch in checks:
            if ch["tolerance"] is None:
                status, bound = "info", ""
            else:
                status = "PASS" if ch["passed"] else "FAIL"
                bound = f" <= {ch['tolerance']:.1e}" if ch["passed"] else f" > {ch['tolerance']:.1e}"
            extra = f"  ({ch['detail']})" if ch["detail"] else ""
            lines.append(f"[{status}] {ch['check']}: {ch['value']:.3e}{bound}{extra}")
        lines.append("RESULT: " + ("all checks passed" if ok else "FAILED"))
        _emit(cfg, "\n".join(lines) + "\n")
    sys.exit(0 if ok else 1)


@main.command("dump-function")
@common_options
@click.option("--state", type=int, default=0, show_default=True,
              help="Quantum number n of the eigenfunction e_n.")
@click.option("--op", type=click.Choice(["identity", "phase", "time", "hamiltonian"]),
              default="identity", show_default=True, help="Operator applied to e_n.")
def cmd_dump_function(cfg: RunConfig, state: int, op: str):
    """Serialize an operator applied to an eigenfunction, as coefficients."""
    if state < 0 and not cfg.window.allow_negative:
        raise click.BadParameter("negative n needs --allow-negative-n", param_hint="--state")
    f = fock_eigenfunction(state)
    if op == "phase":
        f = apply_phase(f)
    elif op == "time":
        f = apply_time(f, cfg.constants)
    elif op == "hamiltonian":
        f = apply_hamiltonian(f, cfg.constants)
    if cfg.format == "json":
        _emit(cfg, json.dumps(to_dict(f)) + "\n")
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["degree", "k", "re", "im"])
        for d, k, c in f.items():
            writer.writerow([d, k, _r(c.real), _r(c.imag)])
        _emit(cfg, buf.getvalue())
    else:
        lines = _table_header(f"{op} applied to e_{state}", cfg)
        lines.append(f"{'degree':>6} {'k':>6}  coefficient")
        for d, k, c in f.items():
            lines.append(f"{d:>6} {k:>6}  {fmt_complex(c)}")
        _emit(cfg, "\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
