import math

import numpy as np
import pytest

from oscitime.integrals import QuadratureSpec
from oscitime.matrices import (
    FockWindow,
    OperatorMatrix,
    WindowTooLargeError,
    commutator_matrix_correct,
    commutator_matrix_naive,
    hermiticity_defect_matrix,
    max_window,
    paradox_gap,
    periodic_defect_matrix,
    phase_matrix,
    residual_report,
    spread,
    time_matrix,
    window_commutator,
    window_hamiltonian,
)
from oscitime.phasefn import PhysicalConstants

UNIT = PhysicalConstants()
WINDOWS = [FockWindow(0, 3), FockWindow(0, 15), FockWindow(2, 9)]
CONSTANTS = [PhysicalConstants(1, 1), PhysicalConstants(0.5, 3), PhysicalConstants(2, 0.25)]
Q = QuadratureSpec(16, 24)


class TestFockWindow:
    def test_defaults(self):
        w = FockWindow()
        assert (w.n_min, w.n_max, w.size) == (0, 15, 16)

    def test_parse(self):
        assert FockWindow.parse("2:9") == FockWindow(2, 9)
        assert str(FockWindow(2, 9)) == "2:9"

    @pytest.mark.parametrize("text", ["3:1", "1", "a:b", "1:2:3"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            FockWindow.parse(text)

    def test_negative_requires_override(self):
        with pytest.raises(ValueError):
            FockWindow(-2, 2)
        w = FockWindow(-2, 2, allow_negative=True)
        assert list(w.states) == [-2, -1, 0, 1, 2]

    def test_size_cap(self, monkeypatch):
        assert max_window() == 512
        with pytest.raises(WindowTooLargeError):
            phase_matrix(FockWindow(0, 512))
        monkeypatch.setenv("OSCITIME_MAX_WINDOW", "4")
        with pytest.raises(WindowTooLargeError):
            phase_matrix(FockWindow(0, 4))
        assert phase_matrix(FockWindow(0, 3)).entries.shape == (4, 4)


class TestPhaseMatrix:
    def test_off_diagonal(self):
        P = phase_matrix(FockWindow(0, 3))
        assert abs(P.element(0, 1) - 1j) < 1e-15

    def test_diagonal_is_pi(self):
        P = phase_matrix(FockWindow(0, 3))
        assert abs(P.element(3, 3) - math.pi) < 1e-14

    def test_hermitian(self):
        P = phase_matrix(FockWindow(0, 15)).entries
        assert np.max(np.abs(P - P.conj().T)) <= 1e-13

    def test_general_formula(self):
        w = FockWindow(0, 15)
        P = phase_matrix(w)
        for m in w.states:
            for n in w.states:
                expected = math.pi if m == n else -1j / (m - n)
                assert abs(P.element(m, n) - expected) < 1e-14

    def test_quadrature_path(self):
        for w in WINDOWS:
            closed = phase_matrix(w).entries
            quad = phase_matrix(w, UNIT, Q).entries
            assert np.max(np.abs(closed - quad)) <= 1e-9


class TestTimeMatrix:
    def test_diagonal(self):
        T = time_matrix(FockWindow(0, 3), UNIT)
        assert np.allclose(np.diag(T.entries), -math.pi / 2, atol=1e-14, rtol=0)

    def test_off_diagonal(self):
        T = time_matrix(FockWindow(0, 3), UNIT)
        assert abs(T.element(0, 1) - (-1j)) < 1e-15

    @pytest.mark.parametrize("c", CONSTANTS, ids=str)
    def test_hermitian(self, c):
        T = time_matrix(FockWindow(0, 15), c).entries
        assert np.max(np.abs(T - T.conj().T)) <= 1e-13

    def test_matches_phase_matrix(self):
        c = PhysicalConstants(1, 2)
        w = FockWindow(1, 6)
        expected = (math.pi / 2 * np.eye(w.size) - phase_matrix(w).entries) / c.omega
        assert np.max(np.abs(time_matrix(w, c).entries - expected)) < 1e-14


class TestCorrectCommutator:
    def test_diagonal_and_off_diagonal(self):
        M = commutator_matrix_correct(FockWindow(0, 3), PhysicalConstants(0.5, 3))
        assert abs(M.element(2, 2) - 0.5j) < 1e-13
        assert abs(M.element(0, 3)) < 1e-13

    def test_sixteen_states(self):
        M = commutator_matrix_correct(FockWindow(0, 15), UNIT)
        assert np.max(np.abs(M.entries - 1j * np.eye(16))) <= 1e-12

    @pytest.mark.parametrize("c", CONSTANTS, ids=str)
    @pytest.mark.parametrize("w", WINDOWS, ids=str)
    def test_reproduces_ihbar_identity(self, w, c):
        assert residual_report(commutator_matrix_correct(w, c), "ihbar_identity").max_abs <= 1e-12

    def test_quadrature_route(self):
        M = commutator_matrix_correct(FockWindow(0, 15), UNIT, Q)
        assert residual_report(M, "ihbar_identity").max_abs <= 1e-8


class TestNaiveCommutator:
    def test_diagonal_zero(self):
        M = commutator_matrix_naive(FockWindow(0, 3), UNIT)
        assert np.all(np.diag(M.entries) == 0)

    def test_off_diagonal(self):
        M = commutator_matrix_naive(FockWindow(0, 3), UNIT)
        off = M.entries[~np.eye(4, dtype=bool)]
        assert np.max(np.abs(off + 1j)) < 1e-14

    def test_differs_everywhere(self):
        w = FockWindow(0, 3)
        diff = commutator_matrix_correct(w, UNIT).entries - commutator_matrix_naive(w, UNIT).entries
        assert np.min(np.abs(diff)) > 0.5


class TestGap:
    @pytest.mark.parametrize("c", CONSTANTS, ids=str)
    @pytest.mark.parametrize("w", WINDOWS, ids=str)
    def test_gap_is_ihbar(self, w, c):
        gap = paradox_gap(w, c)
        assert residual_report(gap, "ihbar_constant").max_abs <= 1e-12
        assert spread(gap) <= 1e-12

    @pytest.mark.parametrize("c", CONSTANTS, ids=str)
    def test_defect_equals_omega_gap(self, c):
        w = FockWindow(0, 7)
        gap = paradox_gap(w, c).entries
        defect = hermiticity_defect_matrix(w, c).entries
        assert np.max(np.abs(defect - c.omega * gap)) <= 1e-12


class TestDefectMatrix:
    def test_unit(self):
        D = hermiticity_defect_matrix(FockWindow(0, 6), UNIT)
        assert residual_report(D, "ihbar_constant").max_abs <= 1e-12

    def test_periodic_control(self):
        D = periodic_defect_matrix(FockWindow(0, 6), UNIT)
        assert residual_report(D, "zero").max_abs <= 1e-13

    def test_omega_two(self):
        D = hermiticity_defect_matrix(FockWindow(0, 4), PhysicalConstants(1, 2))
        assert np.max(np.abs(D.entries - 2j)) <= 1e-12

    def test_negative_window(self):
        w = FockWindow(-6, 6, allow_negative=True)
        D = hermiticity_defect_matrix(w, UNIT)
        assert np.max(np.abs(D.entries - 1j)) <= 1e-12


class TestResidualReport:
    def test_correct(self):
        rep = residual_report(commutator_matrix_correct(FockWindow(), UNIT), "ihbar_identity")
        assert rep.max_abs <= 1e-12
        assert "ihbar_identity" in str(rep)

    def test_zero(self):
        Z = OperatorMatrix(FockWindow(0, 2), UNIT, np.zeros((3, 3)), "zero")
        rep = residual_report(Z, "zero")
        assert rep.max_abs == 0 and rep.frobenius == 0

    def test_naive_misses_by_one(self):
        rep = residual_report(commutator_matrix_naive(FockWindow(0, 3), UNIT), "ihbar_identity")
        assert rep.max_abs == pytest.approx(1.0, abs=1e-14)
        # 4 diagonal entries off by 1 and 12 off-diagonal entries off by 1
        assert rep.frobenius == pytest.approx(4.0, abs=1e-13)

    def test_worst_location_uses_quantum_numbers(self):
        entries = np.zeros((3, 3), dtype=complex)
        entries[1, 2] = 5
        rep = residual_report(OperatorMatrix(FockWindow(4, 6), UNIT, entries), "zero")
        assert rep.worst == (5, 6)

    def test_unknown_target(self):
        Z = OperatorMatrix(FockWindow(0, 0), UNIT, np.zeros((1, 1)))
        with pytest.raises(ValueError):
            residual_report(Z, "identity")


@pytest.mark.parametrize("w", [FockWindow(0, 7), FockWindow(3, 10)], ids=str)
@pytest.mark.parametrize("c", CONSTANTS, ids=str)
def test_naive_relation_holds_for_window_confined_operator(w, c):
    B = phase_matrix(w, c)
    comm = window_commutator(B).entries
    n = np.array(w.states)
    expected = (n[None, :] - n[:, None]) * c.hbar_omega * B.entries
    assert np.max(np.abs(comm - expected)) <= 1e-13


def test_window_hamiltonian():
    H = window_hamiltonian(FockWindow(0, 2), PhysicalConstants(2, 0.5))
    assert np.array_equal(np.diag(H), [0.5, 1.5, 2.5])


class TestOperatorMatrix:
    def test_immutable(self):
        M = phase_matrix(FockWindow(0, 2))
        with pytest.raises(ValueError):
            M.entries[0, 0] = 1

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            OperatorMatrix(FockWindow(0, 2), UNIT, np.zeros((2, 2)))

    def test_finite_checked(self):
        with pytest.raises(ValueError):
            OperatorMatrix(FockWindow(0, 0), UNIT, np.array([[np.nan]]))

    def test_json_schema(self):
        M = phase_matrix(FockWindow(0, 1), PhysicalConstants(0.5, 3))
        data = M.to_dict()
        assert set(data) == {"label", "hbar", "omega", "window", "entries"}
        assert data["window"] == {"n_min": 0, "n_max": 1}
        assert data["entries"][0][1] == {"re": 0.0, "im": 1.0}

    @pytest.mark.parametrize("builder", [phase_matrix, time_matrix, paradox_gap,
                                         commutator_matrix_correct])
    def test_json_round_trip_bit_exact(self, builder):
        M = builder(FockWindow(1, 6), PhysicalConstants(0.5, 3))
        back = OperatorMatrix.from_json(M.to_json())
        assert np.array_equal(back.entries, M.entries)
        assert back.label == M.label and back.constants == M.constants
        assert back.window == M.window

    def test_csv_round_trip_bit_exact(self):
        M = commutator_matrix_correct(FockWindow(2, 9), PhysicalConstants(2, 0.25))
        text = M.to_csv()
        assert text.splitlines()[0] == "m,n,re,im"
        assert len(text.splitlines()) == 1 + 64
        back = OperatorMatrix.from_csv(text, M.constants)
        assert np.array_equal(back.entries, M.entries)
