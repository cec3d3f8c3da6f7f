"""Time operator of the harmonic oscillator in the phase representation."""

from .integrals import (
    QuadratureSpec,
    hermiticity_defect,
    inner_product,
    inner_product_quadrature,
    monomial_integral,
)
from .matrices import (
    FockWindow,
    OperatorMatrix,
    commutator_matrix_correct,
    commutator_matrix_naive,
    hermiticity_defect_matrix,
    paradox_gap,
    phase_matrix,
    residual_report,
    time_matrix,
)
from .operators import apply_hamiltonian, apply_phase, apply_time, commutator_action
from .phasefn import (
    PHI,
    FourierSeries,
    PhasePolyFourier,
    PhysicalConstants,
    fock_eigenfunction,
)

__version__ = "0.1.0"
