"""Stabilizer-entropy cleansing, phase-transition bound and purity proxy."""

from .pauli import PauliString, Region, commutes, pauli_mul, restrict
from .tableau import (
    CliffordTableau,
    StabilizerMixedState,
    enumerate_clifford_group,
    permutation_clifford,
    random_clifford,
    stab_marginal_purity,
    stab_partial_trace,
    synthesize_circuit,
)
from .dense import (
    DenseState,
    DensityMatrix,
    SEReport,
    purity,
    reduced_density,
    se_report,
    simulate,
    stab_purity,
)
from .moments import (
    McEstimate,
    MomentCoefficients,
    mc_orbit_mlin,
    moment_coefficients,
    page_purity,
    prop1_exact,
    purity_fluctuation,
)

__version__ = "0.1.0"
