"""Spectra of PT-invariant oscillators and their indefinite-metric wrong-sign partners."""

__version__ = "0.1.0"

from .eigensolve import Eigenpair, Spectrum, converged_spectrum, eigen_decompose, reality_report
from .exact import GaussianSurd
from .fock_space import (
    TruncatedOperator,
    canonical_matrices,
    exact_power,
    ladder_matrices,
    metric_matrix,
    number_matrix,
)
from .hamiltonians import (
    HamiltonianMatrix,
    OscillatorSpec,
    build_pt_hamiltonian,
    build_wrong_sign_hamiltonian,
    pseudo_hermiticity_defect,
)
from .indefinite_metric import (
    EigenpairWithNorm,
    eigen_norms,
    eta_inner,
    eta_orthogonality_defect,
    physical_projector,
)
from .ladder_algebra import LadderPolynomial, adjoint, interaction_picture, multiply, to_matrix
from .perturbation import adiabatic_diagonal_order2, gml_norm_check, rs_series

__all__ = [
    "Eigenpair",
    "EigenpairWithNorm",
    "GaussianSurd",
    "HamiltonianMatrix",
    "LadderPolynomial",
    "OscillatorSpec",
    "Spectrum",
    "TruncatedOperator",
    "adiabatic_diagonal_order2",
    "adjoint",
    "build_pt_hamiltonian",
    "build_wrong_sign_hamiltonian",
    "canonical_matrices",
    "converged_spectrum",
    "eigen_decompose",
    "eigen_norms",
    "eta_inner",
    "eta_orthogonality_defect",
    "exact_power",
    "gml_norm_check",
    "interaction_picture",
    "ladder_matrices",
    "metric_matrix",
    "multiply",
    "number_matrix",
    "physical_projector",
    "pseudo_hermiticity_defect",
    "reality_report",
    "rs_series",
    "to_matrix",
]
