"""Optimal convex approximation of qubit states by Pauli eigenstates."""

__version__ = "0.1.0"

from .qubit import (
    BasisId,
    BlochVector,
    DomainError,
    QubitParams,
    SymmetryRecord,
    UnsupportedBasisError,
    basis_states,
    bloch_from_params,
    canonicalize,
    density_matrix,
    trace_distance,
)
from .closed_form import (
    Case,
    DecompositionFamily,
    DistanceResult,
    Weights,
    b2_distance,
    case_branch,
    mixture,
    optimal_approximation,
    optimal_family,
)
from .oracle import ResourceCapError, grid_search, kkt_verify, preimage_family, project_bloch
from .regions import classify, scan_ranges, tradeoff, uncertainty_check
from .b3 import b3_distance, compare_scan
