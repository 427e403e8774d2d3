"""Two-qutrit outputs of the Buzek-Hillery cloner: entanglement, filtering and protocol figures of merit."""

from .matcore import (
    DensityMatrix,
    EigenSystem,
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    tensor,
    von_neumann_entropy,
)
from .cloner import MachineParams, OPTIMAL_MU, output_state, clone
from .entanglement import fef_basis, fef_optimized, npt_min_eigenvalue, reduction_report
from .protocols import dense_coding_capacity, teleportation_fidelity, verdict
from .filtering import Filter, FilteredState, apply_filter, distill_pipeline

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "EigenSystem",
    "Filter",
    "FilteredState",
    "MachineParams",
    "OPTIMAL_MU",
    "apply_filter",
    "clone",
    "dense_coding_capacity",
    "distill_pipeline",
    "fef_basis",
    "fef_optimized",
    "hermitian_eigensystem",
    "npt_min_eigenvalue",
    "output_state",
    "partial_trace",
    "partial_transpose",
    "reduction_report",
    "teleportation_fidelity",
    "tensor",
    "verdict",
    "von_neumann_entropy",
]
