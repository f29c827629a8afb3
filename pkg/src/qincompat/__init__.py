"""Incompatibility analysis for tuples of unbiased qubit measurements."""

__version__ = "0.1.0"

from .bloch import (
    InputError,
    Measurement,
    MeasurementTuple,
    QubitState,
    ValidationResult,
    derived_p_vectors,
    outcome_probabilities,
    validate,
)
from .geomedian import FTResult, fermat_torricelli, is_vertex_optimal
from .compat import (
    CompatReport,
    ntuple_sufficient,
    pairwise_compatible,
    parent_povm_feasible,
    triple_compatible,
)
from .metrics import (
    BoundReport,
    DeltaReport,
    delta_grid_max,
    delta_state_dependent,
    delta_worst_case,
    delta_worst_case_pairwise,
    dominance_check,
    fibonacci_sphere_points,
    ntuple_lower_bound_heuristic,
    pairwise_lower_bound,
    pairwise_sum_lower_bound,
    triple_lower_bound,
)
from .optimize import OptimizeResult, OptimizerConfig, minimize_delta, shrink_to_compatible

__all__ = [
    "__version__",
    "InputError",
    "Measurement",
    "MeasurementTuple",
    "QubitState",
    "ValidationResult",
    "derived_p_vectors",
    "outcome_probabilities",
    "validate",
    "FTResult",
    "fermat_torricelli",
    "is_vertex_optimal",
    "CompatReport",
    "ntuple_sufficient",
    "pairwise_compatible",
    "parent_povm_feasible",
    "triple_compatible",
    "BoundReport",
    "DeltaReport",
    "delta_grid_max",
    "delta_state_dependent",
    "delta_worst_case",
    "delta_worst_case_pairwise",
    "dominance_check",
    "fibonacci_sphere_points",
    "ntuple_lower_bound_heuristic",
    "pairwise_lower_bound",
    "pairwise_sum_lower_bound",
    "triple_lower_bound",
    "OptimizeResult",
    "OptimizerConfig",
    "minimize_delta",
    "shrink_to_compatible",
]
