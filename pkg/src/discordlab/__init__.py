"""Classical correlations and quantum discord of two-qubit states,
computed through the geometry of the quantum steering ellipsoid."""

__version__ = "0.1.0"

from .conjectures import (
    ClassifiedState,
    ConjectureRun,
    ConjectureViolationError,
    GapSample,
    GeneralRParams,
    MixtureParams,
    class_one_min_entropy,
    classify_optimal_line,
    general_r_geometry,
    general_r_matrix,
    make_general_r_state,
    make_mixture_state,
    min_chord_entropy,
    mixture_bloch_a,
    mixture_correlations_via_conjecture,
    mixture_ensemble,
    offaxis_reference_state,
    sample_general_r_params,
    sample_mixture_params,
    sweep_mixture,
    test_equi_entropy_conjecture,
)
from .discord import (
    DEFAULT_GRID,
    CorrelationReport,
    EnsembleMember,
    ProjectiveMeasurement,
    UnsupportedStructureError,
    avg_entropy,
    bell_diagonal_min_entropy,
    brute_force_min_entropy,
    correlation_report,
    post_measurement_ensemble,
    x_state_min_entropy,
)
from .dynamics import (
    PhaseDampingChannel,
    Trajectory,
    apply_channel,
    apply_named_channel,
    critical_time,
    evolve_trajectory,
)
from .qstate import (
    BellDiagonalParams,
    CorrelationMatrix,
    InvalidStateError,
    TwoQubitState,
    XStateParams,
    binary_entropy,
    bloch_vector,
    extract_x_params,
    make_bell_diagonal,
    make_x_state,
    mutual_information,
    partial_trace,
    pauli_expansion,
    reconstruct_state,
    swap_parties,
    von_neumann_entropy,
)
from .steering import (
    NotAnEllipsoidError,
    QuadricForm,
    SingularRError,
    SteeringEllipsoid,
    classify_degenerate,
    contains,
    ellipsoid_from_x_state,
    quadric_to_ellipsoid,
    steering_ellipsoid,
    steering_quadric,
    surface_points,
    x_frame_geometry,
    x_state_det,
)

__all__ = [
    "__version__",
    "BellDiagonalParams",
    "ClassifiedState",
    "ConjectureRun",
    "ConjectureViolationError",
    "CorrelationMatrix",
    "CorrelationReport",
    "DEFAULT_GRID",
    "EnsembleMember",
    "GapSample",
    "GeneralRParams",
    "InvalidStateError",
    "MixtureParams",
    "NotAnEllipsoidError",
    "PhaseDampingChannel",
    "ProjectiveMeasurement",
    "QuadricForm",
    "SingularRError",
    "SteeringEllipsoid",
    "Trajectory",
    "TwoQubitState",
    "UnsupportedStructureError",
    "XStateParams",
    "apply_channel",
    "apply_named_channel",
    "avg_entropy",
    "bell_diagonal_min_entropy",
    "binary_entropy",
    "bloch_vector",
    "brute_force_min_entropy",
    "class_one_min_entropy",
    "classify_degenerate",
    "classify_optimal_line",
    "contains",
    "correlation_report",
    "critical_time",
    "ellipsoid_from_x_state",
    "evolve_trajectory",
    "extract_x_params",
    "general_r_geometry",
    "general_r_matrix",
    "make_bell_diagonal",
    "make_general_r_state",
    "make_mixture_state",
    "make_x_state",
    "min_chord_entropy",
    "mixture_bloch_a",
    "mixture_correlations_via_conjecture",
    "mixture_ensemble",
    "mutual_information",
    "offaxis_reference_state",
    "partial_trace",
    "pauli_expansion",
    "post_measurement_ensemble",
    "quadric_to_ellipsoid",
    "reconstruct_state",
    "sample_general_r_params",
    "sample_mixture_params",
    "steering_ellipsoid",
    "steering_quadric",
    "surface_points",
    "swap_parties",
    "sweep_mixture",
    "test_equi_entropy_conjecture",
    "von_neumann_entropy",
    "x_frame_geometry",
    "x_state_det",
    "x_state_min_entropy",
]
