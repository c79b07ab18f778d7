"""Optimal M-outcome phase measurement on a qubit, end to end.

The pipeline: build the covariant phase POVM, extend it to a projective
measurement on an M-dimensional space, factor that unitary into Givens
rotations, and simulate the resulting single-photon interferometers
(direct chain and folded loop), checking the click statistics against
the analytic distribution.
"""

from .compiler import (
    GivensRotation,
    Netlist,
    PhaseShift,
    canonical_angle,
    decompose_by_elimination,
    decompose_closed,
    evaluate_netlist,
    givens_matrix,
    netlist_from_json_dict,
    netlist_to_json_dict,
    netlists_equal,
    phase_matrix,
    triplet_angle,
)
from .naimark import (
    ExtensionMatrix,
    NaimarkReport,
    build_extension_closed,
    build_extension_recursive,
    closed_form_column,
    column_order,
    embed_with_ancilla,
    extension_to_csv,
    extension_to_json_dict,
    projector,
    verify_naimark,
)
from .numerics import (
    adjoint,
    eig_hermitian_2x2,
    is_unitary,
    matmul,
    partial_trace_ancilla,
)
from .optics import (
    Detector,
    FoldedSlotSetting,
    ModeAmplitudes,
    PBS,
    PPBS,
    PolarizationRotation,
    Scheme,
    SlotDistribution,
    WaveplatePhase,
    apply_element,
    beam_splitter,
    build_direct_scheme,
    build_folded_schedule,
    distribution_to_csv,
    distribution_to_json_dict,
    input_state,
    modular_block_isometry,
    scheme_transfer_matrix,
    simulate_direct,
    simulate_folded,
    simulate_netlist,
)
from .povm import (
    OutcomeDistribution,
    PhasePovm,
    analytic_phase_distribution,
    guessing_probability,
    outcome_probability,
    phase_povm,
    povm_element,
    psi_k,
    pure_phase_state,
    random_density,
    validate_density,
    validate_outcome_count,
    wrap_phase,
)

__version__ = "0.1.0"

__all__ = [
    "GivensRotation",
    "Netlist",
    "PhaseShift",
    "canonical_angle",
    "decompose_by_elimination",
    "decompose_closed",
    "evaluate_netlist",
    "givens_matrix",
    "netlist_from_json_dict",
    "netlist_to_json_dict",
    "netlists_equal",
    "phase_matrix",
    "triplet_angle",
    "ExtensionMatrix",
    "NaimarkReport",
    "build_extension_closed",
    "build_extension_recursive",
    "closed_form_column",
    "column_order",
    "embed_with_ancilla",
    "extension_to_csv",
    "extension_to_json_dict",
    "projector",
    "verify_naimark",
    "adjoint",
    "eig_hermitian_2x2",
    "is_unitary",
    "matmul",
    "partial_trace_ancilla",
    "Detector",
    "FoldedSlotSetting",
    "ModeAmplitudes",
    "PBS",
    "PPBS",
    "PolarizationRotation",
    "Scheme",
    "SlotDistribution",
    "WaveplatePhase",
    "apply_element",
    "beam_splitter",
    "build_direct_scheme",
    "build_folded_schedule",
    "distribution_to_csv",
    "distribution_to_json_dict",
    "input_state",
    "modular_block_isometry",
    "scheme_transfer_matrix",
    "simulate_direct",
    "simulate_folded",
    "simulate_netlist",
    "OutcomeDistribution",
    "PhasePovm",
    "analytic_phase_distribution",
    "guessing_probability",
    "outcome_probability",
    "phase_povm",
    "povm_element",
    "psi_k",
    "pure_phase_state",
    "random_density",
    "validate_density",
    "validate_outcome_count",
    "wrap_phase",
    "__version__",
]
