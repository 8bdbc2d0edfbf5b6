"""Liouvillian gaps of dissipative Haar-doped Floquet Clifford rings.

The package propagates Pauli strings through brickwork Clifford circuits
whose doped sites carry random single-qubit rotations, with uniform
single-qubit damping applied once per period.  It measures the spectral gap
of the resulting Pauli-basis transfer map (dense or by power iteration),
certifies truncation lower bounds, searches block-staggered rings for
minimal recurrent string cycles, and exposes the whole toolkit through the
``floquetgap`` command line interface.
"""

from .channel import (
    MAX_DENSE_DIMENSION,
    MAX_POWER_QUBITS,
    AnnealedGapEstimate,
    EigenmodeWeights,
    EnsembleGapResult,
    FloquetSpec,
    GapEstimate,
    HaarRealization,
    annealed_gap,
    apply_channel,
    dense_gap,
    dense_matrix,
    ensemble_gap,
    gap_eigenmode_weights,
    power_gap,
    realization_for,
    weights_vector,
)
from .cliffords import (
    LC_CLASSES,
    CliffordCircuit,
    TwoQubitTableau,
    classify_lc,
    conjugate_through_circuit,
    fixed_brickwork,
    fixed_gate_tableau,
    layer_bonds,
    named_tableau,
    sample_class_tableau,
    sample_tableau,
    sampled_brickwork,
    undoped_gap,
)
from .cycles import (
    CycleSearchResult,
    CycleStep,
    ReturnCycle,
    cycle_search,
    string_successors,
)
from .patterns import (
    DEFAULT_LOWER_BOUND_COEFF,
    PATTERN_KINDS,
    DopingPattern,
    format_pattern,
    gap_lower_bound_general,
    is_dense,
    is_staggered_like,
    longest_undoped_arc,
    make_pattern,
    parse_pattern,
)
from .paulis import (
    ORBIT_SPECTRUM_MAX_QUBITS,
    PauliOrbit,
    PauliString,
    enumerate_orbit,
    format_pauli,
    from_index,
    index_of,
    multiply,
    orbit_weight_spectrum,
    parse_pauli,
    weight,
)
from .rotations import (
    HaarLogStats,
    SingleQubitRotation,
    analytic_log_bilinear_average,
    analytic_log_entry_average,
    clifford_decompose,
    identity_rotation,
    mc_log_bilinear_average,
    mc_log_entry_average,
    rotation_from_quaternion,
    sample_rotation,
)
from .truncation import (
    CutoffReport,
    ProductFormulaGap,
    TruncatedPropagator,
    TruncationLowerBound,
    build_truncated,
    dense_upper_bound,
    feingold_varga_bound,
    fully_doped_formula,
    fully_doped_thermodynamic_gap,
    gap_lower_bound_from_truncation,
    is_eigenmode_free,
    largest_eigenmode_free_cutoff,
    staggered_formula,
    staggered_like_transition_table,
    staggered_like_upper_bound,
    staggered_thermodynamic_gap,
    truncated_node_count,
)

__all__ = [
    "MAX_DENSE_DIMENSION",
    "MAX_POWER_QUBITS",
    "AnnealedGapEstimate",
    "annealed_gap",
    "EigenmodeWeights",
    "EnsembleGapResult",
    "FloquetSpec",
    "GapEstimate",
    "HaarRealization",
    "apply_channel",
    "dense_gap",
    "dense_matrix",
    "ensemble_gap",
    "gap_eigenmode_weights",
    "power_gap",
    "realization_for",
    "weights_vector",
    "LC_CLASSES",
    "CliffordCircuit",
    "TwoQubitTableau",
    "classify_lc",
    "conjugate_through_circuit",
    "fixed_brickwork",
    "fixed_gate_tableau",
    "layer_bonds",
    "named_tableau",
    "sample_class_tableau",
    "sample_tableau",
    "sampled_brickwork",
    "undoped_gap",
    "CycleSearchResult",
    "CycleStep",
    "ReturnCycle",
    "cycle_search",
    "string_successors",
    "DEFAULT_LOWER_BOUND_COEFF",
    "PATTERN_KINDS",
    "DopingPattern",
    "format_pattern",
    "gap_lower_bound_general",
    "is_dense",
    "is_staggered_like",
    "longest_undoped_arc",
    "make_pattern",
    "parse_pattern",
    "ORBIT_SPECTRUM_MAX_QUBITS",
    "PauliOrbit",
    "PauliString",
    "enumerate_orbit",
    "format_pauli",
    "from_index",
    "index_of",
    "multiply",
    "orbit_weight_spectrum",
    "parse_pauli",
    "weight",
    "HaarLogStats",
    "SingleQubitRotation",
    "analytic_log_bilinear_average",
    "analytic_log_entry_average",
    "clifford_decompose",
    "identity_rotation",
    "mc_log_bilinear_average",
    "mc_log_entry_average",
    "rotation_from_quaternion",
    "sample_rotation",
    "CutoffReport",
    "ProductFormulaGap",
    "TruncatedPropagator",
    "TruncationLowerBound",
    "build_truncated",
    "dense_upper_bound",
    "feingold_varga_bound",
    "fully_doped_formula",
    "fully_doped_thermodynamic_gap",
    "gap_lower_bound_from_truncation",
    "is_eigenmode_free",
    "largest_eigenmode_free_cutoff",
    "staggered_formula",
    "staggered_like_transition_table",
    "staggered_like_upper_bound",
    "staggered_thermodynamic_gap",
    "truncated_node_count",
]
