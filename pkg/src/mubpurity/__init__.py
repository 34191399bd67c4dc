"""Mutually unbiased bases, purity conservation checks, and a swap-test simulator."""

from .expsim import (
    NOISELESS,
    PANEL_FIELDS,
    CircuitState,
    NoiseModel,
    PurityPanel,
    ab_marginal,
    apply_gate,
    calibration_factors,
    mub_measure_block,
    prepare_pair_state,
    rescale,
    run_protocol,
    swap_test_readout,
)
from .linalg import (
    DensityMatrix,
    PureState,
    density_from_json,
    density_to_json,
    hermitian_eigenvalues,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    partial_trace_matrix,
    partial_transpose,
    purity,
    tensor,
)
from .mub import (
    MubSet,
    MubValidationError,
    MubValidationReport,
    construct_mubs,
    is_prime,
    load_mubs,
    save_mubs,
    validate_mubs,
)
from .relations import (
    BipartiteBasis,
    PtIdentityReport,
    RelationReport,
    build_bipartite_basis,
    check_pt_identities,
    gamma_direct,
    gamma_via_projector,
    post_measurement_state,
    relation_report,
)
from .states import (
    lpps_deviation,
    psi_alpha,
    random_density,
    random_pure_state,
    rho_family,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteBasis",
    "CircuitState",
    "DensityMatrix",
    "MubSet",
    "MubValidationError",
    "MubValidationReport",
    "NoiseModel",
    "NOISELESS",
    "PANEL_FIELDS",
    "PtIdentityReport",
    "PureState",
    "PurityPanel",
    "RelationReport",
    "ab_marginal",
    "apply_gate",
    "build_bipartite_basis",
    "calibration_factors",
    "check_pt_identities",
    "construct_mubs",
    "density_from_json",
    "density_to_json",
    "gamma_direct",
    "gamma_via_projector",
    "hermitian_eigenvalues",
    "is_prime",
    "load_mubs",
    "lpps_deviation",
    "matrix_from_json",
    "matrix_to_json",
    "mub_measure_block",
    "partial_trace",
    "partial_trace_matrix",
    "partial_transpose",
    "post_measurement_state",
    "prepare_pair_state",
    "psi_alpha",
    "purity",
    "random_density",
    "random_pure_state",
    "relation_report",
    "rescale",
    "rho_family",
    "run_protocol",
    "save_mubs",
    "swap_test_readout",
    "tensor",
    "validate_mubs",
]
