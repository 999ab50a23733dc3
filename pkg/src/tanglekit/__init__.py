"""Polynomial SLOCC entanglement invariants of few-qubit states, their
correlator-based measurement forms, shot-noise simulation and convex-roof
bounds."""

from .errors import (
    ConsistencyError,
    DegenerateInputError,
    DimensionError,
    FilterSpecError,
    IncompleteTableError,
    NumericalError,
    NumericalStabilityError,
    ParameterError,
    StateFileError,
    TanglekitError,
)
from .qubits import (
    DensityMatrix,
    LocalInvertible,
    LocalKind,
    PureState,
    apply_local,
    bell_phi_plus,
    expectation,
    ghz_state,
    make_state,
    parse_pauli_label,
    pauli_label,
    pauli_operator,
    random_state,
    sample_local_group,
    w_state,
    white_noise_mix,
)
from .invariants import (
    COMB_METRIC,
    FilterSpec,
    antilinear_form,
    comb_value_double,
    comb_value_single,
    concurrence,
    concurrence_filter_spec,
    concurrence_polynomial,
    filter_value,
    n_tangle,
    tangle_polynomial,
    three_tangle,
    three_tangle_filter_spec,
)
from .lift import (
    MINKOWSKI_METRIC,
    CombCouplingTensor,
    concurrence_sq_linear,
    coupling_tensor,
    coupling_tensor_diff_report,
    lift_comb,
    lifted_sigma_y,
    p_plus_identity_check,
    p_plus_quantity,
    p_minus_quantity,
    swap_operator,
    tau3_sq_linear,
    tau3_sq_linear_checked,
)
from .correlators import (
    CorrelatorEntry,
    CorrelatorTable,
    InvariantEstimate,
    all_pauli_strings,
    exact_correlators,
    invariant_from_table,
    read_table_csv,
    sample_correlator,
    sample_correlator_table,
    write_table_csv,
)
from .noise import (
    FirstOrderOracleResult,
    MStats,
    NoiseScenario,
    affine_lower_bound,
    c2_exp_formula,
    deviation_bound,
    first_order_oracle,
    ghzw_constants,
    m_statistics,
    noise_curve,
    tau3_exp_formula,
    threshold_epsilon,
)
from .roof import (
    Decomposition,
    RoofResult,
    ghzw_mixture,
    roof_upper_bound,
    vanish_threshold,
    vanish_threshold_scan,
)
from .stateio import (
    load_density_matrix,
    load_filter_spec,
    load_state,
    save_density_matrix,
    save_filter_spec,
    save_state,
)

__version__ = "0.1.0"
