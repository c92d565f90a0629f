"""Exact enumeration, asymptotics, and simulation of connected sparse
graphs and multigraphs avoiding forbidden subgraphs."""

from .asymptotics import (
    SaddleContext,
    c_asymptotic,
    d_sequence,
    driver_ratio,
    ln_fraction,
    saddle_context,
    saddle_error,
    singular_expansion_check,
    tn_exact_log,
    tn_fixed,
    tn_saddle,
    tree_value,
)
from .census import (
    ConstantTable,
    ForbiddenGraph,
    ForbiddenSet,
    InequalityReport,
    TRIANGLE_SET,
    catalogue,
    closed_form,
    closed_form_excess,
    compute_wk,
    inequality_check,
    leading_coefficients,
    partition_count,
    partition_series,
    reconstruct_triangle_free,
    recurrence_residual,
    smooth_bicyclic_partition,
    t_expansion,
    w1_xifree_leading,
    wright_constants,
)
from .errors import (
    ConsistencyError,
    PinError,
    ResourceLimitError,
    XiFreeError,
    XRingError,
)
from .probability import (
    ComponentProfile,
    Deduction,
    K4_DEDUCTION,
    SQRT_TWO_THIRDS,
    coeff_to_probability,
    edge_count_window,
    edge_weight_drift,
    iter_profiles,
    low_complexity_probability,
    phi_theta,
    profile_probability,
    profile_rational_part,
    profile_sum,
    theta_exponent,
)
from .series import (
    BivariateSeries,
    Series,
    SeriesError,
    cayley_tree_series,
    log_inv_x_count,
    log_inv_x_series,
    tree_polynomial,
    x_power_series,
)
from .simulator import (
    Estimate,
    ProcessConfig,
    TrialOutcome,
    classify_component,
    event_predicate,
    run_trials,
    run_trials_multi,
)
from .xring import (
    SmoothFamily,
    XExpr,
    base_rhs,
    compose_parallel,
    compose_serial,
    delta_apply,
    delta_invert,
    lambda_sum,
    omega_apply,
    theta_smooth,
    theta_z,
)

__version__ = "0.1.0"

__all__ = [
    "BivariateSeries",
    "ComponentProfile",
    "ConsistencyError",
    "ConstantTable",
    "Deduction",
    "Estimate",
    "ForbiddenGraph",
    "ForbiddenSet",
    "InequalityReport",
    "K4_DEDUCTION",
    "PinError",
    "ProcessConfig",
    "ResourceLimitError",
    "SQRT_TWO_THIRDS",
    "SaddleContext",
    "Series",
    "SeriesError",
    "SmoothFamily",
    "TRIANGLE_SET",
    "TrialOutcome",
    "XExpr",
    "XRingError",
    "XiFreeError",
    "base_rhs",
    "c_asymptotic",
    "catalogue",
    "cayley_tree_series",
    "classify_component",
    "closed_form",
    "closed_form_excess",
    "coeff_to_probability",
    "compose_parallel",
    "compose_serial",
    "compute_wk",
    "d_sequence",
    "delta_apply",
    "delta_invert",
    "driver_ratio",
    "edge_count_window",
    "edge_weight_drift",
    "event_predicate",
    "inequality_check",
    "iter_profiles",
    "lambda_sum",
    "leading_coefficients",
    "ln_fraction",
    "log_inv_x_count",
    "log_inv_x_series",
    "low_complexity_probability",
    "omega_apply",
    "partition_count",
    "partition_series",
    "phi_theta",
    "profile_probability",
    "profile_rational_part",
    "profile_sum",
    "reconstruct_triangle_free",
    "recurrence_residual",
    "run_trials",
    "run_trials_multi",
    "saddle_context",
    "saddle_error",
    "singular_expansion_check",
    "smooth_bicyclic_partition",
    "t_expansion",
    "theta_exponent",
    "theta_smooth",
    "theta_z",
    "tn_exact_log",
    "tn_fixed",
    "tn_saddle",
    "tree_polynomial",
    "tree_value",
    "w1_xifree_leading",
    "wright_constants",
    "x_power_series",
]
