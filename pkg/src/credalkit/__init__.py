"""Worst-case decision making over convex sets of probabilities.

The package models uncertainty as a credal set — the convex hull of finitely
many joint distributions over an observation variable and an outcome
variable — and answers decision questions against the worst member of that
set: the best committed rule, the best per-observation rule, equilibria of
the underlying zero-sum games (with machine-checked certificates), and a
family of updating rules with calibration and sharpness diagnostics.
"""

from .core import (
    DecisionRule,
    Event,
    JointDist,
    LossFn,
    SpaceSpec,
    condition,
    expected_loss,
    marginal_x,
    marginal_y,
)
from .credal import (
    CredalSet,
    DilationCell,
    DilationReport,
    HullSet,
    LinearConstraint,
    MarginalSet,
    build_hull,
    condition_on_x,
    conditional_y_sets,
    credal_condition,
    credal_equal,
    credal_marginal_x,
    credal_marginal_y,
    credal_subset,
    detect_dilation,
    from_constraints,
)
from .decision import (
    ConditioningReport,
    IgnoringReport,
    MinimaxResult,
    WalleyComparison,
    action_minimax,
    aposteriori_minimax,
    apriori_minimax,
    check_conditioning_optimal,
    check_ignoring_optimal,
    conditional_worst_case,
    walley_compare,
)
from .errors import (
    CertificateError,
    CredalkitError,
    DimensionError,
    EmptyConditionalError,
    EmptySetError,
    NumericalError,
    SizeLimitError,
    UnboundedPolytopeError,
    ValidationError,
    ZeroProbabilityError,
)
from .games import (
    BookieMixture,
    Equilibrium,
    EquilibriumCertificate,
    TimeInconsistencyReport,
    solve_commitment_game,
    solve_observation_game,
    time_inconsistency_report,
)
from .scenario import (
    Scenario,
    builtin_names,
    load_builtin,
    load_scenario,
    loads_scenario,
    resolve_scenario,
    save_scenario,
)
from .updating import (
    CalibrationReport,
    Partition,
    SharpSearchResult,
    UpdateRuleTable,
    all_partitions,
    c_conditioning,
    check_calibration,
    compare_narrowness,
    rule_from_update,
    sharp_search,
    vacuous_table,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # spaces and distributions
    "SpaceSpec", "JointDist", "Event", "LossFn", "DecisionRule",
    "condition", "marginal_x", "marginal_y", "expected_loss",
    # credal sets
    "CredalSet", "HullSet", "MarginalSet", "LinearConstraint",
    "from_constraints", "credal_condition", "condition_on_x",
    "conditional_y_sets", "credal_marginal_x", "credal_marginal_y",
    "build_hull", "credal_subset", "credal_equal",
    "DilationCell", "DilationReport", "detect_dilation",
    # worst-case decisions
    "MinimaxResult", "action_minimax", "apriori_minimax",
    "aposteriori_minimax", "conditional_worst_case",
    "ConditioningReport", "check_conditioning_optimal",
    "IgnoringReport", "check_ignoring_optimal",
    "WalleyComparison", "walley_compare",
    # games and certificates
    "BookieMixture", "Equilibrium", "EquilibriumCertificate",
    "solve_commitment_game", "solve_observation_game",
    "TimeInconsistencyReport", "time_inconsistency_report",
    # updating
    "Partition", "all_partitions", "UpdateRuleTable",
    "c_conditioning", "vacuous_table", "rule_from_update",
    "CalibrationReport", "check_calibration", "compare_narrowness",
    "SharpSearchResult", "sharp_search",
    # scenarios
    "Scenario", "load_scenario", "loads_scenario", "save_scenario",
    "builtin_names", "load_builtin", "resolve_scenario",
    # errors
    "CredalkitError", "DimensionError", "ValidationError",
    "ZeroProbabilityError", "EmptySetError", "EmptyConditionalError",
    "UnboundedPolytopeError", "SizeLimitError", "NumericalError",
    "CertificateError",
]
