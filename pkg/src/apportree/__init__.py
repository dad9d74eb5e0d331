"""Seat apportionment over entitlement trees with exact rational arithmetic."""

from .core import (
    CHILDREN_WEIGHTS_NOT_NORMALIZED,
    NON_TREE,
    WEIGHT_OUT_OF_RANGE,
    Allocation,
    Instance,
    InvalidInstanceError,
    QuotaBounds,
    QuotaMode,
    QuotaReport,
    StructuralError,
    allocation_from_json,
    allocation_to_json,
    check_allocation,
    count_violations,
    instance_from_json,
    instance_to_json,
    parse_instance_document,
    parse_weight,
    quota_bounds,
    relative_entitlement,
    relative_entitlements,
    require_valid,
    strict_quota,
    validate_instance,
)
from .existence import (
    BinaryReduction,
    EmptyInterval,
    FeasibleInterval,
    SizeLimitExceeded,
    allocate_both_quotas,
    brute_force_both_quotas,
    to_full_binary,
    trace_both_quotas,
)
from .experiments import (
    ALL_METHODS,
    ExperimentConfig,
    InstanceMetrics,
    MetricsTable,
    TableRow,
    config_from_json,
    emit_table,
    evaluate_instance,
    format_fixed,
    run_experiment,
)
from .generator import (
    SplitMix64,
    TreeFamily,
    TreeKind,
    TreeSkeleton,
    UnsupportedHeight,
    assign_entitlements,
    build_tree,
    random_instance,
)
from .methods import (
    MethodKind,
    NoEligibleChild,
    TieBreak,
    Trajectory,
    run_method,
    step_adams,
    step_jefferson,
    step_quota,
    step_uc_quota,
)

__all__ = [
    "ALL_METHODS",
    "Allocation",
    "BinaryReduction",
    "CHILDREN_WEIGHTS_NOT_NORMALIZED",
    "EmptyInterval",
    "ExperimentConfig",
    "FeasibleInterval",
    "Instance",
    "InstanceMetrics",
    "InvalidInstanceError",
    "MethodKind",
    "MetricsTable",
    "NON_TREE",
    "NoEligibleChild",
    "QuotaBounds",
    "QuotaMode",
    "QuotaReport",
    "SizeLimitExceeded",
    "SplitMix64",
    "StructuralError",
    "TableRow",
    "TieBreak",
    "Trajectory",
    "TreeFamily",
    "TreeKind",
    "TreeSkeleton",
    "UnsupportedHeight",
    "WEIGHT_OUT_OF_RANGE",
    "allocate_both_quotas",
    "allocation_from_json",
    "allocation_to_json",
    "assign_entitlements",
    "brute_force_both_quotas",
    "build_tree",
    "check_allocation",
    "config_from_json",
    "count_violations",
    "emit_table",
    "evaluate_instance",
    "format_fixed",
    "instance_from_json",
    "instance_to_json",
    "parse_instance_document",
    "parse_weight",
    "quota_bounds",
    "random_instance",
    "relative_entitlement",
    "relative_entitlements",
    "require_valid",
    "run_experiment",
    "run_method",
    "step_adams",
    "step_jefferson",
    "step_quota",
    "step_uc_quota",
    "strict_quota",
    "to_full_binary",
    "trace_both_quotas",
    "validate_instance",
]

__version__ = "0.1.0"
