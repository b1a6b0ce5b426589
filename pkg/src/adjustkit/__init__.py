"""Interventional estimates from observational samples of discrete joints.

The core object is the adjustment functional

    T_A(y; x) = sum_a P(y | a, x) P(a)

over an adjustment set A, together with the positivity margin alpha_A that
controls how well it can be estimated from data. On top of that sit a
plug-in estimator, approximate conditional-independence testing, blanket
and screening-set searches, a decide-then-estimate pipeline, and a gallery
of constructed distributions whose relevant quantities have closed forms.
"""

from .bench import (
    CSV_HEADER,
    METHOD_AMBA,
    METHOD_DIRECT,
    METHOD_PIPELINE,
    ExperimentConfig,
    ReportRow,
    dataset_stream,
    read_rows,
    run_convergence,
    run_pipeline_comparison,
    write_rows,
)
from .ci import (
    DEFAULT_C0,
    NO,
    YES,
    CiQuery,
    CiTester,
    ci_sample_budget,
    ci_test,
    delta_ci,
    delta_ci_alt,
    delta_ci_empirical,
    query_alphabet_size,
)
from .dist import (
    Event,
    JointDistribution,
    SampleDataset,
    VariableSpec,
    conditional_prob,
    count,
    empirical_distribution,
    joint_codes,
    marginal,
    probability,
    rng_for,
    sample,
    trial_seed,
    validate,
)
from .errors import (
    AdjustKitError,
    CandidateSetTooLargeError,
    EmptyDatasetError,
    InsufficientSamplesError,
    NegativeMassError,
    NotNormalizedError,
    OutOfRangeError,
    ParamRangeError,
    ParseError,
    PositivityViolationError,
    ShapeMismatchError,
    UnknownVariableError,
    UsageError,
    ZeroConditionError,
)
from .estimators import (
    AdjustmentQuery,
    EstimateReport,
    alpha,
    error_bound,
    exact_adjustment,
    plugin_adjustment,
    poissonized_sample,
    sample_size_estimation,
    sample_size_expectation,
)
from .gallery import (
    gallery_backdoor,
    gallery_hardness,
    gallery_random,
    gallery_weak_edge,
    gallery_xor,
    hardness_marginal_a1,
)
from .io import (
    dist_to_json,
    read_data,
    read_dist,
    write_data,
    write_dist,
)
from .search import (
    USE_SUBSET,
    USE_Z,
    AutoEstimateResult,
    DecisionInputs,
    DecisionTrace,
    SearchReport,
    amba,
    amba_decision,
    auto_estimate,
    bamba,
    brute_force_min_blanket,
    brute_force_min_screening,
    empirical_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "AdjustKitError",
    "AdjustmentQuery",
    "AutoEstimateResult",
    "CSV_HEADER",
    "CandidateSetTooLargeError",
    "CiQuery",
    "CiTester",
    "DEFAULT_C0",
    "DecisionInputs",
    "DecisionTrace",
    "EmptyDatasetError",
    "EstimateReport",
    "Event",
    "ExperimentConfig",
    "InsufficientSamplesError",
    "JointDistribution",
    "METHOD_AMBA",
    "METHOD_DIRECT",
    "METHOD_PIPELINE",
    "NO",
    "NegativeMassError",
    "NotNormalizedError",
    "OutOfRangeError",
    "ParamRangeError",
    "ParseError",
    "PositivityViolationError",
    "ReportRow",
    "SampleDataset",
    "SearchReport",
    "ShapeMismatchError",
    "USE_SUBSET",
    "USE_Z",
    "UnknownVariableError",
    "UsageError",
    "VariableSpec",
    "YES",
    "ZeroConditionError",
    "alpha",
    "amba",
    "amba_decision",
    "auto_estimate",
    "bamba",
    "brute_force_min_blanket",
    "brute_force_min_screening",
    "ci_sample_budget",
    "ci_test",
    "conditional_prob",
    "count",
    "dataset_stream",
    "delta_ci",
    "delta_ci_alt",
    "delta_ci_empirical",
    "dist_to_json",
    "empirical_alpha",
    "empirical_distribution",
    "error_bound",
    "exact_adjustment",
    "gallery_backdoor",
    "gallery_hardness",
    "gallery_random",
    "gallery_weak_edge",
    "gallery_xor",
    "hardness_marginal_a1",
    "joint_codes",
    "marginal",
    "plugin_adjustment",
    "poissonized_sample",
    "probability",
    "query_alphabet_size",
    "read_data",
    "read_dist",
    "read_rows",
    "rng_for",
    "run_convergence",
    "run_pipeline_comparison",
    "sample",
    "sample_size_estimation",
    "sample_size_expectation",
    "trial_seed",
    "validate",
    "write_data",
    "write_dist",
    "write_rows",
    "__version__",
]
