"""Feature weighting, oversampling, classification, and ablation for tabular cohorts."""

from .classifiers import (
    CLASSIFIER_LABELS,
    CLASSIFIERS,
    ClassifierSpec,
    Model,
    default_specs,
    fit,
    mlp_gradient_check,
    model_from_json,
    model_to_json,
    predict,
    predict_scores,
)
from .dataio import (
    CATEGORICAL,
    NUMERIC,
    ColumnSchema,
    FoldPlan,
    Table,
    filter_by_group,
    load_csv,
    load_schema_json,
    observed_groups,
    split,
    stratified_folds,
)
from .evaluation import (
    AblationReport,
    CrossValResult,
    EvalReport,
    Metrics,
    ablation,
    auc,
    best_classifier_per_group,
    confusion,
    cross_validate,
    per_group_rankings,
)
from .seeding import derive_seed
from .smote import SmoteConfig, minority_neighbors, smote
from .synth import (
    FeatureDef,
    SynthSpec,
    default_cohort_spec,
    generate,
    generate_with_truth,
    load_spec_json,
    planted_ablation_spec,
    planted_separable_spec,
    spec_from_json,
    spec_to_json,
    with_seed,
)
from .weighting import (
    ALGORITHMS,
    BinEdges,
    WeightMatrix,
    aggregate_ranks,
    entropy,
    equal_frequency_edges,
    rank_attributes,
    weigh_all,
    weight_chi_squared,
    weight_gini_index,
    weight_information_gain,
    weight_relief,
    weight_rule,
    weight_uncertainty,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AblationReport",
    "BinEdges",
    "CATEGORICAL",
    "CLASSIFIERS",
    "CLASSIFIER_LABELS",
    "ClassifierSpec",
    "ColumnSchema",
    "CrossValResult",
    "EvalReport",
    "FeatureDef",
    "FoldPlan",
    "Metrics",
    "Model",
    "NUMERIC",
    "SmoteConfig",
    "SynthSpec",
    "Table",
    "WeightMatrix",
    "ablation",
    "aggregate_ranks",
    "auc",
    "best_classifier_per_group",
    "confusion",
    "cross_validate",
    "default_cohort_spec",
    "default_specs",
    "derive_seed",
    "entropy",
    "equal_frequency_edges",
    "filter_by_group",
    "fit",
    "generate",
    "generate_with_truth",
    "load_csv",
    "load_schema_json",
    "load_spec_json",
    "minority_neighbors",
    "mlp_gradient_check",
    "model_from_json",
    "model_to_json",
    "observed_groups",
    "per_group_rankings",
    "planted_ablation_spec",
    "planted_separable_spec",
    "predict",
    "predict_scores",
    "rank_attributes",
    "smote",
    "spec_from_json",
    "spec_to_json",
    "split",
    "stratified_folds",
    "weigh_all",
    "with_seed",
    "weight_chi_squared",
    "weight_gini_index",
    "weight_information_gain",
    "weight_relief",
    "weight_rule",
    "weight_uncertainty",
]
