"""Fuzzy scoring on top of a three-parameter item response model.

The package covers the full pipeline: item/ability estimation from
dichotomous response matrices, test form assembly, a Mamdani rule base
over the item parameters with an XML interchange format, metaheuristic
tuning of its membership functions, and k-fold evaluation against the
item model itself.
"""

from .irt import (
    Ability,
    ItemParams,
    PerformanceLevel,
    demo_item_bank,
    icc_probability,
    item_information,
    performance_level,
    t_score,
    test_information,
    test_standard_error,
)
from .estimation import (
    GsConfig,
    GsResult,
    PriorConfig,
    Response,
    ResponseMatrix,
    default_theta_grid,
    estimate_abilities_map,
    estimate_ability_map,
    estimate_item_params,
    fit_item_params,
    gauss_seidel_estimate,
    log_likelihood,
    standardize,
)
from .fml import (
    FmlError,
    FuzzyRule,
    FuzzySet,
    FuzzySystem,
    FuzzyVariable,
    InferenceResult,
    build_rule_base,
    default_assessment_kb,
    infer,
    infer_batch,
    membership,
    parse_fml,
    serialize_fml,
    trapezoid,
    triangle,
)
from .learning import (
    BlockSpec,
    FitnessEvaluator,
    LearnConfig,
    ParticleLayout,
    PinningMethod,
    TrainResult,
    TrainingSet,
    decode,
    encode,
    fitness,
    gfml_train,
    pfml_train,
    pso_step,
    random_position,
    restrict,
    validate_restricted,
)
from .assembly import (
    AssemblyConfig,
    EsState,
    Form,
    assemble_form,
    assembly_objective,
    simulate_responses,
    top_m_indices,
)
from .evaluation import (
    ConfusionCounts,
    FoldSplit,
    LabeledPrediction,
    SweepResult,
    ThresholdPoint,
    confusion_at_threshold,
    curve_sweep,
    false_positive_rate,
    kfold_split,
    oracle_3pl,
    precision,
    recall,
    true_positive_rate,
)
from .cohort import CohortSpec, generate_cohort, generate_training_set
from .cli import FoldOutcome, emit_curves, evaluate_kfold

__version__ = "0.1.0"

__all__ = [
    "Ability",
    "AssemblyConfig",
    "BlockSpec",
    "CohortSpec",
    "ConfusionCounts",
    "EsState",
    "FitnessEvaluator",
    "FmlError",
    "FoldOutcome",
    "FoldSplit",
    "Form",
    "FuzzyRule",
    "FuzzySet",
    "FuzzySystem",
    "FuzzyVariable",
    "GsConfig",
    "GsResult",
    "InferenceResult",
    "ItemParams",
    "LabeledPrediction",
    "LearnConfig",
    "ParticleLayout",
    "PerformanceLevel",
    "PinningMethod",
    "PriorConfig",
    "Response",
    "ResponseMatrix",
    "SweepResult",
    "ThresholdPoint",
    "TrainResult",
    "TrainingSet",
    "assemble_form",
    "assembly_objective",
    "build_rule_base",
    "confusion_at_threshold",
    "curve_sweep",
    "decode",
    "default_assessment_kb",
    "default_theta_grid",
    "demo_item_bank",
    "emit_curves",
    "encode",
    "estimate_abilities_map",
    "estimate_ability_map",
    "estimate_item_params",
    "evaluate_kfold",
    "false_positive_rate",
    "fit_item_params",
    "fitness",
    "gauss_seidel_estimate",
    "generate_cohort",
    "generate_training_set",
    "gfml_train",
    "icc_probability",
    "infer",
    "infer_batch",
    "item_information",
    "kfold_split",
    "log_likelihood",
    "membership",
    "oracle_3pl",
    "parse_fml",
    "performance_level",
    "pfml_train",
    "precision",
    "pso_step",
    "random_position",
    "recall",
    "restrict",
    "serialize_fml",
    "simulate_responses",
    "standardize",
    "t_score",
    "test_information",
    "test_standard_error",
    "top_m_indices",
    "trapezoid",
    "triangle",
    "true_positive_rate",
    "validate_restricted",
]
