"""Exact and probabilistically precise explanations for binary Naive Bayes
classifiers over categorical features.

The pipeline: train or load a model, reduce it to an extended linear
classifier, compute a subset-minimal abductive explanation from slack
quantities, and (when that explanation is too long) quantize the classifier
into an integer counting form whose dynamic program scores candidate subsets
by exact rational precision, trimming the explanation while a precision
threshold keeps holding.
"""

from .axp import FeatureSet, as_feature_set, compute_axp, is_weak_axp
from .bench import BenchCell, BenchReport, run_bench
from .counting import CountTable, count_complement, count_models, precision
from .dataio import (
    load_dataset,
    load_model,
    model_from_dict,
    model_to_dict,
    reindex_dataset,
    save_dataset,
    save_model,
    split_dataset,
)
from .errors import (
    AuditFailure,
    DataFormatError,
    DomainMismatch,
    EmptyDataset,
    NbxplainError,
    NonPositiveAlpha,
    NotPredictedPositive,
    ScaleOverflow,
    SeedNotWeakPAXp,
    SingleClassDataset,
    SpaceTooLarge,
)
from .model import (
    NEG,
    POS,
    Dataset,
    FeatureSpec,
    Instance,
    NbcModel,
    accuracy,
    instance_from_labels,
    instance_labels,
    joint_log_scores,
    predict,
    train,
    validate_instance,
)
from .paxp import Explanation, approx_paxp, as_delta, explain, is_weak_paxp
from .xlc import (
    QuantizedKnapsack,
    SlackProfile,
    Xlc,
    decision_disagreements,
    negated,
    nu,
    orient,
    quantize,
    quantized_weight_sum,
    reduce_model,
    slack,
)
