"""Perceptron training with early-stopped margin evaluation."""

from .types import (
    BIAS_INDEX,
    Completed,
    ContractError,
    DimensionMismatchError,
    DomainError,
    FilterConfig,
    Filtered,
    LabeledExample,
    LinearModel,
    MarginTerm,
    Order,
    PartialScanState,
    full_margin,
    make_example,
    margin_term,
)
from .stats import MarginMoments, inverse_normal_cdf, moments_mean_std, moments_update, normal_cdf
from .sequential import (
    StoppingThreshold,
    evaluation_order,
    partial_margin_scan,
    scan_terms,
    stopping_threshold,
)
from .perceptron import (
    EpochReport,
    TrainState,
    attentive_train_step,
    baseline_train_step,
    perceptron_update,
    predict,
    train_epoch,
)
from .data import (
    Dataset,
    ParseError,
    SynthKind,
    SynthSpec,
    generate_synthetic,
    load_sparse,
    parse_sparse_line,
    save_sparse,
    shuffle,
)
from .bench import RunReport, decision_error_oracle, run_benchmark, run_reflection_mc, sweep

__version__ = "0.1.0"

__all__ = [
    "BIAS_INDEX",
    "Completed",
    "ContractError",
    "DimensionMismatchError",
    "DomainError",
    "FilterConfig",
    "Filtered",
    "LabeledExample",
    "LinearModel",
    "MarginTerm",
    "Order",
    "PartialScanState",
    "full_margin",
    "make_example",
    "margin_term",
    "StoppingThreshold",
    "evaluation_order",
    "partial_margin_scan",
    "scan_terms",
    "stopping_threshold",
    "EpochReport",
    "TrainState",
    "attentive_train_step",
    "baseline_train_step",
    "perceptron_update",
    "predict",
    "train_epoch",
    "Dataset",
    "ParseError",
    "SynthKind",
    "SynthSpec",
    "generate_synthetic",
    "load_sparse",
    "parse_sparse_line",
    "save_sparse",
    "shuffle",
    "MarginMoments",
    "inverse_normal_cdf",
    "moments_mean_std",
    "moments_update",
    "normal_cdf",
    "RunReport",
    "decision_error_oracle",
    "run_benchmark",
    "run_reflection_mc",
    "sweep",
]
