"""Baseline and attentive Perceptron training, prediction and work accounting."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .sequential import _scan, evaluation_order, scan_terms, stopping_threshold
from .stats import MarginMoments, moments_mean_std, moments_update
from .types import (
    ContractError,
    FilterConfig,
    Filtered,
    LabeledExample,
    LinearModel,
    ScanOutcome,
    _check_fits,
    full_margin,
)


@dataclass(frozen=True)
class TrainState:
    """Model plus everything a training run accumulates.

    ``score_moments`` track the unsigned score ``w . x`` of completed
    examples and feed prediction-time filtering. ``gated_*`` count only the
    examples processed while the filter was active (after warmup).
    """

    model: LinearModel
    moments: MarginMoments = field(default_factory=MarginMoments)
    score_moments: MarginMoments = field(default_factory=MarginMoments)
    examples_seen: int = 0
    updates: int = 0
    filtered: int = 0
    mistakes: int = 0
    features_evaluated: int = 0
    features_available: int = 0
    gated_examples: int = 0
    gated_features: int = 0

    @classmethod
    def initial(cls, dimension: int, config: Optional[FilterConfig] = None) -> "TrainState":
        config = config or FilterConfig()
        m = MarginMoments(decay=config.decay, warmup=config.warmup)
        return cls(LinearModel.zeros(dimension), moments=m, score_moments=m)


@dataclass(frozen=True)
class EpochReport:
    epoch: int
    examples: int
    updates: int
    filtered: int
    decision_errors: int
    features_evaluated: int
    features_available: int
    train_mistakes: int


def perceptron_update(model: LinearModel, example: LabeledExample) -> LinearModel:
    """``w <- w + y x`` over the example's stored features."""
    _check_fits(model, example)
    w = model.weights.copy()
    w[example.indices] += example.label * example.values
    return LinearModel(w)


def _complete(state: TrainState, example: LabeledExample, margin: float, theta: float,
              evaluated: int, gated: bool) -> TrainState:
    n = example.n_features
    model, updates = state.model, state.updates
    if margin <= theta:
        model = perceptron_update(model, example)
        updates += 1
    return replace(
        state,
        model=model,
        moments=moments_update(state.moments, margin),
        score_moments=moments_update(state.score_moments, example.label * margin),
        examples_seen=state.examples_seen + 1,
        updates=updates,
        mistakes=state.mistakes + (margin <= 0.0),
        features_evaluated=state.features_evaluated + evaluated,
        features_available=state.features_available + n,
        gated_examples=state.gated_examples + gated,
        gated_features=state.gated_features + (evaluated if gated else 0),
    )


def baseline_train_step(state: TrainState, example: LabeledExample, theta: float = 0.0) -> TrainState:
    """Classic Perceptron step: full margin, update iff it is <= ``theta``."""
    margin = full_margin(state.model, example)
    return _complete(state, example, margin, theta, example.n_features, False)


def filter_active(state: TrainState, config: FilterConfig) -> bool:
    # a spread estimate needs at least two margins, whatever the warmup says
    return config.enabled and state.moments.count >= max(config.warmup, 2)


def attentive_step(
    state: TrainState, example: LabeledExample, config: FilterConfig
) -> tuple[TrainState, Optional[ScanOutcome]]:
    """Attentive step that also returns the scan outcome (``None`` before the filter is active)."""
    if not filter_active(state, config):
        return baseline_train_step(state, example, config.theta), None
    mean, std = moments_mean_std(state.moments, config.min_std)
    tau = stopping_threshold(config.theta, mean, std, config.delta).tau
    order = evaluation_order(example, state.model, config.order, config.seed, example.id)
    outcome = _scan(state.model, example, tau, order, config.stride, True)
    if isinstance(outcome, Filtered):
        state = replace(
            state,
            examples_seen=state.examples_seen + 1,
            filtered=state.filtered + 1,
            features_evaluated=state.features_evaluated + outcome.step,
            features_available=state.features_available + example.n_features,
            gated_examples=state.gated_examples + 1,
            gated_features=state.gated_features + outcome.step,
        )
        return state, outcome
    return _complete(state, example, outcome.margin, config.theta, outcome.terms, True), outcome


def attentive_train_step(state: TrainState, example: LabeledExample, config: FilterConfig) -> TrainState:
    """Perceptron step whose margin evaluation may stop early.

    Before warmup completes, or with the filter disabled, this is the
    baseline step. Afterwards the partial margin is scanned against the
    current stopping threshold; a filtered example costs only the terms
    scanned and leaves both the model and the margin moments untouched.
    """
    return attentive_step(state, example, config)[0]


def predict(
    model: LinearModel,
    example: LabeledExample,
    config: FilterConfig,
    moments: Optional[MarginMoments] = None,
) -> tuple[int, int]:
    """Predicted label and number of features evaluated.

    The label is unknown here, so the scan runs over the unsigned score
    ``w_j x_j`` with a two-sided rule: stop with +1 once the partial score
    exceeds ``tau``, with -1 once it drops below ``-tau``, where ``tau`` comes
    from ``moments`` of the score at ``theta = 0``. Full evaluation breaks
    ties toward +1.
    """
    _check_fits(model, example)
    n = example.n_features
    if not config.enabled or moments is None or moments.count < max(config.warmup, 2) or n == 1:
        s = full_margin(model, example.with_label(1))
        return (1 if s >= 0.0 else -1), n
    mean, std = moments_mean_std(moments, config.min_std)
    tau = stopping_threshold(0.0, mean, std, config.prediction_delta).tau
    order = evaluation_order(example, model, config.order, config.seed, example.id)
    idx = example.indices[order]
    val = example.values[order]
    terms = model.weights[idx] * val
    up = scan_terms(terms, tau, config.stride)
    down = scan_terms(-terms, tau, config.stride)
    steps = [o.step for o in (up, down) if isinstance(o, Filtered)]
    if not steps:
        return (1 if up.margin >= 0.0 else -1), n
    k = min(steps)
    if isinstance(up, Filtered) and up.step == k:
        return 1, k
    return -1, k


def predict_many(model, examples, config, moments=None) -> tuple[np.ndarray, int]:
    labels = np.empty(len(examples), dtype=np.int64)
    used = 0
    for i, ex in enumerate(examples):
        labels[i], k = predict(model, ex, config, moments)
        used += k
    return labels, used


Observer = Callable[[TrainState, LabeledExample, Optional[ScanOutcome]], None]


def train_epoch(
    state: TrainState,
    dataset,
    config: FilterConfig,
    shuffle_seed: Optional[int] = None,
    *,
    baseline: bool = False,
    epoch: int = 0,
    observer: Optional[Observer] = None,
) -> tuple[TrainState, EpochReport]:
    """One pass over ``dataset`` with the baseline or attentive step.

    ``observer(state_before, example, outcome)`` is called for every example;
    ``outcome`` is ``None`` for fully evaluated examples outside the filter.
    If it returns a truthy value for a filtered example, that example counts
    as a decision error in the report.
    """
    from .data import shuffle as _shuffle

    examples: Sequence[LabeledExample] = getattr(dataset, "examples", dataset)
    if len(examples) == 0:
        raise ContractError("cannot train on an empty dataset")
    if shuffle_seed is not None:
        examples = _shuffle(examples, shuffle_seed)
    start = state
    decision_errors = 0
    for ex in examples:
        before = state
        if baseline:
            state, outcome = baseline_train_step(state, ex, config.theta), None
        else:
            state, outcome = attentive_step(state, ex, config)
        if observer is not None:
            flagged = observer(before, ex, outcome)
            if flagged and isinstance(outcome, Filtered):
                decision_errors += 1
    report = EpochReport(
        epoch=epoch,
        examples=state.examples_seen - start.examples_seen,
        updates=state.updates - start.updates,
        filtered=state.filtered - start.filtered,
        decision_errors=decision_errors,
        features_evaluated=state.features_evaluated - start.features_evaluated,
        features_available=state.features_available - start.features_available,
        train_mistakes=state.mistakes - start.mistakes,
    )
    return state, report
