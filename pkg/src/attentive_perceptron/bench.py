"""Paired baseline/attentive experiments, decision-error auditing and sweeps."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Iterable, Sequence

import numpy as np

from .perceptron import TrainState, predict_many, train_epoch
from .sequential import stopping_threshold
from .types import (
    ContractError,
    FilterConfig,
    Filtered,
    LabeledExample,
    LinearModel,
    Order,
    ScanOutcome,
    full_margin,
)

SWEEP_PARAMS = ("delta", "stride", "order", "warmup")

SWEEP_COLUMNS = (
    "dataset",
    "param",
    "value",
    "baseline_updates",
    "attentive_updates",
    "filtered",
    "decision_errors",
    "realized_delta",
    "baseline_features_evaluated",
    "attentive_features_evaluated",
    "features_available",
    "speedup_ratio",
    "mean_features_per_example",
    "mean_features_post_warmup",
    "baseline_test_accuracy",
    "attentive_test_accuracy",
    "attentive_filtered_test_accuracy",
)


def decision_error_oracle(
    model_at_decision: LinearModel, example: LabeledExample, theta: float, outcome: ScanOutcome
) -> bool:
    """True when a filtered example's full margin, under the deciding model, is <= ``theta``."""
    if not isinstance(outcome, Filtered):
        raise ContractError("decision errors are only defined for filtered outcomes")
    return full_margin(model_at_decision, example) <= theta


@dataclass
class RunReport:
    """Everything one training run produced; ``to_dict`` is the JSON payload."""

    variant: str
    config: dict
    epochs: list = field(default_factory=list)
    final: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def config_echo(config: FilterConfig) -> dict:
    d = asdict(config)
    d["order"] = config.order.value
    return d


def _epoch_seed(seed: int, epoch: int) -> list:
    return [int(seed), int(epoch)]


def _accuracy(labels: np.ndarray, test_set) -> float:
    y = np.array([ex.label for ex in test_set.examples])
    return float(np.mean(labels == y))


def run_variant(
    train_set, test_set, config: FilterConfig, epochs: int, seed: int, baseline: bool
) -> tuple[RunReport, TrainState]:
    if len(train_set) == 0 or len(test_set) == 0:
        raise ContractError("train and test sets must be nonempty")
    t0 = time.perf_counter()
    dim = max(train_set.dimension, test_set.dimension)
    state = TrainState.initial(dim, config)

    def audit(before, ex, outcome):
        if isinstance(outcome, Filtered):
            return decision_error_oracle(before.model, ex, config.theta, outcome)
        return False

    report = RunReport("baseline" if baseline else "attentive", config_echo(config))
    totals = dict(decision_errors=0)
    for e in range(epochs):
        state, ep = train_epoch(
            state, train_set, config, _epoch_seed(seed, e),
            baseline=baseline, epoch=e, observer=None if baseline else audit,
        )
        report.epochs.append(asdict(ep))
        totals["decision_errors"] += ep.decision_errors

    full_cfg = replace(config, enabled=False)
    labels, _ = predict_many(state.model, test_set.examples, full_cfg)
    f_labels, used = predict_many(
        state.model, test_set.examples, config if not baseline else full_cfg, state.score_moments
    )
    n_test_features = sum(ex.n_features for ex in test_set.examples)
    filtered = state.filtered
    report.final = {
        "examples_seen": state.examples_seen,
        "updates": state.updates,
        "train_mistakes": state.mistakes,
        "filtered": filtered,
        "decision_errors": totals["decision_errors"],
        "realized_delta": totals["decision_errors"] / filtered if filtered else 0.0,
        "features_evaluated": state.features_evaluated,
        "features_available": state.features_available,
        "speedup_ratio": state.features_available / state.features_evaluated,
        "mean_features_per_example": state.features_evaluated / state.examples_seen,
        "mean_features_post_warmup": (
            state.gated_features / state.gated_examples if state.gated_examples else None
        ),
        "test_accuracy": _accuracy(labels, test_set),
        "filtered_test_accuracy": _accuracy(f_labels, test_set),
        "predict_features_per_example": used / len(test_set),
        "predict_speedup_ratio": n_test_features / used,
        "weights_l2": float(np.linalg.norm(state.model.weights)),
    }
    report.wall_time_ms = (time.perf_counter() - t0) * 1e3
    return report, state


def run_benchmark(
    train_set, test_set, config: FilterConfig, epochs: int = 1, seed: int = 0
) -> tuple[RunReport, RunReport]:
    """Train baseline and attentive Perceptrons on the same example order.

    Every filtered decision of the attentive run is audited against the full
    margin under the model that made it; the audit's feature evaluations are
    not charged to the run.
    """
    base, _ = run_variant(train_set, test_set, config, epochs, seed, baseline=True)
    att, _ = run_variant(train_set, test_set, config, epochs, seed, baseline=False)
    return base, att


def benchmark_document(base: RunReport, att: RunReport, **extra: Any) -> dict:
    doc = {"baseline": base.to_dict(), "attentive": att.to_dict()}
    doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# reflection-principle Monte Carlo


def run_reflection_mc(
    n_steps: int,
    n_walks: int,
    delta: float,
    theta: float = 0.0,
    seed: int = 0,
    filtering: bool = True,
    batch: int = 50_000,
) -> dict:
    """Decision-error rate of the constant threshold on symmetric +/-1 walks.

    The threshold uses the walks' true moments (mean 0, std sqrt(n_steps)).
    A walk errs when some partial sum S_i, i < n_steps, first exceeds ``tau``
    and the final sum ends below ``theta``.
    """
    if n_steps < 2:
        raise ContractError("n_steps must be >= 2")
    if n_walks < 1000:
        raise ContractError("n_walks must be >= 1000")
    thr = stopping_threshold(theta, 0.0, math.sqrt(n_steps), delta)
    rng = np.random.default_rng(seed)
    errors = 0
    stopped = 0
    done = 0
    while done < n_walks:
        m = min(batch, n_walks - done)
        steps = rng.integers(0, 2, size=(m, n_steps), dtype=np.int8) * 2 - 1
        paths = np.cumsum(steps, axis=1, dtype=np.int64)
        if filtering:
            crossed = np.any(paths[:, :-1] > thr.tau, axis=1)
        else:
            crossed = np.zeros(m, dtype=bool)
        errors += int(np.count_nonzero(crossed & (paths[:, -1] < theta)))
        stopped += int(np.count_nonzero(crossed))
        done += m
    p = errors / n_walks
    return {
        "n_steps": n_steps,
        "n_walks": n_walks,
        "delta": delta,
        "theta": theta,
        "seed": seed,
        "tau": thr.tau,
        "mean_used": thr.mean_used,
        "std_used": thr.std_used,
        "quantile": thr.quantile,
        "filtered_fraction": stopped / n_walks,
        "empirical_error": p,
        "mc_stderr": math.sqrt(p * (1.0 - p) / n_walks),
    }


# ---------------------------------------------------------------------------
# sweeps


def _coerce(param: str, value):
    if param == "delta":
        return float(value)
    if param in ("stride", "warmup"):
        return int(value)
    if param == "order":
        return Order(value)
    raise ContractError(f"unknown sweep parameter {param!r}; choose from {SWEEP_PARAMS}")


def _fmt_value(v) -> str:
    return v.value if isinstance(v, Order) else repr(v)


def sweep(
    param: str,
    values: Sequence,
    base_config: FilterConfig,
    datasets: Iterable[tuple],
    epochs: int = 1,
    seed: int = 0,
) -> list[dict]:
    """One paired benchmark per (dataset, value); rows keyed by ``(param, value)``.

    ``datasets`` holds ``(train, test)`` pairs. Every cell uses the same
    ``seed`` so rows differ only in the swept parameter.
    """
    if not values:
        raise ContractError("sweep needs at least one value")
    rows = []
    for train_set, test_set in datasets:
        for raw in values:
            v = _coerce(param, raw)
            cfg = replace(base_config, **{param: v})
            base, att = run_benchmark(train_set, test_set, cfg, epochs, seed)
            b, a = base.final, att.final
            rows.append({
                "dataset": train_set.name,
                "param": param,
                "value": _fmt_value(v),
                "baseline_updates": b["updates"],
                "attentive_updates": a["updates"],
                "filtered": a["filtered"],
                "decision_errors": a["decision_errors"],
                "realized_delta": a["realized_delta"],
                "baseline_features_evaluated": b["features_evaluated"],
                "attentive_features_evaluated": a["features_evaluated"],
                "features_available": a["features_available"],
                "speedup_ratio": a["speedup_ratio"],
                "mean_features_per_example": a["mean_features_per_example"],
                "mean_features_post_warmup": a["mean_features_post_warmup"],
                "baseline_test_accuracy": b["test_accuracy"],
                "attentive_test_accuracy": a["test_accuracy"],
                "attentive_filtered_test_accuracy": a["filtered_test_accuracy"],
            })
    return rows


def write_sweep_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if row[k] is None else row[k]) for k in SWEEP_COLUMNS})
