"""Domain types shared across the package: examples, models, margins, configuration."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

BIAS_INDEX = 0


class DimensionMismatchError(ValueError):
    """A feature index or position does not fit the model or example."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of an operation."""


class ContractError(ValueError):
    """A caller broke an operation's precondition."""


def _frozen_array(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LabeledExample:
    """Sparse example with a +1/-1 label.

    ``indices`` and ``values`` are parallel arrays with strictly increasing
    indices. Ingestion paths (:func:`make_example`, the file parser, the
    synthetic generators) insert the bias feature at index 0 with value 1.0.
    """

    indices: np.ndarray
    values: np.ndarray
    label: int
    id: int = 0

    def __post_init__(self):
        idx = _frozen_array(self.indices, np.int64)
        val = _frozen_array(self.values, np.float64)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)
        if idx.shape != val.shape:
            raise ContractError("indices and values must have the same length")
        if idx.size == 0:
            raise ContractError("an example needs at least one stored feature")
        if idx[0] < 0:
            raise ContractError("feature indices must be nonnegative")
        if idx.size > 1 and not np.all(np.diff(idx) > 0):
            raise ContractError("feature indices must be strictly increasing")
        if not np.all(np.isfinite(val)):
            raise ContractError("feature values must be finite")
        if self.label not in (-1, 1):
            raise ContractError(f"label must be -1 or +1, got {self.label!r}")
        if self.id < 0:
            raise ContractError("example id must be nonnegative")
        object.__setattr__(self, "label", int(self.label))
        object.__setattr__(self, "id", int(self.id))

    @property
    def n_features(self) -> int:
        return int(self.indices.size)

    @property
    def max_index(self) -> int:
        return int(self.indices[-1])

    def with_label(self, label: int) -> "LabeledExample":
        return LabeledExample(self.indices, self.values, label, self.id)

    def __eq__(self, other):
        if not isinstance(other, LabeledExample):
            return NotImplemented
        return (
            self.label == other.label
            and self.id == other.id
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.label, self.id, self.indices.tobytes(), self.values.tobytes()))


def make_example(
    features: Iterable[tuple[int, float]], label: int, id: int = 0, bias: float = 1.0
) -> LabeledExample:
    """Build an example from ``(index, value)`` pairs with indices >= 1, prepending the bias."""
    pairs = list(features)
    idx = [BIAS_INDEX] + [int(i) for i, _ in pairs]
    val = [bias] + [float(v) for _, v in pairs]
    if any(i == BIAS_INDEX for i, _ in pairs):
        raise ContractError("index 0 is reserved for the bias feature")
    return LabeledExample(np.asarray(idx), np.asarray(val), label, id)


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Dense weight vector; the bias weight lives at index 0."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen_array(self.weights, np.float64)
        if w.size == 0:
            raise ContractError("model dimension must be positive")
        if not np.all(np.isfinite(w)):
            raise DomainError("model weights must be finite")
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, dimension: int) -> "LinearModel":
        return cls(np.zeros(int(dimension)))

    @property
    def dimension(self) -> int:
        return int(self.weights.size)

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash(self.weights.tobytes())


@dataclass(frozen=True)
class MarginTerm:
    value: float


@dataclass(frozen=True)
class PartialScanState:
    partial_sum: float
    steps_taken: int
    total_terms: int

    def __post_init__(self):
        if self.total_terms < 1 or not 0 <= self.steps_taken <= self.total_terms:
            raise ContractError("need 0 <= steps_taken <= total_terms and total_terms >= 1")


class Order(str, enum.Enum):
    NATURAL = "natural"
    SHUFFLE = "shuffle"
    WEIGHT_MAGNITUDE = "wmag"


@dataclass(frozen=True)
class FilterConfig:
    """Knobs of the attentive filter.

    ``predict_delta`` is the error rate used by prediction-time filtering;
    ``None`` reuses ``delta``.
    """

    delta: float = 0.1
    theta: float = 0.0
    stride: int = 1
    warmup: int = 100
    decay: float = 0.99
    min_std: float = 1e-9
    order: Order = Order.SHUFFLE
    seed: int = 0
    enabled: bool = True
    predict_delta: Union[float, None] = None

    def __post_init__(self):
        object.__setattr__(self, "order", Order(self.order))
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta}")
        if self.predict_delta is not None and not 0.0 < self.predict_delta < 1.0:
            raise DomainError(f"predict_delta must lie in (0, 1), got {self.predict_delta}")
        if not 0.0 < self.decay < 1.0:
            raise DomainError(f"decay must lie in (0, 1), got {self.decay}")
        if not self.min_std > 0.0:
            raise DomainError("min_std must be positive")
        if not np.isfinite(self.theta):
            raise DomainError("theta must be finite")
        if int(self.stride) < 1:
            raise DomainError("stride must be >= 1")
        if int(self.warmup) < 0:
            raise DomainError("warmup must be >= 0")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def prediction_delta(self) -> float:
        return self.delta if self.predict_delta is None else self.predict_delta


@dataclass(frozen=True)
class Filtered:
    step: int
    partial_sum: float
    tau: float


@dataclass(frozen=True)
class Completed:
    margin: float
    terms: int


ScanOutcome = Union[Filtered, Completed]


# ---------------------------------------------------------------------------
# margins


def _check_fits(model: LinearModel, example: LabeledExample) -> None:
    if example.max_index >= model.dimension:
        raise DimensionMismatchError(
            f"feature index {example.max_index} does not fit model of dimension {model.dimension}"
        )


def margin_term(model: LinearModel, example: LabeledExample, position: int) -> MarginTerm:
    """Contribution ``label * w[index] * value`` of the feature stored at ``position``."""
    if not 0 <= position < example.n_features:
        raise DimensionMismatchError(
            f"position {position} out of range for {example.n_features} stored features"
        )
    j = int(example.indices[position])
    if j >= model.dimension:
        raise DimensionMismatchError(f"feature index {j} >= model dimension {model.dimension}")
    return MarginTerm(float(example.label * model.weights[j] * example.values[position]))


def margin_terms(model: LinearModel, example: LabeledExample) -> np.ndarray:
    """All margin terms in stored (natural index) order."""
    _check_fits(model, example)
    return example.label * model.weights[example.indices] * example.values


def sequential_sum(terms: np.ndarray) -> float:
    # np.sum is pairwise; cumsum accumulates strictly left to right.
    return float(np.cumsum(terms)[-1])


def full_margin(model: LinearModel, example: LabeledExample) -> float:
    """``y * (w . x)`` accumulated left to right in natural index order."""
    return sequential_sum(margin_terms(model, example))
