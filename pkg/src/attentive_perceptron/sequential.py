"""Constant stopping threshold and the early-stopping partial-margin scan."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stats import inverse_normal_cdf
from .types import (
    BIAS_INDEX,
    Completed,
    ContractError,
    DomainError,
    Filtered,
    LabeledExample,
    LinearModel,
    Order,
    ScanOutcome,
    _check_fits,
)


@dataclass(frozen=True)
class StoppingThreshold:
    tau: float
    theta: float
    delta: float
    mean_used: float
    std_used: float
    quantile: float


def stopping_threshold(theta: float, mean: float, std: float, delta: float) -> StoppingThreshold:
    """Level ``tau`` a partial margin has to exceed for the example to be filtered.

    With margin mean ``mean`` and standard deviation ``std``,
    ``tau = (theta - mean + std * Phi^{-1}(1 - delta)) / 2`` keeps the chance of
    stopping on an example whose full margin ends below ``theta`` near ``delta``.
    """
    if not std > 0.0 or not math.isfinite(std):
        raise DomainError(f"std must be positive and finite, got {std!r}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    q = inverse_normal_cdf(1.0 - delta)
    tau = 0.5 * (theta - mean + std * q)
    return StoppingThreshold(tau, theta, delta, mean, std, q)


def scan_terms(
    terms, tau: float, stride: int = 1, filtering_enabled: bool = True, block: int = 16
) -> ScanOutcome:
    """Accumulate ``terms`` left to right, stopping at the first checkpoint above ``tau``.

    ``terms`` is either an array or a ``(n, fetch)`` pair where
    ``fetch(start, stop)`` evaluates terms lazily. Terms are consumed in
    geometrically growing blocks, so a filtered example only pays for about
    twice the terms it needed. Prefix sums stay bit-identical to a plain
    left-to-right loop because each block's cumsum starts from the carried
    partial sum.
    """
    if stride < 1:
        raise ContractError("stride must be >= 1")
    if isinstance(terms, tuple):
        n, fetch = terms
    else:
        arr = np.asarray(terms, dtype=np.float64)
        n = arr.size
        fetch = lambda a, b: arr[a:b]  # noqa: E731
    if n == 0:
        raise ContractError("cannot scan an empty term list")
    if not filtering_enabled or n == 1:
        return Completed(float(np.cumsum(fetch(0, n))[-1]), n)
    carry = None
    start = 0
    while start < n:
        stop = min(n, start + block)
        chunk = fetch(start, stop)
        if carry is None:
            prefix = np.cumsum(chunk)
        else:
            prefix = np.cumsum(np.concatenate(([carry], chunk)))[1:]
        # checkpoints k with start < k <= stop and k < n
        first = (start // stride + 1) * stride
        last = min(stop, n - 1)
        if first <= last:
            ks = np.arange(first, last + 1, stride)
            hits = np.flatnonzero(prefix[ks - start - 1] > tau)
            if hits.size:
                k = int(ks[hits[0]])
                return Filtered(k, float(prefix[k - start - 1]), float(tau))
        carry = prefix[-1]
        start = stop
        block *= 2
    return Completed(float(carry), n)


def evaluation_order(
    example: LabeledExample,
    model: LinearModel,
    policy: Order | str = Order.SHUFFLE,
    seed: int = 0,
    example_id: int | None = None,
) -> np.ndarray:
    """Permutation of stored-feature positions that fixes the scan order.

    ``shuffle`` keys a Philox counter-based generator on ``(seed, example_id)``
    so the permutation depends on nothing else. ``wmag`` pins the bias first
    and sorts the rest by descending ``|w|``, ties by ascending index.
    """
    policy = Order(policy)
    n = example.n_features
    if policy is Order.NATURAL:
        return np.arange(n)
    if policy is Order.SHUFFLE:
        eid = example.id if example_id is None else example_id
        key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, int(eid)], dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        return rng.permutation(n)
    _check_fits(model, example)
    mags = np.abs(model.weights[example.indices])
    order = np.lexsort((example.indices, -mags))
    if example.indices[0] == BIAS_INDEX:
        order = np.concatenate(([0], order[order != 0]))
    return order


def partial_margin_scan(
    model: LinearModel,
    example: LabeledExample,
    threshold: StoppingThreshold | float,
    order: np.ndarray | None = None,
    stride: int = 1,
    filtering_enabled: bool = True,
) -> ScanOutcome:
    """Scan the example's margin terms in ``order`` with first-crossing stopping.

    A checkpoint follows every ``stride``-th term but never the final one.
    The example is filtered at the first checkpoint whose partial sum is
    strictly greater than ``tau``; otherwise the exact full margin is returned.
    """
    _check_fits(model, example)
    n = example.n_features
    tau = threshold.tau if isinstance(threshold, StoppingThreshold) else float(threshold)
    if order is None:
        order = np.arange(n)
    else:
        order = np.asarray(order)
        if order.shape != (n,):
            raise ContractError(f"order has length {order.size}, example has {n} features")
        if not np.array_equal(np.sort(order), np.arange(n)):
            raise ContractError("order is not a permutation of the stored positions")
    return _scan(model, example, tau, order, stride, filtering_enabled)


def _scan(model, example, tau, order, stride, filtering_enabled) -> ScanOutcome:
    # no argument validation: callers pass orders from evaluation_order
    idx = example.indices[order]
    val = example.values[order]
    w = model.weights
    y = example.label

    def fetch(a, b):
        return y * w[idx[a:b]] * val[a:b]

    return scan_terms((idx.size, fetch), tau, stride, filtering_enabled)
