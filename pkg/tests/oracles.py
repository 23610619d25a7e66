"""Independent reference implementations used only by the tests.

Nothing here calls into the package's numeric paths except where noted
(evaluation order, threshold and moments are checked separately).
"""

import math

import mpmath

mpmath.mp.dps = 40


def series_normal_cdf(z):
    """Phi(z) from the Maclaurin series of erf, summed in 40-digit arithmetic."""
    x = mpmath.mpf(z) / mpmath.sqrt(2)
    term = x
    total = x
    n = 0
    x2 = x * x
    while True:
        n += 1
        term = -term * x2 / n
        add = term / (2 * n + 1)
        total += add
        if abs(add) < mpmath.mpf(10) ** -35 and n > 5:
            break
    erf = 2 / mpmath.sqrt(mpmath.pi) * total
    return (1 + erf) / 2


def bisection_quantile(p, tol=1e-13):
    lo, hi = -12.0, 12.0
    p = mpmath.mpf(p)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if series_normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def naive_margin(weights, indices, values, label):
    s = 0.0
    for j, v in zip(indices, values):
        s = s + label * float(weights[j]) * float(v)
    return s


def prefix_scan(terms, tau, stride=1):
    """Checks every prefix in a plain loop. Returns ('filtered', step, S) or ('completed', S, n)."""
    s = 0.0
    n = len(terms)
    for i, t in enumerate(terms, start=1):
        s = s + float(t)
        if i < n and i % stride == 0 and s > tau:
            return ("filtered", i, s)
    return ("completed", s, n)


def naive_attentive_run(examples, dimension, config, threshold_fn, moments_fn, order_fn,
                        moments0):
    """Loop-level attentive Perceptron for one pass, with full bookkeeping.

    ``threshold_fn``, ``moments_fn`` and ``order_fn`` are injected so that the
    scan, update and counters here stay independent of the package.
    """
    w = [0.0] * dimension
    moments = moments0
    evaluated = 0
    filtered = 0
    decision_errors = 0
    updates = 0
    for ex in examples:
        idx = ex.indices.tolist()
        val = ex.values.tolist()
        y = ex.label
        n = len(idx)
        active = config.enabled and moments.count >= max(config.warmup, 2)
        if active:
            mean = moments.mean if moments.count else 0.0
            std = max(math.sqrt(moments.second_moment), config.min_std) if moments.count else config.min_std
            tau = threshold_fn(config.theta, mean, std, config.delta)
            order = order_fn(ex, w)
            terms = [y * w[idx[p]] * val[p] for p in order]
            res = prefix_scan(terms, tau, config.stride)
        else:
            res = ("completed", naive_margin(w, idx, val, y), n)
        if res[0] == "filtered":
            filtered += 1
            evaluated += res[1]
            if naive_margin(w, idx, val, y) <= config.theta:
                decision_errors += 1
            continue
        margin = res[1]
        evaluated += n
        if margin <= config.theta:
            updates += 1
            for j, v in zip(idx, val):
                w[j] = w[j] + y * v
        moments = moments_fn(moments, margin)
    return dict(weights=w, evaluated=evaluated, filtered=filtered,
                decision_errors=decision_errors, updates=updates)
