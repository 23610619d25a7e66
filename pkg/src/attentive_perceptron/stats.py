"""Standard normal quantile and streaming estimates of margin mean/std."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .types import DomainError

# Acklam's rational approximation, |relative error| < 1.15e-9 before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    if p > 1.0 - _P_LOW:
        return -_acklam(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
        ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    )


def _lower_quantile(p: float) -> float:
    """Quantile for p <= 0.5, where the lower tail CDF is well conditioned."""
    z = _acklam(p)
    # Halley refinement against the erfc-based CDF; two steps is plenty from ~1e-9.
    for _ in range(2):
        err = normal_cdf(z) - p
        pdf = math.exp(-0.5 * z * z) / _SQRT2PI
        if pdf == 0.0:
            break
        u = err / pdf
        z = z - u / (1.0 + 0.5 * z * u)
    return z


def inverse_normal_cdf(p: float) -> float:
    """Standard normal quantile function Phi^{-1}(p).

    Raises
    ------
    DomainError
        If ``p`` is NaN or outside the open interval (0, 1).
    """
    p = float(p)
    if not 0.0 < p < 1.0:  # also rejects NaN
        raise DomainError(f"inverse_normal_cdf needs 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


@dataclass(frozen=True)
class MarginMoments:
    """Streaming mean/variance of fully evaluated margins.

    Exact Welford updates run while ``count < warmup`` (sample variance);
    afterwards an exponential moving average with weight ``decay`` on the
    past takes over. ``m2`` is the Welford sum of squared deviations and is
    only meaningful during the exact phase.
    """

    mean: float = 0.0
    second_moment: float = 0.0
    count: int = 0
    decay: float = 0.99
    warmup: int = 100
    m2: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.decay < 1.0:
            raise DomainError(f"decay must lie in (0, 1), got {self.decay}")
        if self.warmup < 0:
            raise DomainError("warmup must be >= 0")

    def std(self, min_std: float = 1e-9) -> float:
        return moments_mean_std(self, min_std)[1]


def moments_update(m: MarginMoments, observed_margin: float) -> MarginMoments:
    x = float(observed_margin)
    if not math.isfinite(x):
        raise DomainError(f"observed margin must be finite, got {x!r}")
    count = m.count + 1
    # The first observation always initializes exactly, even with warmup=0.
    if m.count < max(m.warmup, 1):
        delta = x - m.mean
        mean = m.mean + delta / count
        m2 = m.m2 + delta * (x - mean)
        var = m2 / (count - 1) if count > 1 else 0.0
        return replace(m, mean=mean, second_moment=max(var, 0.0), count=count, m2=m2)
    a = m.decay
    mean = a * m.mean + (1.0 - a) * x
    dev = x - mean
    second = a * m.second_moment + (1.0 - a) * dev * dev
    return replace(m, mean=mean, second_moment=max(second, 0.0), count=count)


def moments_mean_std(m: MarginMoments, min_std: float) -> tuple[float, float]:
    if m.count == 0:
        return 0.0, min_std
    return m.mean, max(math.sqrt(m.second_moment), min_std)
