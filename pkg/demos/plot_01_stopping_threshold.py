"""
The stopping threshold on random walks
======================================

A margin is a sum of per-feature terms. If the partial sum after a few
terms is already high, the full sum is unlikely to end below the update
threshold, so evaluation can stop. This script computes the constant
stopping level for a few error rates and checks it on symmetric +/-1
random walks, where the true mean and spread are known.
"""

import math

import numpy as np

from attentive_perceptron import inverse_normal_cdf, stopping_threshold
from attentive_perceptron.bench import run_reflection_mc

# quantiles used by the threshold
for p in (0.5, 0.9, 0.95, 0.975, 0.999):
    print(f"Phi^-1({p}) = {inverse_normal_cdf(p): .6f}")

# 20-step walks: mean 0, std sqrt(20)
n = 20
for delta in (0.2, 0.1, 0.05, 0.01):
    t = stopping_threshold(0.0, 0.0, math.sqrt(n), delta)
    print(f"delta={delta:<5} tau={t.tau:.3f}")

###############################################################################
# Monte Carlo: fraction of walks that cross tau before the last step and
# still end below zero. It should stay under delta.

for delta in (0.2, 0.1, 0.05, 0.01):
    r = run_reflection_mc(n, 200_000, delta, theta=0.0, seed=1)
    print(
        f"delta={delta:<5} filtered={r['filtered_fraction']:.3f} "
        f"error={r['empirical_error']:.4f} +- {r['mc_stderr']:.4f}"
    )

###############################################################################
# Longer walks behave the same way; the threshold scales with sqrt(n).

for n in (10, 50, 200):
    r = run_reflection_mc(n, 100_000, 0.1, seed=2)
    print(f"n={n:<4} tau={r['tau']:.2f} error={r['empirical_error']:.4f}")

print("tau / sqrt(n):", np.round([run_reflection_mc(k, 1000, 0.1)["tau"] / math.sqrt(k)
                                  for k in (10, 50, 200)], 4))
