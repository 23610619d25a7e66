"""
Sweeping the error rate
=======================

Larger permitted error rates lower the stopping level, so fewer features
get evaluated. The sweep table written here is the same one ``attn sweep``
emits as CSV.
"""

import sys

from attentive_perceptron import FilterConfig
from attentive_perceptron.bench import sweep, write_sweep_csv
from attentive_perceptron.data import SynthSpec, generate_synthetic

ds = generate_synthetic(SynthSpec("gaussian-noisy", 12_000, 100, margin=0.5, flip_prob=0.05,
                                  seed=4))
pair = ds.split(10_000)

rows = sweep("delta", [0.01, 0.05, 0.1, 0.2, 0.3], FilterConfig(warmup=200), [pair], seed=1)
for r in rows:
    print(f"delta={r['value']:<5} evaluated={r['attentive_features_evaluated']:>8} "
          f"speedup={r['speedup_ratio']:.2f} realized={r['realized_delta']:.3f} "
          f"acc={r['attentive_test_accuracy']:.4f} (baseline {r['baseline_test_accuracy']:.4f})")

###############################################################################
# Scan order matters: weight-magnitude order puts the informative terms first.

for r in sweep("order", ["natural", "shuffle", "wmag"], FilterConfig(warmup=200), [pair]):
    print(f"order={r['value']:<8} features/example after warmup="
          f"{r['mean_features_post_warmup']:.1f} realized={r['realized_delta']:.3f}")

write_sweep_csv(rows, sys.argv[1] if len(sys.argv) > 1 else "delta_sweep.csv")
