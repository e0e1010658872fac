"""Closed-form optimal risks versus brute numeric minimization.

A node that predicts one constant score contributes a simple 1-D function
of that score to the empirical risk.  This demo evaluates the package's
closed-form minima for fully labeled counts and for PU weight masses, and
checks them against a plain grid search over scores.
"""

import numpy as np

from puforest import (
    ExampleWeights,
    PnNodeCounts,
    loss_value,
    node_stats,
    optimal_partial_risk,
    pn_optimal_partial_risk,
)

print("pointwise losses at v=0.5, y=+1:")
for loss in ("quadratic", "logistic", "sigmoid", "savage"):
    print("  %-9s %.6f" % (loss, loss_value(loss, 0.5, 1)))

# --- fully labeled node: 3 positives, 5 negatives, per-example weight 1/8
counts = PnNodeCounts(n_pos=3, n_neg=5, w=1 / 8)
grid = np.linspace(-15, 15, 600001)


def pn_risk_at(loss, v):
    return counts.w * (
        counts.n_pos * np.array([loss_value(loss, vi, 1) for vi in np.atleast_1d(v)])
        + counts.n_neg * np.array([loss_value(loss, vi, -1) for vi in np.atleast_1d(v)])
    )


print("\nfully labeled node (3 pos, 5 neg, w=1/8):")
for loss in ("quadratic", "logistic", "sigmoid", "savage"):
    closed = pn_optimal_partial_risk(loss, counts)
    brute = min(
        counts.w * (counts.n_pos * loss_value(loss, v, 1)
                    + counts.n_neg * loss_value(loss, v, -1))
        for v in np.linspace(-15, 15, 30001)
    )
    print("  %-9s closed %.8f   grid %.8f" % (loss, closed, brute))

# --- PU node: the implied negative mass can be negative, and the optimal
# unbiased risk can then be -inf (that node is "pure" and splitting stops)
weights = ExampleWeights.from_sizes(prior=0.5, n_pos=4, n_unl=8)
print("\nPU nodes with w+ = %.3f, w_u = %.3f:" % (weights.pos_weight, weights.unl_weight))
for count_pos, count_unl in ((2, 6), (2, 2), (3, 0)):
    stats = node_stats(count_pos, count_unl, weights)
    upu = optimal_partial_risk("upu", "quadratic", stats)
    nnpu = optimal_partial_risk("nnpu", "quadratic", stats)
    print("  %d pos, %d unl: fraction %-6s  uPU %-8s  nnPU %.6f"
          % (count_pos, count_unl,
             "%.3f" % stats.pos_fraction if np.isfinite(stats.pos_fraction) else "inf",
             "%.6f" % upu if np.isfinite(upu) else "-inf", nnpu))
