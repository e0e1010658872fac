"""Growing one PU decision tree on a 1-D toy dataset.

Positives sit at x in {2, 3}; the unlabeled pool holds copies at the same
spots plus clearly-negative points at {8, 9}.  The best split isolates the
positive region, and the nonnegative risk estimator marks both children
pure, so the tree is a single stump.
"""

import numpy as np

from puforest import (
    ExampleWeights,
    Internal,
    Leaf,
    RiskEngine,
    SplitterConfig,
    StoppingRule,
    build_tree,
    predict_tree,
)

x_pos = np.array([[2.0], [3.0]])
x_unl = np.array([[2.0], [3.0], [8.0], [9.0]])

engine = RiskEngine("nnpu", "quadratic",
                    weights=ExampleWeights.from_sizes(0.5, len(x_pos), len(x_unl)))
tree = build_tree(x_pos, x_unl, engine, SplitterConfig("exact", 1, 1),
                  StoppingRule(), np.random.default_rng(0))


def show(node, indent=""):
    if isinstance(node, Leaf):
        print("%sleaf: predict %+d  (%d pos, %d unl, fraction %s)"
              % (indent, node.prediction, node.stats.count_pos,
                 node.stats.count_unl, node.stats.pos_fraction))
        return
    print("%ssplit: x[%d] <= %g  (risk reduction %.4f)"
          % (indent, node.feature, node.threshold, node.reduction))
    show(node.left, indent + "  ")
    show(node.right, indent + "  ")


show(tree)

print("\nrouting queries:")
for q in (2.5, 5.5, 7.0):
    print("  x=%.1f -> %+d" % (q, predict_tree(tree, np.array([q]))))

# The same data under the unbiased estimator: a region holding positives
# but no unlabeled mass has risk -inf, so it is pure by definition.
x_unl_far = np.array([[8.0], [9.0]])
engine_upu = RiskEngine("upu", "quadratic",
                        weights=ExampleWeights.from_sizes(0.5, 2, 2))
stump = build_tree(x_pos, x_unl_far, engine_upu, SplitterConfig("exact", 1, 1),
                   StoppingRule(), np.random.default_rng(0))
print("\nunbiased estimator, positives isolated from all unlabeled points:")
show(stump)
print("(the +inf reduction records that a child reached the unbounded branch)")
