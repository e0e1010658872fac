"""Risk-reduction feature importance and its weight-normalized variant.

A feature's raw importance is the sum of the recorded risk reductions over
all nodes splitting on it, averaged across the trees of a forest.  The
normalized variant divides each node's contribution by the total example
weight present at that node before summing, so small deep nodes weigh in
as much as large shallow ones.  Nodes whose recorded reduction is the
``+inf`` sentinel are excluded from both sums.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ConfigError
from .forest import predict_forest, train_forest
from .metrics import evaluate
from .tree import Internal


@dataclass
class ImportanceReport:
    """Per-feature importances averaged over the trees of one forest."""

    raw: np.ndarray
    normalized: np.ndarray
    n_trees: int


def tree_importances(tree, weight_pos, weight_unl, n_features):
    """(raw, normalized) importance arrays contributed by a single tree."""
    raw = np.zeros(n_features)
    normalized = np.zeros(n_features)
    stack = [tree]
    while stack:
        node = stack.pop()
        if not isinstance(node, Internal):
            continue
        if math.isfinite(node.reduction):
            raw[node.feature] += node.reduction
            node_mass = node.count_pos * weight_pos + node.count_unl * weight_unl
            normalized[node.feature] += node.reduction / node_mass
        stack.append(node.left)
        stack.append(node.right)
    return raw, normalized


def _collect(model):
    weight_pos, weight_unl = model.group_weights()
    raw = np.zeros(model.feature_dim)
    normalized = np.zeros(model.feature_dim)
    for tree in model.trees:
        tree_raw, tree_norm = tree_importances(
            tree, weight_pos, weight_unl, model.feature_dim
        )
        raw += tree_raw
        normalized += tree_norm
    n = len(model.trees)
    return ImportanceReport(raw / n, normalized / n, n)


def risk_reduction_importance(model):
    """Tree-averaged total risk reduction per feature.

    A feature never used in any split scores exactly 0.
    """
    return _collect(model)


def normalized_importance(model):
    """Tree-averaged weight-normalized risk reduction per feature."""
    return _collect(model)


def write_importance_csv(report, handle):
    """Write ``feature,raw,normalized`` rows to an open text handle."""
    handle.write("feature,raw,normalized\n")
    for feature in range(len(report.raw)):
        handle.write(
            "%d,%s,%s\n"
            % (
                feature,
                format(report.raw[feature], ".17g"),
                format(report.normalized[feature], ".17g"),
            )
        )


def write_importance_pgm(values, width, height, path):
    """Render a length-``width*height`` importance vector as a PGM image.

    Values are min-max scaled to the 0..255 gray range (a constant vector
    renders black) and written in the ASCII ``P2`` format, row-major.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (width * height,):
        raise ConfigError(
            "grid %dx%d needs %d values, got %d"
            % (width, height, width * height, values.size)
        )
    lo = values.min()
    hi = values.max()
    if hi > lo:
        gray = np.rint((values - lo) / (hi - lo) * 255.0).astype(np.int64)
    else:
        gray = np.zeros(values.size, dtype=np.int64)
    grid = gray.reshape(height, width)
    with open(path, "w", newline="\n") as handle:
        handle.write("P2\n%d %d\n255\n" % (width, height))
        for row in grid:
            handle.write(" ".join(str(v) for v in row) + "\n")


def feature_curve(x_pos, x_other, x_test, y_test, config, report, k_list,
                  replications=5):
    """Mean test accuracy when retraining on the top-k features.

    For each ``k`` in ``k_list``, keeps the ``k`` features with the highest
    raw importance (ties to the lower index), retrains ``replications``
    forests with fresh seeds derived from ``config.seed``, and reports the
    mean accuracy on the test set.

    Returns
    -------
    list of (k, mean_accuracy) pairs, in the order of ``k_list``.
    """
    if not k_list:
        raise ConfigError("k_list must name at least one feature count")
    x_pos = np.asarray(x_pos, dtype=np.float64)
    x_other = np.asarray(x_other, dtype=np.float64)
    x_test = np.asarray(x_test, dtype=np.float64)
    n_features = x_pos.shape[1]
    for k in k_list:
        if not 1 <= k <= n_features:
            raise ConfigError("k=%d is out of range 1..%d" % (k, n_features))
    ranking = np.argsort(-report.raw, kind="stable")
    out = []
    for k in k_list:
        columns = np.sort(ranking[:k])
        accuracies = []
        for rep in range(replications):
            rep_config = replace(config, seed=config.seed + 1 + rep)
            model = train_forest(x_pos[:, columns], x_other[:, columns], rep_config)
            predictions = predict_forest(model, x_test[:, columns])
            accuracies.append(evaluate(predictions, y_test).accuracy)
        out.append((k, float(np.mean(accuracies))))
    return out
