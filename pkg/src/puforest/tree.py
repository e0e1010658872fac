"""Single decision tree: recursive construction, termination criteria,
prediction routing and per-node risk-reduction bookkeeping."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import ConfigError, DataError, InternalError
from .splitter import NodeView, _column_span, find_split


@dataclass(frozen=True)
class StoppingRule:
    """When to stop splitting: depth cap (``None`` = unlimited), minimum
    node size on the total example count, and the purity check."""

    max_depth: Optional[int] = None
    min_node_size: int = 1
    purity_check: bool = True

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError("max_depth must be nonnegative or None")
        if self.min_node_size < 1:
            raise ConfigError("min_node_size must be at least 1")


@dataclass(frozen=True)
class Leaf:
    """Terminal node: a {-1, +1} prediction plus the node statistics."""

    prediction: int
    stats: object


@dataclass
class Internal:
    """Split node.  ``reduction`` keeps ``+inf`` as an explicit sentinel
    (such nodes are excluded from importance sums); the group counts are
    retained so normalized importances survive serialization."""

    feature: int
    threshold: float
    reduction: float
    count_pos: int
    count_unl: int
    left: object = None
    right: object = None


def _cheap_terminate(count_a, count_b, depth, rule, engine, node_risk):
    if rule.max_depth is not None and depth >= rule.max_depth:
        return True
    if count_a + count_b < rule.min_node_size:
        return True
    return rule.purity_check and engine.is_pure(node_risk)


def should_terminate(view, depth, rule, engine):
    """Whether the node must become a leaf before any split search.

    True when the depth cap is reached, the node is smaller than the
    minimum size, the node is pure (optimal risk ``-inf`` under the
    unbiased estimator, exactly 0 otherwise), or every feature is constant
    across the node's examples.
    """
    if view.n_pos + view.n_unl < 1:
        raise InternalError("termination test on an empty node")
    if _cheap_terminate(view.n_pos, view.n_unl, depth, rule, engine,
                        engine.risk(view.n_pos, view.n_unl)):
        return True
    for feature in range(view.n_features):
        lo, hi = _column_span(*view.column(feature))
        if lo < hi:
            return False
    return True


def _make_leaf(engine, count_a, count_b):
    return Leaf(engine.prediction(count_a, count_b), engine.stats(count_a, count_b))


def _partition(matrix, index, lo, hi, feature, threshold):
    # Stable in-place reorder of index[lo:hi]: rows with value <= threshold
    # first.  Returns the boundary position.
    sub = index[lo:hi]
    mask = matrix[sub, feature] <= threshold
    left = sub[mask]
    right = sub[~mask]
    index[lo:lo + len(left)] = left
    index[lo + len(left):hi] = right
    return lo + len(left)


def build_tree(x_pos, x_unl, engine, splitter_config, stopping, rng):
    """Grow one decision tree on the given group matrices.

    Parameters
    ----------
    x_pos : ndarray of shape (n_pos, d)
        Labeled positives.
    x_unl : ndarray of shape (n_unl, d)
        Unlabeled examples, or labeled negatives in fully labeled mode.
    engine : RiskEngine
        Estimator/loss/weights bundle used for risks and leaf predictions.
    splitter_config : SplitterConfig
    stopping : StoppingRule
    rng : numpy Generator
        Consumed in depth-first order, left child first.

    Returns
    -------
    Leaf or Internal
        The tree root.  Construction always succeeds on nonempty input: a
        node with no usable split becomes a leaf.
    """
    x_pos = np.ascontiguousarray(x_pos, dtype=np.float64)
    x_unl = np.ascontiguousarray(x_unl, dtype=np.float64)
    if x_pos.ndim != 2 or x_unl.ndim != 2:
        raise DataError("training groups must be 2-D matrices")
    if x_pos.shape[1] != x_unl.shape[1]:
        raise DataError("training groups disagree on the feature dimension")
    if len(x_pos) + len(x_unl) < 1:
        raise DataError("cannot grow a tree on empty data")

    idx_pos = np.arange(len(x_pos))
    idx_unl = np.arange(len(x_unl))
    root = None
    # Frames: (p_lo, p_hi, u_lo, u_hi, depth, parent, is_right_child).
    # Pushing the right child first makes the left subtree build first, so
    # rng consumption follows depth-first pre-order.
    stack = [(0, len(x_pos), 0, len(x_unl), 0, None, False)]
    while stack:
        p_lo, p_hi, u_lo, u_hi, depth, parent, is_right = stack.pop()
        count_a = p_hi - p_lo
        count_b = u_hi - u_lo
        node_risk = engine.risk(count_a, count_b)
        node = None
        if _cheap_terminate(count_a, count_b, depth, stopping, engine, node_risk):
            node = _make_leaf(engine, count_a, count_b)
        else:
            view = NodeView(x_pos, x_unl, idx_pos[p_lo:p_hi], idx_unl[u_lo:u_hi])
            cand = find_split(view, splitter_config, engine, rng, parent_risk=node_risk)
            if cand is None:
                node = _make_leaf(engine, count_a, count_b)
            else:
                node = Internal(cand.feature, cand.threshold, cand.reduction,
                                count_a, count_b)
                p_mid = _partition(x_pos, idx_pos, p_lo, p_hi, cand.feature, cand.threshold)
                u_mid = _partition(x_unl, idx_unl, u_lo, u_hi, cand.feature, cand.threshold)
                if p_mid - p_lo + u_mid - u_lo < 1 or p_hi - p_mid + u_hi - u_mid < 1:
                    raise InternalError("split produced an empty child")
                stack.append((p_mid, p_hi, u_mid, u_hi, depth + 1, node, True))
                stack.append((p_lo, p_mid, u_lo, u_mid, depth + 1, node, False))
        if parent is None:
            root = node
        elif is_right:
            parent.right = node
        else:
            parent.left = node
    return root


def predict_tree(tree, x):
    """Route one feature vector to a leaf and return its {-1, +1} label.

    Boundary values go left: the child test is ``feature <= threshold``.
    """
    x = np.asarray(x, dtype=np.float64)
    node = tree
    while isinstance(node, Internal):
        if node.feature >= x.shape[-1]:
            raise DataError(
                "query vector has %d features but the tree tests feature %d"
                % (x.shape[-1], node.feature)
            )
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.prediction


def predict_matrix(tree, x):
    """Vectorized routing of a query matrix; returns one label per row."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(len(x), dtype=np.int64)
    stack = [(tree, np.arange(len(x)))]
    while stack:
        node, rows = stack.pop()
        if rows.size == 0:
            continue
        if isinstance(node, Leaf):
            out[rows] = node.prediction
            continue
        mask = x[rows, node.feature] <= node.threshold
        stack.append((node.left, rows[mask]))
        stack.append((node.right, rows[~mask]))
    return out


def tree_depth(tree):
    """Depth of the tree; a lone leaf has depth 0."""
    best = 0
    stack = [(tree, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Leaf):
            best = max(best, depth)
        else:
            stack.append((node.left, depth + 1))
            stack.append((node.right, depth + 1))
    return best


def tree_counts(tree):
    """(internal node count, leaf count) of the tree."""
    internal = leaves = 0
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            leaves += 1
        else:
            internal += 1
            stack.append(node.left)
            stack.append(node.right)
    return internal, leaves
