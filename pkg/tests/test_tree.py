import math

import numpy as np
import pytest

from puforest import (
    ConfigError,
    DataError,
    ExampleWeights,
    Internal,
    Leaf,
    NodeView,
    RiskEngine,
    SplitterConfig,
    StoppingRule,
    build_tree,
    predict_tree,
    should_terminate,
)
from puforest.tree import predict_matrix, tree_counts, tree_depth

from _oracles import assert_tree_matches_reference, build_reference_tree


def toy_data():
    x_pos = np.array([[2.0], [3.0]])
    x_unl = np.array([[2.0], [3.0], [8.0], [9.0]])
    return x_pos, x_unl


def toy_engine(estimator="nnpu", loss="quadratic"):
    return RiskEngine(estimator, loss, weights=ExampleWeights.from_sizes(0.5, 2, 4))


def exact_config(n_features=1):
    return SplitterConfig("exact", n_features, 1)


class TestShouldTerminate:
    def test_pure_nnpu_node(self):
        # all four unlabeled examples sit left of both positives -> a node
        # holding the positives plus matching unlabeled mass has fraction 1
        weights = ExampleWeights.from_sizes(0.5, 2, 4)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        view = NodeView(np.array([[2.0], [3.0]]), np.array([[2.0], [3.0]]))
        assert engine.risk(2, 2) == 0.0
        assert should_terminate(view, 0, StoppingRule(), engine)

    def test_pure_upu_node(self):
        engine = toy_engine("upu")
        view = NodeView(np.array([[2.0], [3.0]]), np.zeros((0, 1)))
        assert engine.risk(2, 0) == -math.inf
        assert should_terminate(view, 0, StoppingRule(), engine)

    def test_depth_cap(self):
        view = NodeView(*toy_data())
        assert should_terminate(view, 3, StoppingRule(max_depth=3), toy_engine())
        assert not should_terminate(view, 2, StoppingRule(max_depth=3), toy_engine())

    def test_min_node_size(self):
        view = NodeView(*toy_data())
        assert should_terminate(view, 0, StoppingRule(min_node_size=7), toy_engine())
        assert not should_terminate(view, 0, StoppingRule(min_node_size=6), toy_engine())

    def test_constant_features(self):
        view = NodeView(np.ones((2, 3)), np.ones((4, 3)))
        engine = toy_engine()
        assert should_terminate(view, 0, StoppingRule(), engine)

    def test_rule_validation(self):
        with pytest.raises(ConfigError):
            StoppingRule(min_node_size=0)
        with pytest.raises(ConfigError):
            StoppingRule(max_depth=-1)


class TestBuildTree:
    def test_toy_tree_structure(self):
        # hand-simulated recursion: root split at 5.5, pure children
        x_pos, x_unl = toy_data()
        rng = np.random.default_rng(0)
        tree = build_tree(x_pos, x_unl, toy_engine(), exact_config(), StoppingRule(), rng)
        assert isinstance(tree, Internal)
        assert tree.feature == 0
        assert tree.threshold == pytest.approx(5.5)
        assert tree.reduction == pytest.approx(1.0, abs=1e-12)
        assert isinstance(tree.left, Leaf) and tree.left.prediction == 1
        assert isinstance(tree.right, Leaf) and tree.right.prediction == -1
        assert tree.left.stats.pos_fraction == pytest.approx(1.0)
        assert tree.right.stats.pos_fraction == 0.0

    def test_pure_positive_node_is_positive_leaf(self):
        # weights make the unlabeled mass equal the positive mass, so the
        # root's estimated positive fraction is exactly 1 (risk 0)
        weights = ExampleWeights.from_sizes(0.5, 2, 4)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        tree = build_tree(np.array([[1.0], [2.0]]), np.array([[1.0], [2.0]]),
                          engine, exact_config(), StoppingRule(), np.random.default_rng(0))
        assert isinstance(tree, Leaf)
        assert tree.prediction == 1

    def test_zero_depth_gives_single_leaf(self):
        x_pos, x_unl = toy_data()
        tree = build_tree(x_pos, x_unl, toy_engine(), exact_config(),
                          StoppingRule(max_depth=0), np.random.default_rng(0))
        assert isinstance(tree, Leaf)

    def test_path_counts_strictly_decrease(self):
        rng = np.random.default_rng(12)
        x_pos = rng.uniform(size=(30, 3))
        x_unl = rng.uniform(size=(60, 3))
        weights = ExampleWeights.from_sizes(0.4, 30, 60)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        tree = build_tree(x_pos, x_unl, engine, SplitterConfig("random", 2, 1),
                          StoppingRule(), rng)
        stack = [(tree, None)]
        while stack:
            node, parent_total = stack.pop()
            if isinstance(node, Leaf):
                total = node.stats.count_pos + node.stats.count_unl
            else:
                total = node.count_pos + node.count_unl
                stack.append((node.left, total))
                stack.append((node.right, total))
            if parent_total is not None:
                assert total < parent_total

    def test_leaf_predictions_match_constant_rule(self):
        rng = np.random.default_rng(13)
        x_pos = rng.uniform(size=(20, 2))
        x_unl = rng.uniform(size=(50, 2))
        weights = ExampleWeights.from_sizes(0.3, 20, 50)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        tree = build_tree(x_pos, x_unl, engine, SplitterConfig("random", 1, 1),
                          StoppingRule(), rng)
        stack = [tree]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                want = 1 if node.stats.pos_fraction > 0.5 else -1
                assert node.prediction == want
            else:
                stack.append(node.left)
                stack.append(node.right)

    def test_upu_reductions_telescope(self):
        # recorded reductions telescope: their sum equals root risk minus
        # summed leaf risks.  The sigmoid loss keeps every unbiased-risk
        # value finite (quadratic/logistic trees stop at a -inf leaf first,
        # which is exactly the purity rule), so every trial asserts.
        rng = np.random.default_rng(21)
        for _ in range(10):
            x_pos = rng.uniform(size=(15, 3))
            x_unl = rng.uniform(size=(40, 3))
            weights = ExampleWeights.from_sizes(0.3, 15, 40)
            engine = RiskEngine("upu", "sigmoid", weights=weights)
            tree = build_tree(x_pos, x_unl, engine, SplitterConfig("random", 2, 2),
                              StoppingRule(), rng)
            reductions = 0.0
            leaf_risk = 0.0
            internal_seen = 0
            stack = [tree]
            while stack:
                node = stack.pop()
                if isinstance(node, Leaf):
                    leaf_risk += engine.risk(node.stats.count_pos, node.stats.count_unl)
                else:
                    assert math.isfinite(node.reduction)
                    internal_seen += 1
                    reductions += node.reduction
                    stack.append(node.left)
                    stack.append(node.right)
            assert internal_seen > 0
            root_risk = engine.risk(15, 40)
            assert reductions == pytest.approx(root_risk - leaf_risk, abs=1e-8)

    def test_find_split_failure_becomes_leaf(self):
        # constant features, but node not pure: still a leaf, no error
        weights = ExampleWeights.from_sizes(0.5, 2, 3)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        tree = build_tree(np.ones((2, 2)), np.ones((3, 2)), engine,
                          exact_config(2), StoppingRule(), np.random.default_rng(0))
        assert isinstance(tree, Leaf)


class TestPnEquivalence:
    def _random_labeled(self, rng, n, d):
        x = rng.uniform(size=(n, d))
        # labels from a random noisy rule; re-draw until both classes appear
        while True:
            w = rng.normal(size=d)
            y = np.where(x @ w + 0.3 * rng.normal(size=n) > np.median(x @ w), 1, -1)
            if 0 < np.count_nonzero(y == 1) < n:
                return x, y

    def _engine_tree(self, x, y, loss):
        x_pos = x[y == 1]
        x_neg = x[y == -1]
        engine = RiskEngine("pn", loss, pn_weight=1.0 / len(y))
        return build_tree(x_pos, x_neg, engine, SplitterConfig("exact", x.shape[1], 1),
                          StoppingRule(), np.random.default_rng(0))

    def test_quadratic_tree_equals_gini_tree(self):
        rng = np.random.default_rng(100)
        for _ in range(10):
            x, y = self._random_labeled(rng, int(rng.integers(20, 80)),
                                        int(rng.integers(2, 5)))
            assert_tree_matches_reference(
                self._engine_tree(x, y, "quadratic"),
                build_reference_tree(x, y, "gini"), x, y, "gini", Leaf)

    def test_logistic_tree_equals_entropy_tree(self):
        rng = np.random.default_rng(101)
        for _ in range(10):
            x, y = self._random_labeled(rng, int(rng.integers(20, 80)),
                                        int(rng.integers(2, 5)))
            assert_tree_matches_reference(
                self._engine_tree(x, y, "logistic"),
                build_reference_tree(x, y, "entropy"), x, y, "entropy", Leaf)

    def test_savage_tree_equals_quadratic_tree(self):
        rng = np.random.default_rng(102)
        for _ in range(10):
            x, y = self._random_labeled(rng, int(rng.integers(20, 80)),
                                        int(rng.integers(2, 5)))
            quad = self._engine_tree(x, y, "quadratic")
            savage = self._engine_tree(x, y, "savage")
            self._assert_identical_trees(quad, savage)

    def _assert_identical_trees(self, a, b):
        if isinstance(a, Leaf):
            assert isinstance(b, Leaf)
            assert a.prediction == b.prediction
            return
        assert isinstance(b, Internal)
        assert (a.feature, a.threshold) == (b.feature, b.threshold)
        self._assert_identical_trees(a.left, b.left)
        self._assert_identical_trees(a.right, b.right)


class TestPredict:
    def test_single_leaf_ignores_input(self):
        leaf = Leaf(-1, None)
        assert predict_tree(leaf, np.array([1.0, 2.0, 3.0])) == -1

    def test_toy_tree_routing(self):
        x_pos, x_unl = toy_data()
        tree = build_tree(x_pos, x_unl, toy_engine(), exact_config(), StoppingRule(),
                          np.random.default_rng(0))
        assert predict_tree(tree, np.array([2.5])) == 1
        assert predict_tree(tree, np.array([5.5])) == 1   # boundary goes left
        assert predict_tree(tree, np.array([7.0])) == -1

    def test_dimension_mismatch_rejected(self):
        x_pos, x_unl = toy_data()
        tree = build_tree(x_pos, x_unl, toy_engine(), exact_config(), StoppingRule(),
                          np.random.default_rng(0))
        with pytest.raises(DataError):
            predict_tree(tree, np.zeros(0))

    def test_matrix_prediction_matches_rowwise(self):
        rng = np.random.default_rng(30)
        x_pos = rng.uniform(size=(20, 4))
        x_unl = rng.uniform(size=(40, 4))
        weights = ExampleWeights.from_sizes(0.3, 20, 40)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        tree = build_tree(x_pos, x_unl, engine, SplitterConfig("random", 2, 1),
                          StoppingRule(), rng)
        queries = rng.uniform(size=(50, 4))
        batch = predict_matrix(tree, queries)
        rowwise = np.array([predict_tree(tree, q) for q in queries])
        np.testing.assert_array_equal(batch, rowwise)


class TestTreeStats:
    def test_depth_and_counts(self):
        x_pos, x_unl = toy_data()
        tree = build_tree(x_pos, x_unl, toy_engine(), exact_config(), StoppingRule(),
                          np.random.default_rng(0))
        assert tree_depth(tree) == 1
        assert tree_counts(tree) == (1, 2)
        assert tree_depth(Leaf(1, None)) == 0
        assert tree_counts(Leaf(1, None)) == (0, 1)
