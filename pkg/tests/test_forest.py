import math
from dataclasses import replace

import numpy as np
import pytest

from puforest import (
    ConfigError,
    DataError,
    ExampleWeights,
    ForestConfig,
    Internal,
    Leaf,
    RiskEngine,
    SplitterConfig,
    StoppingRule,
    build_tree,
    load_model,
    predict_forest,
    predict_tree,
    save_model,
    train_forest,
)
from puforest.forest import ForestModel


def two_moons_pu(rng, n_pos=200, n_unl=2000, noise=0.12):
    """Interleaved half-circles; positives from the upper moon, the
    unlabeled pool from the 50/50 marginal."""

    def upper(n):
        angle = rng.uniform(0, math.pi, n)
        pts = np.column_stack([np.cos(angle), np.sin(angle)])
        return pts + rng.normal(scale=noise, size=pts.shape)

    def lower(n):
        angle = rng.uniform(0, math.pi, n)
        pts = np.column_stack([1.0 - np.cos(angle), 0.5 - np.sin(angle)])
        return pts + rng.normal(scale=noise, size=pts.shape)

    x_pos = upper(n_pos)
    labels = rng.random(n_unl) < 0.5
    x_unl = np.where(labels[:, None], upper(n_unl), lower(n_unl))
    return x_pos, x_unl, labels


def toy_matrices():
    return np.array([[2.0], [3.0]]), np.array([[2.0], [3.0], [8.0], [9.0]])


class TestForestConfig:
    def test_pn_methods_force_pn_estimator(self):
        for method in ("naive_pu_et", "pu_bagging_et", "supervised_pn_et"):
            cfg = ForestConfig(method=method, estimator="nnpu").normalized()
            assert cfg.estimator == "pn"

    def test_pu_methods_reject_pn_estimator(self):
        with pytest.raises(ConfigError):
            ForestConfig(method="pu_et", estimator="pn", prior=0.5).normalized()

    def test_pu_methods_require_prior(self):
        with pytest.raises(ConfigError):
            ForestConfig(method="pu_et", estimator="nnpu").normalized()
        with pytest.raises(ConfigError):
            ForestConfig(method="pu_et", estimator="nnpu", prior=1.5).normalized()

    def test_bad_combination_rejected(self):
        with pytest.raises(ConfigError):
            ForestConfig(method="pu_et", estimator="nnpu", loss="savage",
                         prior=0.5).normalized()

    def test_counts_validated(self):
        with pytest.raises(ConfigError):
            ForestConfig(n_trees=0, prior=0.5).normalized()
        with pytest.raises(ConfigError):
            ForestConfig(prior=0.5, jobs=0).normalized()
        with pytest.raises(ConfigError):
            ForestConfig(prior=0.5, seed=-1).normalized()


class TestTrainForest:
    def toy_config(self, **kw):
        base = dict(method="pu_et", n_trees=1, estimator="nnpu", loss="quadratic",
                    splitter=SplitterConfig("exact", 1, 1), prior=0.5, seed=3)
        base.update(kw)
        return ForestConfig(**base)

    def test_single_tree_matches_direct_build(self):
        x_pos, x_unl = toy_matrices()
        model = train_forest(x_pos, x_unl, self.toy_config())
        weights = ExampleWeights.from_sizes(0.5, 2, 4)
        engine = RiskEngine("nnpu", "quadratic", weights=weights)
        direct = build_tree(x_pos, x_unl, engine, SplitterConfig("exact", 1, 1),
                            StoppingRule(), np.random.default_rng(3 ^ 0))
        got = model.trees[0]
        assert isinstance(got, Internal)
        assert (got.feature, got.threshold) == (direct.feature, direct.threshold)
        assert got.left.prediction == direct.left.prediction
        assert got.right.prediction == direct.right.prediction

    def test_pu_et_sees_full_data(self):
        # no bootstrap: every tree's root carries the full counts
        rng = np.random.default_rng(0)
        x_pos = rng.uniform(size=(15, 3))
        x_unl = rng.uniform(size=(40, 3))
        model = train_forest(x_pos, x_unl, ForestConfig(
            method="pu_et", n_trees=5, prior=0.3, seed=1))
        for tree in model.trees:
            total = (tree.count_pos + tree.count_unl if isinstance(tree, Internal)
                     else tree.stats.count_pos + tree.stats.count_unl)
            assert total == 55

    def test_supervised_fits_separable_data_exactly(self):
        rng = np.random.default_rng(8)
        x_pos = rng.normal(loc=+2.0, size=(100, 2))
        x_neg = rng.normal(loc=-2.0, size=(100, 2))
        model = train_forest(x_pos, x_neg, ForestConfig(
            method="supervised_pn_et", n_trees=20, seed=5))
        queries = np.vstack([x_pos, x_neg])
        truth = np.concatenate([np.ones(100, dtype=int), -np.ones(100, dtype=int)])
        predictions = predict_forest(model, queries)
        assert np.array_equal(predictions, truth)

    def test_two_moons_nnpu_accuracy(self):
        # sanity threshold from a pilot run of this synthetic task
        rng = np.random.default_rng(77)
        x_pos, x_unl, labels = two_moons_pu(rng)
        model = train_forest(x_pos, x_unl, ForestConfig(
            method="pu_et", n_trees=100, estimator="nnpu", prior=0.5, seed=9, jobs=2))
        predictions = predict_forest(model, x_unl)
        accuracy = np.mean(predictions == np.where(labels, 1, -1))
        assert accuracy >= 0.90

    def test_determinism_across_jobs(self, tmp_path):
        rng = np.random.default_rng(31)
        x_pos = rng.uniform(size=(30, 4))
        x_unl = rng.uniform(size=(80, 4))
        paths = []
        for jobs in (1, 8):
            model = train_forest(x_pos, x_unl, ForestConfig(
                method="pu_et", n_trees=12, prior=0.4, seed=123, jobs=jobs))
            path = tmp_path / ("model_jobs%d.puet" % jobs)
            save_model(model, path)
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_bootstrap_methods_vary_trees(self):
        rng = np.random.default_rng(14)
        x_pos = rng.uniform(size=(20, 3))
        x_unl = rng.uniform(size=(50, 3))
        for method in ("pu_rf_bootstrap", "pu_bagging_et"):
            config = ForestConfig(method=method, n_trees=4, prior=0.4, seed=2)
            model = train_forest(x_pos, x_unl, config)
            assert len(model.trees) == 4
            roots = {
                (t.feature, t.threshold) for t in model.trees
                if isinstance(t, Internal)
            }
            assert len(roots) > 1  # resampling shakes the root split

    def test_input_validation(self):
        config = ForestConfig(prior=0.5)
        with pytest.raises(DataError):
            train_forest(np.zeros((0, 2)), np.ones((3, 2)), config)
        with pytest.raises(DataError):
            train_forest(np.ones((3, 2)), np.ones((3, 3)), config)


class TestPredictForest:
    def leaf_model(self, predictions):
        trees = [Leaf(p, None) for p in predictions]
        config = ForestConfig(method="pu_et", n_trees=len(trees), prior=0.5).normalized()
        return ForestModel(trees, config, feature_dim=2, n_pos_train=1, n_unl_train=1)

    def test_single_tree_equals_tree_prediction(self):
        x_pos, x_unl = toy_matrices()
        model = train_forest(x_pos, x_unl, ForestConfig(
            method="pu_et", n_trees=1, prior=0.5,
            splitter=SplitterConfig("exact", 1, 1), seed=0))
        queries = np.array([[2.5], [7.0]])
        votes = predict_forest(model, queries)
        rowwise = [predict_tree(model.trees[0], q) for q in queries]
        assert list(votes) == rowwise

    def test_majority_vote(self):
        model = self.leaf_model([1, 1, -1])
        assert predict_forest(model, np.zeros((3, 2)))[0] == 1

    def test_even_tie_predicts_negative(self):
        model = self.leaf_model([1, -1])
        assert predict_forest(model, np.zeros((1, 2)))[0] == -1

    def test_dimension_mismatch(self):
        model = self.leaf_model([1])
        with pytest.raises(DataError):
            predict_forest(model, np.zeros((2, 5)))


class TestSerialization:
    def trained_model(self, method="pu_et", **kw):
        rng = np.random.default_rng(55)
        x_pos = rng.uniform(size=(25, 3))
        x_unl = rng.uniform(size=(60, 3))
        base = dict(method=method, n_trees=6, seed=11)
        if method in ("pu_et", "pu_rf_bootstrap"):
            base["prior"] = 0.35
        base.update(kw)
        return train_forest(x_pos, x_unl, ForestConfig(**base)), x_pos, x_unl

    @pytest.mark.parametrize("method", ["pu_et", "pu_rf_bootstrap",
                                        "pu_bagging_et", "naive_pu_et"])
    def test_round_trip_preserves_bytes_and_predictions(self, tmp_path, method):
        model, x_pos, x_unl = self.trained_model(method)
        first = tmp_path / "first.puet"
        second = tmp_path / "second.puet"
        save_model(model, first)
        loaded = load_model(first)
        save_model(loaded, second)
        assert first.read_bytes() == second.read_bytes()
        queries = np.vstack([x_pos[:5], x_unl[:5]])
        np.testing.assert_array_equal(
            predict_forest(model, queries), predict_forest(loaded, queries)
        )
        # jobs is an execution knob and intentionally absent from the file
        assert loaded.config == replace(model.config, jobs=loaded.config.jobs)
        assert loaded.feature_dim == model.feature_dim
        assert loaded.n_pos_train == model.n_pos_train

    def test_leaf_stats_survive_round_trip(self, tmp_path):
        model, _, _ = self.trained_model()
        path = tmp_path / "model.puet"
        save_model(model, path)
        loaded = load_model(path)

        def leaves(tree):
            stack, out = [tree], []
            while stack:
                node = stack.pop()
                if isinstance(node, Leaf):
                    out.append(node)
                else:
                    stack.append(node.left)
                    stack.append(node.right)
            return out

        for original_tree, loaded_tree in zip(model.trees, loaded.trees):
            for a, b in zip(leaves(original_tree), leaves(loaded_tree)):
                assert a.prediction == b.prediction
                assert a.stats == b.stats

    def test_corrupt_file_rejected(self, tmp_path):
        model, _, _ = self.trained_model()
        path = tmp_path / "model.puet"
        save_model(model, path)
        text = path.read_text().splitlines()
        (tmp_path / "bad1.puet").write_text("not a model\n")
        (tmp_path / "bad2.puet").write_text("\n".join(text[:10]))
        truncated_tree = "\n".join(text[:-2]) + "\n"
        (tmp_path / "bad3.puet").write_text(truncated_tree)
        for name in ("bad1.puet", "bad2.puet", "bad3.puet"):
            with pytest.raises(DataError):
                load_model(tmp_path / name)

    def test_infinite_reduction_survives_round_trip(self, tmp_path):
        # upu-quadratic with positives spatially apart from all unlabeled
        # examples: the root split isolates them into a child with no
        # unlabeled mass, whose risk is -inf, so the recorded reduction is
        # the +inf sentinel
        x_pos = np.array([[2.0], [3.0]])
        x_unl = np.array([[8.0], [9.0]])
        model = train_forest(x_pos, x_unl, ForestConfig(
            method="pu_et", n_trees=1, estimator="upu", loss="quadratic",
            splitter=SplitterConfig("exact", 1, 1), prior=0.5, seed=0))
        root = model.trees[0]
        assert isinstance(root, Internal) and math.isinf(root.reduction)
        path = tmp_path / "model.puet"
        save_model(model, path)
        loaded = load_model(path)
        assert math.isinf(loaded.trees[0].reduction)
