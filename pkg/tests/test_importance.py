import io
import math

import numpy as np
import pytest

from puforest import (
    ConfigError,
    ForestConfig,
    Internal,
    Leaf,
    feature_curve,
    normalized_importance,
    risk_reduction_importance,
    train_forest,
    write_importance_csv,
    write_importance_pgm,
)
from puforest.forest import ForestModel
from puforest.risk import NodeStats


def model_from_trees(trees, feature_dim, prior=0.5, n_pos=4, n_unl=8):
    config = ForestConfig(method="pu_et", n_trees=len(trees), prior=prior,
                          seed=0).normalized()
    return ForestModel(trees, config, feature_dim, n_pos, n_unl)


def leaf(prediction=1, count_pos=1, count_unl=1):
    return Leaf(prediction, NodeStats(count_pos, count_unl, 0.0, 0.0, 1.0))


class TestRawImportance:
    def test_unused_feature_scores_zero(self):
        tree = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        report = risk_reduction_importance(model_from_trees([tree], 5))
        assert report.raw[0] == pytest.approx(0.3)
        np.testing.assert_array_equal(report.raw[1:], np.zeros(4))

    def test_single_root_split(self):
        tree = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        report = risk_reduction_importance(model_from_trees([tree], 3))
        np.testing.assert_allclose(report.raw, [0.3, 0.0, 0.0])

    def test_two_trees_average(self):
        first = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        second = Internal(0, 0.5, 0.1, 4, 8, leaf(), leaf())
        report = risk_reduction_importance(model_from_trees([first, second], 2))
        assert report.raw[0] == pytest.approx(0.2)
        assert report.n_trees == 2

    def test_infinite_sentinel_excluded(self):
        tree = Internal(1, 0.5, math.inf, 4, 8, leaf(), leaf())
        report = risk_reduction_importance(model_from_trees([tree], 3))
        np.testing.assert_array_equal(report.raw, np.zeros(3))
        np.testing.assert_array_equal(report.normalized, np.zeros(3))

    def test_nested_splits_accumulate(self):
        inner = Internal(1, 0.2, 0.1, 2, 4, leaf(), leaf())
        tree = Internal(0, 0.5, 0.3, 4, 8, inner, leaf())
        report = risk_reduction_importance(model_from_trees([tree], 2))
        np.testing.assert_allclose(report.raw, [0.3, 0.1])


class TestNormalizedImportance:
    def test_root_contribution_divided_by_total_weight(self):
        # pu weights: pos 0.5/4, unl 1/8; root mass = prior + 1 = 1.5
        tree = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        report = normalized_importance(model_from_trees([tree], 2))
        assert report.normalized[0] == pytest.approx(0.3 / 1.5)

    def test_small_node_contribution_exceeds_raw(self):
        # deep node with total weight < 1 boosts its normalized share
        inner = Internal(1, 0.2, 0.1, 1, 1, leaf(), leaf())
        tree = Internal(0, 0.5, 0.3, 4, 8, inner, leaf())
        report = normalized_importance(model_from_trees([tree], 2))
        inner_mass = 1 * (0.5 / 4) + 1 * (1 / 8)
        assert inner_mass < 1
        assert report.normalized[1] == pytest.approx(0.1 / inner_mass)
        assert report.normalized[1] > report.raw[1]

    def test_unused_feature_scores_zero(self):
        tree = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        report = normalized_importance(model_from_trees([tree], 4))
        np.testing.assert_array_equal(report.normalized[1:], np.zeros(3))


class TestExports:
    def test_csv_shape(self):
        tree = Internal(0, 0.5, 0.3, 4, 8, leaf(), leaf())
        report = risk_reduction_importance(model_from_trees([tree], 2))
        buf = io.StringIO()
        write_importance_csv(report, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "feature,raw,normalized"
        assert len(lines) == 3
        assert lines[1].startswith("0,")
        assert float(lines[1].split(",")[1]) == pytest.approx(0.3)

    def test_pgm_output(self, tmp_path):
        values = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
        path = tmp_path / "imp.pgm"
        write_importance_pgm(values, 3, 2, path)
        text = path.read_text().splitlines()
        assert text[0] == "P2"
        assert text[1] == "3 2"
        assert text[2] == "255"
        grid = [int(v) for line in text[3:] for v in line.split()]
        assert grid[0] == 0 and grid[-1] == 255
        assert len(grid) == 6

    def test_pgm_constant_vector_renders_black(self, tmp_path):
        path = tmp_path / "flat.pgm"
        write_importance_pgm(np.ones(4), 2, 2, path)
        grid = [int(v) for line in path.read_text().splitlines()[3:]
                for v in line.split()]
        assert grid == [0, 0, 0, 0]

    def test_pgm_size_mismatch_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            write_importance_pgm(np.ones(5), 2, 2, tmp_path / "bad.pgm")


class TestGridStructuredImportance:
    def test_center_signal_dominates(self):
        # MNIST-style synthetic grid: the class signal lives in the central
        # pixels, so the central region must collect more importance mass
        side = 12
        rng = np.random.default_rng(99)
        n = 300
        base = rng.uniform(size=(n, side * side))
        labels = rng.random(n) < 0.5
        center = [r * side + c for r in range(4, 8) for c in range(4, 8)]
        base[np.ix_(labels, center)] += 1.5
        x_pos_rows = np.flatnonzero(labels)[:60]
        model = train_forest(base[x_pos_rows], base, ForestConfig(
            method="pu_et", n_trees=40, prior=0.5, seed=5, jobs=2))
        report = risk_reduction_importance(model)
        grid = report.raw.reshape(side, side)
        inside = grid[3:9, 3:9].sum()
        outside = grid.sum() - inside
        assert inside > outside

    def test_raw_importances_finite_and_nonnegative_under_upu(self):
        rng = np.random.default_rng(17)
        x_pos = rng.uniform(size=(30, 4))
        x_unl = rng.uniform(size=(80, 4))
        model = train_forest(x_pos, x_unl, ForestConfig(
            method="pu_et", n_trees=10, estimator="upu", loss="logistic",
            prior=0.4, seed=3))
        report = risk_reduction_importance(model)
        assert np.all(np.isfinite(report.raw))
        assert np.all(report.raw >= -1e-12)


class TestFeatureCurve:
    def setup_data(self):
        rng = np.random.default_rng(41)
        n = 240
        x = rng.uniform(size=(n, 6))
        y = np.where(x[:, 2] > 0.5, 1, -1)  # only feature 2 matters
        x_pos = x[y == 1][:50]
        return x, y, x_pos

    def test_contract_and_informative_feature_found(self):
        x, y, x_pos = self.setup_data()
        config = ForestConfig(method="pu_et", n_trees=15, prior=0.5, seed=7)
        model = train_forest(x_pos, x, config)
        report = risk_reduction_importance(model)
        assert int(np.argmax(report.raw)) == 2
        rows = feature_curve(x_pos, x, x, y, config, report, [1, 6],
                             replications=2)
        assert [k for k, _ in rows] == [1, 6]
        # keeping only the truly informative feature already classifies well
        assert rows[0][1] >= 0.9

    def test_k_validation(self):
        x, y, x_pos = self.setup_data()
        config = ForestConfig(method="pu_et", n_trees=5, prior=0.5, seed=7)
        model = train_forest(x_pos, x, config)
        report = risk_reduction_importance(model)
        with pytest.raises(ConfigError):
            feature_curve(x_pos, x, x, y, config, report, [])
        with pytest.raises(ConfigError):
            feature_curve(x_pos, x, x, y, config, report, [0])
        with pytest.raises(ConfigError):
            feature_curve(x_pos, x, x, y, config, report, [7])
