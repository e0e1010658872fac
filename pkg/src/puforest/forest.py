"""Ensemble trainers and majority-vote prediction.

Methods
-------
``pu_et``
    Each tree is grown on the full positive and unlabeled sets (no
    bootstrap) with the configured splitter; the default random mode gives
    the extra-trees ensemble.
``pu_rf_bootstrap``
    Classic random-forest variant: per-tree bootstrap resamples of both
    groups (with replacement, original sizes) and the exact sweep on the
    sampled features.
``pu_bagging_et``
    Per tree, a bootstrap sample of the unlabeled set (size ``n_unl``) is
    treated as negatives and a fully labeled extra tree is grown on it.
``naive_pu_et``
    Fully labeled extra trees treating every unlabeled example as negative.
``supervised_pn_et``
    Fully labeled extra trees on true positives/negatives.
"""

import io
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .exceptions import ConfigError, DataError
from .risk import NNPU, PN, UPU, ExampleWeights, RiskEngine, check_combination
from .splitter import EXACT, SQRT_FEATURES, SplitterConfig
from .tree import Internal, Leaf, StoppingRule, build_tree, predict_matrix

PU_ET = "pu_et"
PU_RF_BOOTSTRAP = "pu_rf_bootstrap"
PU_BAGGING_ET = "pu_bagging_et"
NAIVE_PU_ET = "naive_pu_et"
SUPERVISED_PN_ET = "supervised_pn_et"

ALL_METHODS = (PU_ET, PU_RF_BOOTSTRAP, PU_BAGGING_ET, NAIVE_PU_ET, SUPERVISED_PN_ET)

# Methods whose trees are grown on fully labeled data (group B = negatives).
_PN_METHODS = (PU_BAGGING_ET, NAIVE_PU_ET, SUPERVISED_PN_ET)

FORMAT_TAG = "puforest-model"
FORMAT_VERSION = 1

_MAX_SEED = 2 ** 63


@dataclass(frozen=True)
class ForestConfig:
    """Full training configuration for an ensemble."""

    method: str = PU_ET
    n_trees: int = 100
    estimator: str = NNPU
    loss: str = "quadratic"
    splitter: SplitterConfig = field(default_factory=SplitterConfig)
    stopping: StoppingRule = field(default_factory=StoppingRule)
    prior: Optional[float] = None
    seed: int = 0
    jobs: int = 1

    def normalized(self):
        """Validated copy with the estimator forced consistent with the method.

        The fully labeled methods always run the ``pn`` estimator (the
        unlabeled group is treated as negatives); the PU methods require
        ``upu`` or ``nnpu`` plus a class prior in (0, 1).
        """
        if self.method not in ALL_METHODS:
            raise ConfigError(
                "unknown method %r; expected one of %s"
                % (self.method, ", ".join(ALL_METHODS))
            )
        if self.n_trees < 1:
            raise ConfigError("n_trees must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not 0 <= self.seed < _MAX_SEED:
            raise ConfigError("seed must be a 64-bit nonnegative integer")
        cfg = self
        if self.method in _PN_METHODS:
            cfg = replace(cfg, estimator=PN)
        else:
            if cfg.estimator not in (UPU, NNPU):
                raise ConfigError(
                    "method %r requires the upu or nnpu estimator" % (cfg.method,)
                )
            if cfg.prior is None:
                raise ConfigError("PU training requires the class prior")
            if not 0.0 < cfg.prior < 1.0:
                raise ConfigError("class prior must lie strictly inside (0, 1)")
        check_combination(cfg.estimator, cfg.loss)
        return cfg


@dataclass
class ForestModel:
    """A trained ensemble plus everything needed to reuse it."""

    trees: list
    config: ForestConfig
    feature_dim: int
    n_pos_train: int
    n_unl_train: int
    format_version: int = FORMAT_VERSION
    build_seconds: Optional[list] = None  # training-only diagnostics, not serialized

    def risk_engine(self):
        """The engine the trees were grown with, rebuilt from the config."""
        return _engine_for(self.config, self.n_pos_train, self.n_unl_train)

    def group_weights(self):
        """(positive-group, other-group) per-example weights."""
        engine = self.risk_engine()
        return engine.weight_a, engine.weight_b


def _engine_for(config, n_pos, n_unl):
    if config.method in _PN_METHODS:
        return RiskEngine(PN, config.loss, pn_weight=1.0 / (n_pos + n_unl))
    weights = ExampleWeights.from_sizes(config.prior, n_pos, n_unl)
    return RiskEngine(config.estimator, config.loss, weights=weights)


def _splitter_for(config):
    if config.method == PU_RF_BOOTSTRAP:
        return replace(config.splitter, mode=EXACT)
    return config.splitter


def _tree_matrices(method, x_pos, x_other, rng):
    # Bootstrap draws happen before any tree-growing randomness so the
    # per-tree rng stream is reproducible.
    if method == PU_RF_BOOTSTRAP:
        rows_p = rng.integers(0, len(x_pos), len(x_pos))
        rows_u = rng.integers(0, len(x_other), len(x_other))
        return x_pos[rows_p], x_other[rows_u]
    if method == PU_BAGGING_ET:
        rows_u = rng.integers(0, len(x_other), len(x_other))
        return x_pos, x_other[rows_u]
    return x_pos, x_other


def train_forest(x_pos, x_other, config):
    """Train an ensemble.

    Parameters
    ----------
    x_pos : array-like of shape (n_pos, d)
        Labeled positives.
    x_other : array-like of shape (n_other, d)
        The unlabeled set, or the negatives for ``supervised_pn_et``.
    config : ForestConfig

    Returns
    -------
    ForestModel
        Tree ``i`` is grown with an rng seeded by ``seed XOR i``, so the
        model is bit-identical for any ``jobs`` setting.
    """
    cfg = config.normalized()
    x_pos = np.ascontiguousarray(np.asarray(x_pos, dtype=np.float64))
    x_other = np.ascontiguousarray(np.asarray(x_other, dtype=np.float64))
    if x_pos.ndim != 2 or x_other.ndim != 2:
        raise DataError("training inputs must be 2-D matrices")
    if len(x_pos) < 1 or len(x_other) < 1:
        raise DataError("both training groups must be nonempty")
    if x_pos.shape[1] != x_other.shape[1]:
        raise DataError(
            "feature dimensions disagree: %d vs %d"
            % (x_pos.shape[1], x_other.shape[1])
        )
    engine = _engine_for(cfg, len(x_pos), len(x_other))
    splitter = _splitter_for(cfg)

    def build_one(index):
        rng = np.random.default_rng(cfg.seed ^ index)
        started = time.perf_counter()
        xp, xo = _tree_matrices(cfg.method, x_pos, x_other, rng)
        tree = build_tree(xp, xo, engine, splitter, cfg.stopping, rng)
        return tree, time.perf_counter() - started

    jobs = min(cfg.jobs, cfg.n_trees)
    if jobs > 1:
        results = Parallel(n_jobs=jobs, prefer="threads")(
            delayed(build_one)(i) for i in range(cfg.n_trees)
        )
    else:
        results = [build_one(i) for i in range(cfg.n_trees)]
    return ForestModel(
        trees=[tree for tree, _ in results],
        config=cfg,
        feature_dim=x_pos.shape[1],
        n_pos_train=len(x_pos),
        n_unl_train=len(x_other),
        build_seconds=[seconds for _, seconds in results],
    )


def predict_forest(model, x):
    """Unweighted majority vote over the trees; vote ties predict -1."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DataError("query input must be a 2-D matrix")
    if x.shape[1] != model.feature_dim:
        raise DataError(
            "query has %d features but the model was trained on %d"
            % (x.shape[1], model.feature_dim)
        )
    votes = np.zeros(len(x), dtype=np.int64)
    for tree in model.trees:
        votes += predict_matrix(tree, x)
    return np.where(votes > 0, 1, -1)


def _fmt(value):
    return format(value, ".17g")


def _write_tree(out, tree):
    nodes = []
    stack = [tree]
    while stack:
        node = stack.pop()
        nodes.append(node)
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)
    lines = []
    for node in nodes:
        if isinstance(node, Leaf):
            lines.append(
                "L %d %d %d" % (node.prediction, node.stats.count_pos, node.stats.count_unl)
            )
        else:
            lines.append(
                "I %d %s %s %d %d"
                % (node.feature, _fmt(node.threshold), _fmt(node.reduction),
                   node.count_pos, node.count_unl)
            )
    out.write("tree %d\n" % len(nodes))
    for line in lines:
        out.write(line + "\n")


def save_model(model, path):
    """Write the model as versioned, self-describing text.

    The file holds a format tag, the full configuration, the training set
    sizes and each tree flattened in pre-order with thresholds and
    reductions printed at 17 significant digits, so a load/save round trip
    is byte-identical.
    """
    cfg = model.config
    buf = io.StringIO()
    buf.write("%s %d\n" % (FORMAT_TAG, model.format_version))
    buf.write("method %s\n" % cfg.method)
    buf.write("estimator %s\n" % cfg.estimator)
    buf.write("loss %s\n" % cfg.loss)
    buf.write("split_mode %s\n" % cfg.splitter.mode)
    buf.write("split_features %s\n" % (
        cfg.splitter.n_features if cfg.splitter.n_features == SQRT_FEATURES
        else "%d" % cfg.splitter.n_features))
    buf.write("split_thresholds %d\n" % cfg.splitter.n_thresholds)
    buf.write("max_depth %s\n" % (
        "none" if cfg.stopping.max_depth is None else "%d" % cfg.stopping.max_depth))
    buf.write("min_node_size %d\n" % cfg.stopping.min_node_size)
    buf.write("purity_check %d\n" % int(cfg.stopping.purity_check))
    # jobs is execution concurrency, not model identity: leaving it out
    # keeps files byte-identical across worker counts
    buf.write("prior %s\n" % ("none" if cfg.prior is None else _fmt(cfg.prior)))
    buf.write("seed %d\n" % cfg.seed)
    buf.write("n_trees %d\n" % cfg.n_trees)
    buf.write("feature_dim %d\n" % model.feature_dim)
    buf.write("n_pos %d\n" % model.n_pos_train)
    buf.write("n_unl %d\n" % model.n_unl_train)
    for tree in model.trees:
        _write_tree(buf, tree)
    buf.write("end\n")
    with open(path, "w", newline="\n") as handle:
        handle.write(buf.getvalue())


class _Lines:
    def __init__(self, text, path):
        self.lines = text.splitlines()
        self.cursor = 0
        self.path = path

    def take(self):
        if self.cursor >= len(self.lines):
            raise DataError("%s: unexpected end of model file" % self.path)
        line = self.lines[self.cursor]
        self.cursor += 1
        return line

    def take_field(self, key):
        line = self.take()
        parts = line.split(None, 1)
        if len(parts) != 2 or parts[0] != key:
            raise DataError(
                "%s: expected %r on line %d, got %r" % (self.path, key, self.cursor, line)
            )
        return parts[1]


def _read_tree(lines, n_nodes, engine, path):
    root = None
    open_internals = []
    for _ in range(n_nodes):
        parts = lines.take().split()
        if parts and parts[0] == "L" and len(parts) == 4:
            pred, count_pos, count_unl = int(parts[1]), int(parts[2]), int(parts[3])
            if pred not in (-1, 1):
                raise DataError("%s: leaf prediction must be -1 or 1" % path)
            node = Leaf(pred, engine.stats(count_pos, count_unl))
        elif parts and parts[0] == "I" and len(parts) == 6:
            node = Internal(int(parts[1]), float(parts[2]), float(parts[3]),
                            int(parts[4]), int(parts[5]))
        else:
            raise DataError("%s: bad node line %d" % (path, lines.cursor))
        if root is None:
            root = node
        else:
            if not open_internals:
                raise DataError("%s: malformed tree encoding" % path)
            head = open_internals[-1]
            if head.left is None:
                head.left = node
            else:
                head.right = node
                open_internals.pop()
        if isinstance(node, Internal):
            open_internals.append(node)
    if root is None or open_internals:
        raise DataError("%s: truncated tree encoding" % path)
    return root


def load_model(path):
    """Read a model written by :func:`save_model`."""
    with open(path, "r") as handle:
        text = handle.read()
    lines = _Lines(text, path)
    try:
        header = lines.take().split()
        if len(header) != 2 or header[0] != FORMAT_TAG:
            raise DataError("%s: not a %s file" % (path, FORMAT_TAG))
        version = int(header[1])
        if version != FORMAT_VERSION:
            raise DataError(
                "%s: format version %d not supported (expected %d)"
                % (path, version, FORMAT_VERSION)
            )
        method = lines.take_field("method")
        estimator = lines.take_field("estimator")
        loss = lines.take_field("loss")
        split_mode = lines.take_field("split_mode")
        raw_features = lines.take_field("split_features")
        n_features = raw_features if raw_features == SQRT_FEATURES else int(raw_features)
        n_thresholds = int(lines.take_field("split_thresholds"))
        raw_depth = lines.take_field("max_depth")
        max_depth = None if raw_depth == "none" else int(raw_depth)
        min_node_size = int(lines.take_field("min_node_size"))
        purity_check = bool(int(lines.take_field("purity_check")))
        raw_prior = lines.take_field("prior")
        prior = None if raw_prior == "none" else float(raw_prior)
        seed = int(lines.take_field("seed"))
        n_trees = int(lines.take_field("n_trees"))
        feature_dim = int(lines.take_field("feature_dim"))
        n_pos = int(lines.take_field("n_pos"))
        n_unl = int(lines.take_field("n_unl"))
        config = ForestConfig(
            method=method,
            n_trees=n_trees,
            estimator=estimator,
            loss=loss,
            splitter=SplitterConfig(split_mode, n_features, n_thresholds),
            stopping=StoppingRule(max_depth, min_node_size, purity_check),
            prior=prior,
            seed=seed,
        ).normalized()
        engine = _engine_for(config, n_pos, n_unl)
        trees = []
        for _ in range(n_trees):
            node_count = int(lines.take_field("tree"))
            trees.append(_read_tree(lines, node_count, engine, path))
        if lines.take() != "end":
            raise DataError("%s: missing end marker" % path)
    except (ValueError, ConfigError) as exc:
        raise DataError("%s: corrupt model file (%s)" % (path, exc)) from exc
    return ForestModel(
        trees=trees,
        config=config,
        feature_dim=feature_dim,
        n_pos_train=n_pos,
        n_unl_train=n_unl,
        format_version=version,
    )
