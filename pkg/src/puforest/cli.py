"""Command-line interface: train, predict, evaluate, importance,
feature-curve and reproduce.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 violated internal invariant.  Every flag can also be supplied through a
JSON config file (same keys as the long flag names); explicit flags win.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .data_io import make_pu_scenario, parse_csv, parse_libsvm
from .exceptions import ConfigError, DataError, InternalError
from .forest import (
    ALL_METHODS,
    NAIVE_PU_ET,
    PU_BAGGING_ET,
    PU_ET,
    PU_RF_BOOTSTRAP,
    SUPERVISED_PN_ET,
    ForestConfig,
    load_model,
    predict_forest,
    save_model,
    train_forest,
)
from .importance import (
    feature_curve,
    risk_reduction_importance,
    write_importance_csv,
    write_importance_pgm,
)
from .losses import ALL_LOSSES
from .metrics import (
    empirical_pn_zero_one_risk,
    empirical_pu_zero_one_risk,
    evaluate,
)
from .risk import ALL_ESTIMATORS, NNPU, PN, UPU, check_combination
from .splitter import EXACT, RANDOM, SQRT_FEATURES, SplitterConfig
from .tree import StoppingRule, tree_counts, tree_depth

_CLI_METHODS = {method.replace("_", "-"): method for method in ALL_METHODS}

_FOREST_DEFAULTS = {
    "method": "pu-et",
    "risk": NNPU,
    "loss": "quadratic",
    "trees": 100,
    "max_depth": "none",
    "min_node_size": 1,
    "features": SQRT_FEATURES,
    "thresholds": 1,
    "split_mode": RANDOM,
    "prior": None,
    "seed": 0,
    "jobs": 1,
}

_DATA_DEFAULTS = {
    "format": "libsvm",
    "positive_label": "1",
    "label_col": None,
}

FETCH_INSTRUCTIONS = """\
The reproduction expects a local copy of the dataset in LIBSVM format.
Download it from the LIBSVM binary-classification collection, e.g.

    curl -O https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/mushrooms

then rerun with --data pointing at the file."""


def _add_forest_flags(parser):
    parser.add_argument("--method", choices=sorted(_CLI_METHODS), default=None,
                        help="ensemble method (default pu-et)")
    parser.add_argument("--risk", choices=ALL_ESTIMATORS, default=None,
                        help="risk estimator (default nnpu)")
    parser.add_argument("--loss", choices=ALL_LOSSES, default=None,
                        help="loss function (default quadratic)")
    parser.add_argument("--trees", type=int, default=None,
                        help="number of trees (default 100)")
    parser.add_argument("--max-depth", default=None,
                        help="maximum tree depth, or 'none' (default none)")
    parser.add_argument("--min-node-size", type=int, default=None,
                        help="minimum examples per node (default 1)")
    parser.add_argument("--features", default=None,
                        help="features sampled per node: integer or 'sqrt'")
    parser.add_argument("--thresholds", type=int, default=None,
                        help="random thresholds per sampled feature (default 1)")
    parser.add_argument("--split-mode", choices=(EXACT, RANDOM), default=None,
                        help="split search mode (default random)")
    parser.add_argument("--prior", type=float, default=None,
                        help="class prior pi; required for PU training from raw files")
    parser.add_argument("--seed", type=int, default=None,
                        help="rng seed (default 0)")
    parser.add_argument("--jobs", type=int, default=None,
                        help="parallel workers for tree training (default 1)")


def _add_data_flags(parser):
    parser.add_argument("--format", choices=("libsvm", "csv"), default=None,
                        help="input file format (default libsvm)")
    parser.add_argument("--positive-label", default=None,
                        help="label value mapped to +1 (default 1)")
    parser.add_argument("--label-col", default=None,
                        help="label column name (csv format)")


def _add_config_flag(parser):
    parser.add_argument("--config", default=None,
                        help="JSON file supplying defaults for the flags above")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="puforest",
        description="Train and apply PU/PN decision-tree ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train an ensemble and save the model")
    train.add_argument("-p", "--positive", default=None, help="positive example file")
    train.add_argument("-u", "--unlabeled", default=None, help="unlabeled example file")
    train.add_argument("-d", "--data", default=None,
                       help="fully labeled file (supervised-pn-et, or PU via --n-positive)")
    train.add_argument("--n-positive", type=int, default=None,
                       help="with -d: sample this many positives for a PU scenario")
    train.add_argument("-o", "--output", required=True, help="model output path")
    _add_forest_flags(train)
    _add_data_flags(train)
    _add_config_flag(train)

    predict = sub.add_parser("predict", help="predict labels for a data file")
    predict.add_argument("-m", "--model", required=True, help="model file")
    predict.add_argument("-d", "--data", required=True, help="query data file")
    predict.add_argument("-o", "--output", default=None,
                         help="prediction output path (default stdout)")
    _add_data_flags(predict)
    _add_config_flag(predict)

    ev = sub.add_parser("evaluate", help="evaluate a model or a prediction file")
    ev.add_argument("-m", "--model", default=None, help="model file")
    ev.add_argument("--predictions", default=None,
                    help="prediction file (one label per line) instead of a model")
    ev.add_argument("-d", "--data", required=True, help="labeled evaluation file")
    ev.add_argument("-p", "--positive", default=None,
                    help="training positives, for the PU training risk")
    ev.add_argument("-u", "--unlabeled", default=None,
                    help="training unlabeled set, for the PU training risk")
    ev.add_argument("-o", "--output", default=None, help="CSV output path")
    _add_data_flags(ev)
    _add_config_flag(ev)

    imp = sub.add_parser("importance", help="risk-reduction feature importances")
    imp.add_argument("-m", "--model", required=True, help="model file")
    imp.add_argument("-o", "--output", default=None,
                     help="CSV output path (default stdout)")
    imp.add_argument("--grid", default=None,
                     help="WxH image layout for a PGM rendering")
    imp.add_argument("--pgm", default=None, help="PGM output path (with --grid)")
    _add_config_flag(imp)

    curve = sub.add_parser("feature-curve",
                           help="accuracy when retraining on top-k features")
    curve.add_argument("-p", "--positive", default=None)
    curve.add_argument("-u", "--unlabeled", default=None)
    curve.add_argument("-d", "--data", default=None,
                       help="fully labeled training file (supervised-pn-et)")
    curve.add_argument("--test", required=True, help="labeled test file")
    curve.add_argument("--k", required=True,
                       help="comma-separated feature counts, e.g. 5,10,20")
    curve.add_argument("--replications", type=int, default=None,
                       help="retrainings per k (default 5)")
    curve.add_argument("-o", "--output", default=None, help="CSV output path")
    _add_forest_flags(curve)
    _add_data_flags(curve)
    _add_config_flag(curve)

    rep = sub.add_parser("reproduce",
                         help="desk-scale reproduction of the benchmark tables")
    rep.add_argument("--data", required=True, help="dataset file (LIBSVM format)")
    rep.add_argument("--methods", default=None,
                     help="comma-separated subset of: "
                          "pu-et:ESTIMATOR:LOSS, naive, bagging, supervised")
    rep.add_argument("--replications", type=int, default=None,
                     help="training replications (default 5)")
    rep.add_argument("--n-positive", type=int, default=None,
                     help="positives sampled per scenario (default 1000)")
    rep.add_argument("--test-fraction", type=float, default=None,
                     help="held-out fraction (default 0.2)")
    rep.add_argument("--trees", type=int, default=None)
    rep.add_argument("--seed", type=int, default=None)
    rep.add_argument("--jobs", type=int, default=None)
    rep.add_argument("--positive-label", default=None)
    rep.add_argument("-o", "--output", default=None, help="CSV output path")
    _add_config_flag(rep)

    return parser


def _apply_config_file(args, defaults):
    """Fill unset flags from the JSON config file, then from defaults."""
    file_values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as handle:
                raw = json.load(handle)
        except OSError as exc:
            raise DataError("cannot read config file: %s" % exc)
        except json.JSONDecodeError as exc:
            raise DataError("config file is not valid JSON: %s" % exc)
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        file_values = {str(k).replace("-", "_"): v for k, v in raw.items()}
        unknown = set(file_values) - set(defaults)
        if unknown:
            raise ConfigError(
                "config file sets unknown keys: %s" % ", ".join(sorted(unknown))
            )
    for key, fallback in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, file_values.get(key, fallback))
    return args


def _parse_max_depth(text, problems):
    if text == "none" or text is None:
        return None
    try:
        depth = int(text)
    except (TypeError, ValueError):
        problems.append("--max-depth must be a nonnegative integer or 'none'")
        return None
    if depth < 0:
        problems.append("--max-depth must be nonnegative")
        return None
    return depth


def _parse_features(text, problems):
    if text == SQRT_FEATURES:
        return SQRT_FEATURES
    try:
        count = int(text)
    except (TypeError, ValueError):
        problems.append("--features must be a positive integer or 'sqrt'")
        return SQRT_FEATURES
    if count < 1:
        problems.append("--features must be at least 1")
        return SQRT_FEATURES
    return count


def _forest_config_from_args(args, problems, prior_required=True):
    method = _CLI_METHODS.get(args.method)
    if method is None:
        problems.append("unknown method %r" % args.method)
        return None
    if args.trees is not None and args.trees < 1:
        problems.append("--trees must be at least 1")
    if args.jobs is not None and args.jobs < 1:
        problems.append("--jobs must be at least 1")
    if args.seed is not None and args.seed < 0:
        problems.append("--seed must be nonnegative")
    if args.thresholds is not None and args.thresholds < 1:
        problems.append("--thresholds must be at least 1")
    if args.min_node_size is not None and args.min_node_size < 1:
        problems.append("--min-node-size must be at least 1")
    max_depth = _parse_max_depth(args.max_depth, problems)
    n_features = _parse_features(args.features, problems)
    estimator = args.risk
    if method in (PU_BAGGING_ET, NAIVE_PU_ET, SUPERVISED_PN_ET):
        estimator = PN
    elif estimator == PN:
        problems.append("method %r requires --risk upu or nnpu" % args.method)
    try:
        check_combination(estimator, args.loss)
    except ConfigError as exc:
        problems.append(str(exc))
    if method in (PU_ET, PU_RF_BOOTSTRAP):
        if args.prior is None:
            if prior_required:
                problems.append(
                    "PU training from raw files requires --prior "
                    "(scenario mode derives it from the labeled data)"
                )
        elif not 0.0 < args.prior < 1.0:
            problems.append("--prior must lie strictly inside (0, 1)")
    if problems:
        return None
    return ForestConfig(
        method=method,
        n_trees=args.trees,
        estimator=estimator,
        loss=args.loss,
        splitter=SplitterConfig(args.split_mode, n_features, args.thresholds),
        stopping=StoppingRule(max_depth, args.min_node_size, True),
        prior=args.prior,
        seed=args.seed,
        jobs=args.jobs,
    )


def _positive_label_for(args, problems):
    if args.format == "libsvm":
        try:
            return float(args.positive_label)
        except (TypeError, ValueError):
            problems.append("--positive-label must be numeric for libsvm input")
            return 1.0
    return args.positive_label


def _load_labeled(path, args):
    if args.format == "csv":
        if not args.label_col:
            raise ConfigError("csv input requires --label-col")
        return parse_csv(path, args.label_col, args.positive_label)
    return parse_libsvm(path, positive_label=float(args.positive_label))


def _csv_all_features(path):
    # headed CSV with every column a feature (prediction inputs)
    import csv as _csv

    with open(path) as handle:
        reader = _csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("CSV file has no header row")
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            try:
                rows.append([float(cell) for cell in record])
            except ValueError:
                raise DataError("line %d: non-numeric cell" % lineno)
    x = np.array(rows) if rows else np.zeros((0, len(header)))
    from .data_io import LabeledDataset

    return LabeledDataset(x, -np.ones(len(rows), dtype=np.int64), header)


def _load_features(path, args, n_features=None):
    """Load a file for prediction: labels, if present, are ignored."""
    if args.format == "csv":
        if args.label_col:
            return parse_csv(path, args.label_col, args.positive_label)
        return _csv_all_features(path)
    return parse_libsvm(path, n_features=n_features)


def _pad_columns(x, width):
    if x.shape[1] == width:
        return x
    padded = np.zeros((x.shape[0], width))
    padded[:, :x.shape[1]] = x
    return padded


def _fail(problems):
    raise ConfigError("\n".join("usage: %s" % p for p in problems))


def cmd_train(args):
    problems = []
    scenario_mode = bool(args.data) and _CLI_METHODS.get(args.method) != SUPERVISED_PN_ET
    config = _forest_config_from_args(args, problems,
                                      prior_required=not scenario_mode)
    _positive_label_for(args, problems)
    method = _CLI_METHODS.get(args.method)
    if method == SUPERVISED_PN_ET:
        if not args.data:
            problems.append("supervised-pn-et trains from a labeled file (-d)")
    elif args.data:
        if args.n_positive is None:
            problems.append("-d with a PU method requires --n-positive")
        elif args.n_positive < 1:
            problems.append("--n-positive must be at least 1")
    elif not (args.positive and args.unlabeled):
        problems.append("PU training requires -p and -u (or -d with --n-positive)")
    if problems:
        _fail(problems)

    if method == SUPERVISED_PN_ET:
        data = _load_labeled(args.data, args)
        x_pos = data.x[data.y == 1]
        x_other = data.x[data.y == -1]
        if len(x_pos) == 0 or len(x_other) == 0:
            raise DataError("supervised training needs both classes present")
    elif args.data:
        data = _load_labeled(args.data, args)
        scenario = make_pu_scenario(
            data, args.n_positive, np.random.default_rng(config.seed)
        )
        x_pos, x_other = scenario.x_pos, scenario.x_unl
        if config.prior is None:
            config = replace(config, prior=scenario.prior)
    else:
        pos = _load_features(args.positive, args)
        unl = _load_features(args.unlabeled, args)
        # sparse files may top out at different indices: align the widths
        width = max(pos.x.shape[1], unl.x.shape[1])
        x_pos = _pad_columns(pos.x, width)
        x_other = _pad_columns(unl.x, width)

    model = train_forest(x_pos, x_other, config)
    save_model(model, args.output)
    for index, tree in enumerate(model.trees):
        internal, leaves = tree_counts(tree)
        print(
            "[tree %d] depth=%d internal=%d leaves=%d time=%.3fs"
            % (index, tree_depth(tree), internal, leaves,
               model.build_seconds[index]),
            file=sys.stderr,
        )
    print(
        "trained %d trees on %d positives / %d others -> %s"
        % (len(model.trees), model.n_pos_train, model.n_unl_train, args.output),
        file=sys.stderr,
    )
    return 0


def cmd_predict(args):
    model = load_model(args.model)
    data = _load_features(args.data, args, n_features=model.feature_dim)
    if data.x.shape[0] and data.x.shape[1] != model.feature_dim:
        raise DataError(
            "query has %d features but the model was trained on %d"
            % (data.x.shape[1], model.feature_dim)
        )
    if data.x.shape[0]:
        predictions = predict_forest(model, data.x)
    else:
        predictions = np.zeros(0, dtype=np.int64)
    text = "".join("%d\n" % p for p in predictions)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _read_label_file(path):
    labels = []
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                value = int(line)
            except ValueError:
                raise DataError("%s: line %d is not a label" % (path, lineno))
            if value not in (-1, 1):
                raise DataError("%s: line %d must be -1 or 1" % (path, lineno))
            labels.append(value)
    return np.array(labels, dtype=np.int64)


def cmd_evaluate(args):
    problems = []
    if bool(args.model) == bool(args.predictions):
        problems.append("evaluate needs exactly one of -m/--model or --predictions")
    if bool(args.positive) != bool(args.unlabeled):
        problems.append("the PU training risk requires both -p and -u")
    if args.positive and not args.model:
        problems.append("the PU training risk requires a model (-m)")
    if problems:
        _fail(problems)
    data = _load_labeled(args.data, args)
    result = {"run_seed": None, "accuracy": None, "f_score": None,
              "train_pu_risk": None, "test_pn_risk": None}
    if args.model:
        model = load_model(args.model)
        result["run_seed"] = model.config.seed
        predictions = predict_forest(model, data.x)
        summary = evaluate(predictions, data.y)
        result["accuracy"] = summary.accuracy
        result["f_score"] = summary.f_score
        result["test_pn_risk"] = empirical_pn_zero_one_risk(predictions, data.y)
        if args.positive:
            if model.config.estimator not in (UPU, NNPU):
                raise ConfigError(
                    "the PU training risk applies to upu/nnpu models only"
                )
            pos = parse_libsvm(args.positive, n_features=model.feature_dim) \
                if args.format == "libsvm" else _load_labeled(args.positive, args)
            unl = parse_libsvm(args.unlabeled, n_features=model.feature_dim) \
                if args.format == "libsvm" else _load_labeled(args.unlabeled, args)
            result["train_pu_risk"] = empirical_pu_zero_one_risk(
                predict_forest(model, pos.x),
                predict_forest(model, unl.x),
                model.config.estimator,
                model.risk_engine().weights,
            )
    else:
        predictions = _read_label_file(args.predictions)
        if len(predictions) != len(data.y):
            raise DataError(
                "prediction/truth length mismatch: %d vs %d"
                % (len(predictions), len(data.y))
            )
        summary = evaluate(predictions, data.y)
        result["accuracy"] = summary.accuracy
        result["f_score"] = summary.f_score
        result["test_pn_risk"] = empirical_pn_zero_one_risk(predictions, data.y)
    print(json.dumps(result, sort_keys=True))
    if args.output:
        with open(args.output, "w") as handle:
            keys = ["run_seed", "accuracy", "f_score", "train_pu_risk",
                    "test_pn_risk"]
            handle.write(",".join(keys) + "\n")
            handle.write(",".join(
                "" if result[k] is None else repr(result[k]) for k in keys
            ) + "\n")
    return 0


def _parse_grid(text, problems):
    try:
        width_text, height_text = text.lower().split("x")
        width, height = int(width_text), int(height_text)
        if width < 1 or height < 1:
            raise ValueError
        return width, height
    except ValueError:
        problems.append("--grid must look like WxH, e.g. 28x28")
        return None


def cmd_importance(args):
    problems = []
    grid = None
    if args.grid is not None:
        grid = _parse_grid(args.grid, problems)
        if not args.pgm:
            problems.append("--grid requires --pgm PATH for the image output")
    elif args.pgm:
        problems.append("--pgm requires --grid WxH")
    if problems:
        _fail(problems)
    model = load_model(args.model)
    report = risk_reduction_importance(model)
    if grid is not None and grid[0] * grid[1] != model.feature_dim:
        raise ConfigError(
            "grid %dx%d does not match the %d model features"
            % (grid[0], grid[1], model.feature_dim)
        )
    if args.output:
        with open(args.output, "w") as handle:
            write_importance_csv(report, handle)
    else:
        write_importance_csv(report, sys.stdout)
    if grid is not None:
        write_importance_pgm(report.raw, grid[0], grid[1], args.pgm)
    return 0


def cmd_feature_curve(args):
    problems = []
    config = _forest_config_from_args(args, problems)
    _positive_label_for(args, problems)
    if args.replications is not None and args.replications < 1:
        problems.append("--replications must be at least 1")
    try:
        k_list = [int(part) for part in args.k.split(",") if part.strip()]
    except ValueError:
        k_list = []
        problems.append("--k must be a comma-separated list of integers")
    if not k_list:
        problems.append("--k must name at least one feature count")
    method = _CLI_METHODS.get(args.method)
    if method == SUPERVISED_PN_ET:
        if not args.data:
            problems.append("supervised-pn-et trains from a labeled file (-d)")
    elif not (args.positive and args.unlabeled):
        problems.append("feature-curve requires -p and -u for PU methods")
    if problems:
        _fail(problems)
    replications = args.replications if args.replications is not None else 5
    if method == SUPERVISED_PN_ET:
        data = _load_labeled(args.data, args)
        x_pos, x_other = data.x[data.y == 1], data.x[data.y == -1]
    else:
        pos = _load_features(args.positive, args)
        unl = _load_features(args.unlabeled, args)
        width = max(pos.x.shape[1], unl.x.shape[1])
        x_pos = _pad_columns(pos.x, width)
        x_other = _pad_columns(unl.x, width)
    test = _load_labeled(args.test, args) if args.format == "csv" else parse_libsvm(
        args.test, n_features=x_pos.shape[1],
        positive_label=float(args.positive_label))
    base = train_forest(x_pos, x_other, config)
    report = risk_reduction_importance(base)
    rows = feature_curve(x_pos, x_other, test.x, test.y, config, report,
                         k_list, replications)
    text = "k,mean_accuracy\n" + "".join(
        "%d,%s\n" % (k, repr(acc)) for k, acc in rows
    )
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _reproduce_method_specs(text):
    if not text:
        return [
            ("pu-et", UPU, "quadratic"),
            ("pu-et", UPU, "logistic"),
            ("pu-et", NNPU, "quadratic"),
            ("pu-et", NNPU, "logistic"),
            ("supervised", None, "quadratic"),
            ("naive", None, "quadratic"),
            ("bagging", None, "quadratic"),
        ]
    specs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token in ("supervised", "naive", "bagging"):
            specs.append((token, None, "quadratic"))
            continue
        parts = token.split(":")
        if len(parts) != 3 or parts[0] != "pu-et":
            raise ConfigError(
                "bad method spec %r; use pu-et:ESTIMATOR:LOSS, naive, bagging "
                "or supervised" % token
            )
        check_combination(parts[1], parts[2])
        if parts[1] == PN:
            raise ConfigError("pu-et runs the upu or nnpu estimator")
        specs.append(("pu-et", parts[1], parts[2]))
    if not specs:
        raise ConfigError("--methods named no methods")
    return specs


def run_reproduction(data_path, methods=None, replications=5, trees=100,
                     n_positive=1000, test_fraction=0.2, seed=0, jobs=1,
                     positive_label=1.0):
    """Train/evaluate the tree methods on a labeled LIBSVM dataset.

    One 80/20-style train/test split is drawn from ``seed``; each
    replication then samples a fresh P set and trains with its own forest
    seed, the same scenario being shared by every method so rows are
    comparable.  Returns one summary dict per method.
    """
    specs = _reproduce_method_specs(methods) if isinstance(methods, str) or methods is None \
        else methods
    data = parse_libsvm(data_path, positive_label=positive_label)
    n = len(data.y)
    if n < 10:
        raise DataError("dataset too small to split")
    order = np.random.default_rng(seed).permutation(n)
    n_test = int(round(n * test_fraction))
    test_rows, train_rows = order[:n_test], order[n_test:]
    x_train, y_train = data.x[train_rows], data.y[train_rows]
    x_test, y_test = data.x[test_rows], data.y[test_rows]
    train_pos = x_train[y_train == 1]
    train_neg = x_train[y_train == -1]

    scenarios = []
    for rep in range(replications):
        rep_seed = seed + 1 + rep
        rng = np.random.default_rng(rep_seed)
        pos_rows = np.flatnonzero(y_train == 1)
        if len(pos_rows) < n_positive:
            raise DataError(
                "scenario needs %d positives but the training split has %d"
                % (n_positive, len(pos_rows))
            )
        chosen = rng.choice(pos_rows, size=n_positive, replace=False)
        prior = len(pos_rows) / len(y_train)
        scenarios.append((rep_seed, x_train[chosen], x_train.copy(), prior))

    rows = []
    for kind, estimator, loss in specs:
        accs, fscores, train_risks, test_risks = [], [], [], []
        for rep_seed, x_pos, x_unl, prior in scenarios:
            if kind == "pu-et":
                config = ForestConfig(method=PU_ET, n_trees=trees,
                                      estimator=estimator, loss=loss,
                                      prior=prior, seed=rep_seed, jobs=jobs)
                model = train_forest(x_pos, x_unl, config)
            elif kind == "naive":
                config = ForestConfig(method=NAIVE_PU_ET, n_trees=trees,
                                      loss=loss, seed=rep_seed, jobs=jobs)
                model = train_forest(x_pos, x_unl, config)
            elif kind == "bagging":
                config = ForestConfig(method=PU_BAGGING_ET, n_trees=trees,
                                      loss=loss, seed=rep_seed, jobs=jobs)
                model = train_forest(x_pos, x_unl, config)
            else:
                config = ForestConfig(method=SUPERVISED_PN_ET, n_trees=trees,
                                      loss=loss, seed=rep_seed, jobs=jobs)
                model = train_forest(train_pos, train_neg, config)
            predictions = predict_forest(model, x_test)
            summary = evaluate(predictions, y_test)
            accs.append(summary.accuracy)
            fscores.append(summary.f_score)
            test_risks.append(empirical_pn_zero_one_risk(predictions, y_test))
            if kind == "pu-et":
                train_risks.append(empirical_pu_zero_one_risk(
                    predict_forest(model, x_pos),
                    predict_forest(model, x_unl),
                    estimator,
                    model.risk_engine().weights,
                ))
        name = "pu-et:%s:%s" % (estimator, loss) if kind == "pu-et" else kind
        row = {
            "method": name,
            "acc_mean": float(np.mean(accs)),
            "acc_sd": float(np.std(accs, ddof=1)) if len(accs) > 1 else 0.0,
            "f_mean": float(np.mean(fscores)),
            "f_sd": float(np.std(fscores, ddof=1)) if len(fscores) > 1 else 0.0,
            "test_pn_risk_mean": float(np.mean(test_risks)),
            "train_pu_risk_mean":
                float(np.mean(train_risks)) if train_risks else None,
        }
        rows.append(row)
    return rows


def cmd_reproduce(args):
    problems = []
    if args.replications is not None and args.replications < 1:
        problems.append("--replications must be at least 1")
    if args.trees is not None and args.trees < 1:
        problems.append("--trees must be at least 1")
    if args.n_positive is not None and args.n_positive < 1:
        problems.append("--n-positive must be at least 1")
    if args.test_fraction is not None and not 0.0 < args.test_fraction < 1.0:
        problems.append("--test-fraction must lie strictly inside (0, 1)")
    try:
        specs = _reproduce_method_specs(args.methods)
    except ConfigError as exc:
        specs = None
        problems.append(str(exc))
    if problems:
        _fail(problems)
    try:
        with open(args.data):
            pass
    except OSError:
        print("dataset file %r is missing.\n\n%s" % (args.data, FETCH_INSTRUCTIONS),
              file=sys.stderr)
        return 3
    rows = run_reproduction(
        args.data,
        methods=specs,
        replications=args.replications if args.replications is not None else 5,
        trees=args.trees if args.trees is not None else 100,
        n_positive=args.n_positive if args.n_positive is not None else 1000,
        test_fraction=args.test_fraction if args.test_fraction is not None else 0.2,
        seed=args.seed if args.seed is not None else 0,
        jobs=args.jobs if args.jobs is not None else 1,
        positive_label=float(args.positive_label),
    )
    header = ("method,acc_mean,acc_sd,f_mean,f_sd,"
              "train_pu_risk_mean,test_pn_risk_mean")
    lines = [header]
    for row in rows:
        lines.append(",".join([
            row["method"],
            "%.4f" % (100.0 * row["acc_mean"]),
            "%.4f" % (100.0 * row["acc_sd"]),
            "%.4f" % (100.0 * row["f_mean"]),
            "%.4f" % (100.0 * row["f_sd"]),
            "" if row["train_pu_risk_mean"] is None
            else "%.4f" % row["train_pu_risk_mean"],
            "%.4f" % row["test_pn_risk_mean"],
        ]))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    return 0


_COMMANDS = {
    "train": (cmd_train, {**_FOREST_DEFAULTS, **_DATA_DEFAULTS}),
    "predict": (cmd_predict, dict(_DATA_DEFAULTS)),
    "evaluate": (cmd_evaluate, dict(_DATA_DEFAULTS)),
    "importance": (cmd_importance, {}),
    "feature-curve": (cmd_feature_curve, {**_FOREST_DEFAULTS, **_DATA_DEFAULTS,
                                          "replications": None}),
    "reproduce": (cmd_reproduce, {"replications": None, "trees": None,
                                  "n_positive": None, "test_fraction": None,
                                  "seed": None, "jobs": None, "methods": None,
                                  "positive_label": "1"}),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, defaults = _COMMANDS[args.command]
    try:
        _apply_config_file(args, defaults)
        return handler(args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except DataError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except InternalError as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
