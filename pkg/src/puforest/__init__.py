"""Decision trees and Extra-Trees ensembles for positive-unlabeled or
fully labeled data, trained by recursive greedy risk minimization."""

from .data_io import (
    LabeledDataset,
    PUDataset,
    make_pu_scenario,
    min_max_scale,
    parse_csv,
    parse_libsvm,
    write_csv,
    write_libsvm,
)
from .exceptions import ConfigError, DataError, InternalError
from .forest import (
    ALL_METHODS,
    ForestConfig,
    ForestModel,
    load_model,
    predict_forest,
    save_model,
    train_forest,
)
from .importance import (
    ImportanceReport,
    feature_curve,
    normalized_importance,
    risk_reduction_importance,
    write_importance_csv,
    write_importance_pgm,
)
from .losses import (
    ALL_LOSSES,
    PnNodeCounts,
    loss_value,
    pn_optimal_partial_risk,
)
from .metrics import (
    EvalSummary,
    empirical_pn_zero_one_risk,
    empirical_pu_zero_one_risk,
    evaluate,
)
from .risk import (
    ALL_ESTIMATORS,
    ExampleWeights,
    NodeStats,
    RiskEngine,
    node_stats,
    optimal_constant_prediction,
    optimal_partial_risk,
    risk_reduction,
)
from .splitter import (
    NodeView,
    SplitCandidate,
    SplitterConfig,
    best_threshold_exact,
    enumerate_thresholds,
    find_split,
    sample_split_candidates,
)
from .tree import (
    Internal,
    Leaf,
    StoppingRule,
    build_tree,
    predict_tree,
    should_terminate,
)

__version__ = "0.1.0"
