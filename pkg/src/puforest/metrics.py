"""Evaluation metrics: accuracy, F-score and empirical zero-one risks
under the PU estimators (training data) and the plain misclassification
rate (labeled test data)."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError
from .risk import NNPU, UPU, check_estimator


@dataclass
class EvalSummary:
    """Confusion counts plus accuracy and positive-class F-score."""

    accuracy: float
    f_score: float
    tp: int
    fp: int
    tn: int
    fn: int


def evaluate(predictions, truth):
    """Accuracy and F-score of {-1, +1} predictions against true labels.

    The F-score is ``2 tp / (2 tp + fp + fn)`` for the positive class and
    defined as 0 when that denominator is 0.
    """
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape or predictions.ndim != 1:
        raise DataError(
            "predictions and truth must be 1-D arrays of equal length "
            "(got %s vs %s)" % (predictions.shape, truth.shape)
        )
    if predictions.size == 0:
        raise DataError("cannot evaluate zero predictions")
    tp = int(np.count_nonzero((predictions == 1) & (truth == 1)))
    fp = int(np.count_nonzero((predictions == 1) & (truth == -1)))
    tn = int(np.count_nonzero((predictions == -1) & (truth == -1)))
    fn = int(np.count_nonzero((predictions == -1) & (truth == 1)))
    accuracy = (tp + tn) / predictions.size
    denom = 2 * tp + fp + fn
    f_score = 2 * tp / denom if denom else 0.0
    return EvalSummary(accuracy, f_score, tp, fp, tn, fn)


def _zero_one(scores, label):
    # (1 - sign(v * y)) / 2 with sign(0) taken as +1 for determinism; model
    # outputs are hard labels so the v*y == 0 branch is unreachable here.
    scores = np.asarray(scores, dtype=np.float64)
    return (scores * label < 0.0).astype(np.float64)


def empirical_pu_zero_one_risk(pred_pos, pred_unl, estimator, weights):
    """Zero-one training risk of predictions under a PU estimator.

    Plugs the zero-one loss into the unbiased or nonnegative estimator
    over the training positives and unlabeled examples.  The unbiased
    value can be negative (bounded below by ``-prior``); the nonnegative
    one never is.
    """
    check_estimator(estimator)
    if estimator not in (UPU, NNPU):
        raise DataError("PU training risk requires the upu or nnpu estimator")
    pos_as_pos = weights.pos_weight * _zero_one(pred_pos, 1).sum()
    pos_as_neg = weights.pos_weight * _zero_one(pred_pos, -1).sum()
    unl_as_neg = weights.unl_weight * _zero_one(pred_unl, -1).sum()
    if estimator == UPU:
        return float(pos_as_pos - pos_as_neg + unl_as_neg)
    return float(pos_as_pos + max(0.0, unl_as_neg - pos_as_neg))


def empirical_pn_zero_one_risk(predictions, truth):
    """Misclassification rate, i.e. one minus accuracy."""
    return 1.0 - evaluate(predictions, truth).accuracy
