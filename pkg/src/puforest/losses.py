"""Pointwise loss functions and closed-form optimal constant-prediction
risks for fully labeled node data.

All risk arithmetic is 64-bit floating point.  The closed forms here cover
the fully labeled (positive/negative) case; the positive-unlabeled
estimators build on the same expressions in :mod:`puforest.risk`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, InternalError

QUADRATIC = "quadratic"
LOGISTIC = "logistic"
SIGMOID = "sigmoid"
SAVAGE = "savage"

ALL_LOSSES = (QUADRATIC, LOGISTIC, SIGMOID, SAVAGE)


def check_loss(loss):
    """Validate a loss name, returning it unchanged.

    Raises
    ------
    ConfigError
        If ``loss`` is not one of ``quadratic``, ``logistic``, ``sigmoid``
        or ``savage`` (lowercase).
    """
    if loss not in ALL_LOSSES:
        raise ConfigError(
            "unknown loss %r; expected one of %s" % (loss, ", ".join(ALL_LOSSES))
        )
    return loss


def _sigmoid_of_margin(margin):
    # 1 / (1 + exp(margin)), computed without overflow for large |margin|
    if margin >= 0.0:
        e = math.exp(-margin)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(margin))


def loss_value(loss, v, y):
    """Pointwise loss of predicting score ``v`` for a label ``y`` in {-1, +1}.

    The supported losses, with margin ``m = v * y``:

    * ``quadratic``: ``(1 - m)^2``
    * ``logistic``:  ``ln(1 + exp(-m))``
    * ``sigmoid``:   ``1 / (1 + exp(m))``
    * ``savage``:    ``4 / (1 + exp(m))^2``

    All are nonnegative and nonincreasing in the margin.
    """
    check_loss(loss)
    margin = v * y
    if loss == QUADRATIC:
        return (1.0 - margin) ** 2
    if loss == LOGISTIC:
        # softplus(-margin), stable for large |margin|
        z = -margin
        return max(z, 0.0) + math.log1p(math.exp(-abs(z)))
    s = _sigmoid_of_margin(margin)
    if loss == SIGMOID:
        return s
    return 4.0 * s * s


@dataclass(frozen=True)
class PnNodeCounts:
    """Class counts at a fully labeled node plus the global per-example
    weight (1/|D| for the full training set)."""

    n_pos: int
    n_neg: int
    w: float


def _entropy_terms(q_pos, q_neg):
    # -(q+ ln q+ + q- ln q-); caller guarantees both proportions positive.
    # Written as two symmetric addends so that swapping the class roles
    # gives bit-identical results (mathematical ties stay exact ties).
    return -(q_pos * np.log(q_pos) + q_neg * np.log(q_neg))


def _pn_min_risks(loss, pos_mass, neg_mass):
    """Minimum constant-prediction partial risk from per-class weight masses.

    Vectorized over equally shaped float arrays ``pos_mass = n_pos * w`` and
    ``neg_mass = n_neg * w``; both must be nonnegative and not both zero.
    The expressions are kept in the exact class-symmetric form shared with
    the PU engine, so routing labeled counts through either path gives
    identical floats and mirrored splits tie bit for bit.
    """
    if loss == SIGMOID:
        return np.minimum(pos_mass, neg_mass)
    s = pos_mass + neg_mass
    if loss in (QUADRATIC, SAVAGE):
        return 4.0 * (pos_mass * neg_mass) / s
    if loss == LOGISTIC:
        interior = (pos_mass > 0.0) & (neg_mass > 0.0)
        q_pos = np.where(interior, pos_mass / s, 0.5)
        q_neg = np.where(interior, neg_mass / s, 0.5)
        return np.where(interior, s * _entropy_terms(q_pos, q_neg), 0.0)
    raise InternalError("unhandled loss %r" % (loss,))


def pn_optimal_partial_risk(loss, counts):
    """Minimum over constant predictions of the node's partial empirical risk.

    Closed forms per loss (``q+``, ``q-`` the class proportions, ``|S|`` the
    node size):

    * ``quadratic``: ``4 w n_pos n_neg / |S|`` (twice the size-weighted Gini)
    * ``logistic``:  ``|S| w H(q+)`` with the convention ``0 ln 0 = 0``
    * ``savage``:    identical value to ``quadratic``
    * ``sigmoid``:   ``w min(n_pos, n_neg)``

    Parameters
    ----------
    loss : str
        One of the four supported loss names.
    counts : PnNodeCounts
        Node class counts; ``n_pos + n_neg`` must be at least 1.

    Returns
    -------
    float
        The minimum partial risk; always finite and nonnegative.
    """
    check_loss(loss)
    if counts.n_pos < 0 or counts.n_neg < 0:
        raise InternalError("negative class count")
    if counts.n_pos + counts.n_neg < 1:
        raise InternalError("partial risk of an empty node is undefined")
    pos = np.array([counts.n_pos * counts.w])
    neg = np.array([counts.n_neg * counts.w])
    return float(_pn_min_risks(loss, pos, neg)[0])
