"""Node statistics and closed-form optimal partial risks for the
positive-unlabeled risk estimators.

The unbiased estimator (``upu``) rewrites the expected risk in PU terms and
can reach minus infinity on nodes holding positives but no unlabeled
examples; the nonnegative estimator (``nnpu``) clamps the implied
negative-class term at zero.  Fully labeled data (``pn``) is routed through
the same engine with per-class weight masses.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, InternalError
from .losses import (
    ALL_LOSSES,
    LOGISTIC,
    QUADRATIC,
    SIGMOID,
    _entropy_terms,
    _pn_min_risks,
    check_loss,
)

UPU = "upu"
NNPU = "nnpu"
PN = "pn"

ALL_ESTIMATORS = (UPU, NNPU, PN)

# Losses with a known closed-form optimum per estimator.  The paperless
# combinations (savage under PU, sigmoid under nnpu) are rejected rather
# than guessed.
_SUPPORTED_LOSSES = {
    UPU: (QUADRATIC, LOGISTIC, SIGMOID),
    NNPU: (QUADRATIC, LOGISTIC),
    PN: ALL_LOSSES,
}


def check_estimator(estimator):
    """Validate an estimator name, returning it unchanged."""
    if estimator not in ALL_ESTIMATORS:
        raise ConfigError(
            "unknown estimator %r; expected one of %s"
            % (estimator, ", ".join(ALL_ESTIMATORS))
        )
    return estimator


def check_combination(estimator, loss):
    """Reject (estimator, loss) pairs without a closed-form optimum."""
    check_estimator(estimator)
    check_loss(loss)
    if loss not in _SUPPORTED_LOSSES[estimator]:
        raise ConfigError(
            "loss %r is not supported under the %r estimator" % (loss, estimator)
        )


@dataclass(frozen=True)
class ExampleWeights:
    """Global per-example weights, fixed once from the full training sets.

    ``pos_weight = prior / n_pos`` applies to every labeled positive and
    ``unl_weight = 1 / n_unl`` to every unlabeled example; they are never
    recomputed per node.
    """

    pos_weight: float
    unl_weight: float
    prior: float
    n_pos: int
    n_unl: int

    @classmethod
    def from_sizes(cls, prior, n_pos, n_unl):
        if not (0.0 < prior < 1.0):
            raise ConfigError("class prior must lie strictly inside (0, 1)")
        if n_pos < 1 or n_unl < 1:
            raise ConfigError("need at least one positive and one unlabeled example")
        return cls(prior / n_pos, 1.0 / n_unl, prior, n_pos, n_unl)


@dataclass(frozen=True)
class NodeStats:
    """Aggregated weight masses at one node.

    ``pos_mass`` is the total weight of the node's positives, ``neg_mass``
    the implied negative-class mass (which can be negative in PU mode), and
    ``pos_fraction`` the estimated positive proportion ``pos_mass /
    (pos_mass + neg_mass)`` -- at least 0, possibly above 1, and ``+inf``
    exactly when the node has positives but no unlabeled examples.  In
    fully labeled mode ``count_unl`` holds the negative-class count and
    ``pos_fraction`` is the plain positive proportion.
    """

    count_pos: int
    count_unl: int
    pos_mass: float
    neg_mass: float
    pos_fraction: float


def node_stats(count_pos, count_unl, weights):
    """Aggregate PU weight masses for a node with the given group counts.

    Parameters
    ----------
    count_pos, count_unl : int
        Number of positive and unlabeled examples at the node; at least one
        of them must be positive.
    weights : ExampleWeights
        The global per-example weights.

    Returns
    -------
    NodeStats
    """
    if count_pos < 0 or count_unl < 0:
        raise InternalError("negative node count")
    if count_pos + count_unl < 1:
        raise InternalError("statistics of an empty node are undefined")
    pos_mass = count_pos * weights.pos_weight
    # + 0.0 flushes IEEE negative zero so sign branches stay exact
    neg_mass = (count_unl * weights.unl_weight - pos_mass) + 0.0
    total = pos_mass + neg_mass
    fraction = pos_mass / total if total > 0.0 else math.inf
    return NodeStats(count_pos, count_unl, pos_mass, neg_mass, fraction)


def _pu_min_risks(estimator, loss, pos_mass, neg_mass):
    """Vectorized closed-form minimum partial risks from weight masses.

    ``pos_mass`` must be nonnegative and ``pos_mass + neg_mass`` (the
    unlabeled mass) nonnegative as well.  A zero total with positive
    ``pos_mass`` is the unbounded branch: the risk is ``-inf`` under the
    unbiased estimator and 0 under the nonnegative one.
    """
    neg_mass = neg_mass + 0.0  # flush -0.0
    if loss == SIGMOID:
        return np.minimum(pos_mass, neg_mass)
    s = pos_mass + neg_mass
    unbounded = s == 0.0  # positive proportion estimate is +inf
    over = neg_mass < 0.0  # proportion estimate in (1, inf)
    safe_s = np.where(unbounded, 1.0, s)
    if loss == QUADRATIC:
        vals = 4.0 * (pos_mass * neg_mass) / safe_s
        if estimator == UPU:
            return np.where(unbounded, -np.inf, vals)
        return np.where(unbounded | over, 0.0, vals)
    if loss == LOGISTIC:
        interior = (pos_mass > 0.0) & (neg_mass > 0.0)
        q_pos = np.where(interior, pos_mass / safe_s, 0.5)
        q_neg = np.where(interior, neg_mass / safe_s, 0.5)
        vals = np.where(interior, s * _entropy_terms(q_pos, q_neg), 0.0)
        if estimator == UPU:
            return np.where(unbounded | over, -np.inf, vals)
        return np.where(unbounded | over, 0.0, vals)
    raise InternalError("unhandled loss %r" % (loss,))


def optimal_partial_risk(estimator, loss, stats):
    """Closed-form minimum of the node's partial risk over constant scores.

    Case split, writing ``v`` for ``stats.pos_fraction`` and ``s`` for the
    total mass:

    * ``upu`` + ``quadratic``: ``-inf`` when ``v = +inf``, else ``4 s v (1-v)``
      (negative when ``v > 1``).
    * ``upu`` + ``logistic``: ``s H(v)`` for ``0 < v < 1``, 0 at ``v`` in
      {0, 1}, ``-inf`` for ``v > 1`` (including ``+inf``).
    * ``nnpu`` + ``quadratic``: 0 when ``v > 1`` (including ``+inf``), else
      ``4 s v (1-v)``.
    * ``nnpu`` + ``logistic``: ``s H(v)`` for ``0 < v < 1``, else 0.
    * ``upu`` + ``sigmoid``: ``min(pos_mass, neg_mass)``; never infinite.

    Fully labeled nodes are not accepted here; use
    :func:`puforest.losses.pn_optimal_partial_risk`.
    """
    check_estimator(estimator)
    if estimator == PN:
        raise ConfigError(
            "fully labeled nodes take pn_optimal_partial_risk, not the PU forms"
        )
    check_combination(estimator, loss)
    return float(
        _pu_min_risks(
            estimator, loss, np.array([stats.pos_mass]), np.array([stats.neg_mass])
        )[0]
    )


def optimal_constant_prediction(stats):
    """Optimal label in {-1, +1} for a constant prediction at the node.

    Predicts +1 iff the estimated positive proportion exceeds 0.5; the tie
    at exactly 0.5 predicts -1.  This rule is shared by both PU estimators
    and all supported losses, so it takes no estimator or loss argument.
    """
    return 1 if stats.pos_fraction > 0.5 else -1


def _reduction_value(parent_risk, children_risk):
    # children_risk may be -inf (never +inf); parent -inf only at degenerate
    # pure nodes that construction never splits -- gain nothing there.
    if parent_risk == -math.inf:
        return 0.0
    return parent_risk - children_risk  # finite - (-inf) = +inf


def risk_reduction(parent, left, right, estimator, loss):
    """Risk reduction of a split: parent optimum minus the children optima.

    ``+inf`` results occur when the parent risk is finite and a child hits
    the unbounded branch.  The children must partition the parent's counts
    and each hold at least one example.
    """
    if (
        left.count_pos + right.count_pos != parent.count_pos
        or left.count_unl + right.count_unl != parent.count_unl
    ):
        raise InternalError("child counts do not partition the parent node")
    if left.count_pos + left.count_unl < 1 or right.count_pos + right.count_unl < 1:
        raise InternalError("split produced an empty child")
    parent_risk = optimal_partial_risk(estimator, loss, parent)
    left_risk = optimal_partial_risk(estimator, loss, left)
    right_risk = optimal_partial_risk(estimator, loss, right)
    return _reduction_value(parent_risk, left_risk + right_risk)


class RiskEngine:
    """One (estimator, loss, weights) bundle evaluating nodes from counts.

    Group A holds labeled positives.  Group B holds unlabeled examples
    under the PU estimators and labeled negatives in fully labeled mode.
    Instances are immutable value objects and safe to share across threads.
    """

    def __init__(self, estimator, loss, weights=None, pn_weight=None):
        check_combination(estimator, loss)
        self.estimator = estimator
        self.loss = loss
        if estimator == PN:
            if pn_weight is None:
                raise ConfigError("pn mode requires the per-example weight")
            self.weights = None
            self.weight_a = float(pn_weight)
            self.weight_b = float(pn_weight)
        else:
            if weights is None:
                raise ConfigError("PU estimators require ExampleWeights")
            self.weights = weights
            self.weight_a = weights.pos_weight
            self.weight_b = weights.unl_weight

    def masses(self, count_a, count_b):
        """Weight masses (positive, implied negative) for group counts."""
        count_a = np.asarray(count_a)
        count_b = np.asarray(count_b)
        pos = count_a * self.weight_a
        if self.estimator == PN:
            neg = count_b * self.weight_b
        else:
            neg = (count_b * self.weight_b - pos) + 0.0
        return pos, neg

    def risks(self, count_a, count_b):
        """Vectorized optimal partial risks for arrays of group counts."""
        pos, neg = self.masses(count_a, count_b)
        if self.estimator == PN:
            return _pn_min_risks(self.loss, pos, neg)
        return _pu_min_risks(self.estimator, self.loss, pos, neg)

    def risk(self, count_a, count_b):
        return float(self.risks(np.array([count_a]), np.array([count_b]))[0])

    def fractions(self, count_a, count_b):
        """Estimated positive proportions for arrays of group counts."""
        pos, neg = self.masses(count_a, count_b)
        s = pos + neg
        positive_total = s > 0.0
        return np.where(positive_total, pos / np.where(positive_total, s, 1.0), np.inf)

    def prediction(self, count_a, count_b):
        """Optimal constant label in {-1, +1} for the node."""
        frac = float(self.fractions(np.array([count_a]), np.array([count_b]))[0])
        return 1 if frac > 0.5 else -1

    def stats(self, count_a, count_b):
        """NodeStats for the node (PU semantics, or per-class masses in pn mode)."""
        if self.estimator == PN:
            if count_a + count_b < 1:
                raise InternalError("statistics of an empty node are undefined")
            pos = count_a * self.weight_a
            neg = count_b * self.weight_b
            total = pos + neg
            frac = pos / total if total > 0.0 else math.inf
            return NodeStats(count_a, count_b, pos, neg, frac)
        return node_stats(count_a, count_b, self.weights)

    def is_pure(self, risk_value):
        """Whether a node with this optimal risk is pure (splitting stops).

        Purity means ``-inf`` under the unbiased estimator and exactly 0
        under the nonnegative and fully labeled ones; the comparisons are
        exact because the closed forms produce these values as explicit
        branch outcomes.
        """
        if self.estimator == UPU:
            return risk_value == -math.inf
        return risk_value == 0.0

    def split_reduction(self, parent_risk, left_risk, right_risk):
        """Scalar risk reduction given precomputed node risks."""
        return _reduction_value(parent_risk, left_risk + right_risk)

    def split_reductions(self, parent_risk, left_risks, right_risks):
        """Vectorized risk reductions given precomputed child risk arrays."""
        if parent_risk == -math.inf:
            return np.zeros_like(left_risks)
        return parent_risk - (left_risks + right_risks)
