"""Split search: threshold enumeration, the exact sorted sweep and the
randomized extra-trees candidate sampler.

The child convention is fixed throughout: examples with ``feature <=
threshold`` go left and the rest go right.  Serialized models record this
convention implicitly through the format version.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .exceptions import ConfigError, InternalError

EXACT = "exact"
RANDOM = "random"

SQRT_FEATURES = "sqrt"


@dataclass(frozen=True)
class SplitterConfig:
    """How candidate splits are generated at a node.

    ``mode`` is ``"exact"`` (best midpoint per sampled feature via the
    sorted sweep) or ``"random"`` (extra-trees style random thresholds).
    ``n_features`` is the number of features sampled per node, or the
    string ``"sqrt"`` for ceil(sqrt(d)).  ``n_thresholds`` only applies in
    random mode.
    """

    mode: str = RANDOM
    n_features: Union[int, str] = SQRT_FEATURES
    n_thresholds: int = 1

    def __post_init__(self):
        if self.mode not in (EXACT, RANDOM):
            raise ConfigError("split mode must be %r or %r" % (EXACT, RANDOM))
        if self.n_features != SQRT_FEATURES:
            if not isinstance(self.n_features, int) or self.n_features < 1:
                raise ConfigError("n_features must be a positive integer or 'sqrt'")
        if not isinstance(self.n_thresholds, int) or self.n_thresholds < 1:
            raise ConfigError("n_thresholds must be a positive integer")

    def feature_budget(self, n_total):
        """Number of features to sample at a node with ``n_total`` features."""
        if self.n_features == SQRT_FEATURES:
            return min(math.ceil(math.sqrt(n_total)), n_total)
        return min(self.n_features, n_total)


@dataclass
class SplitCandidate:
    """A (feature, threshold) pair, with its risk reduction once scored."""

    feature: int
    threshold: float
    reduction: Optional[float] = None


class NodeView:
    """Read-only view of one node's examples inside the training matrices.

    ``rows_pos`` and ``rows_unl`` index into ``x_pos`` and ``x_unl``; they
    default to all rows, making ``NodeView(P, U)`` the root node.
    """

    __slots__ = ("x_pos", "x_unl", "rows_pos", "rows_unl")

    def __init__(self, x_pos, x_unl, rows_pos=None, rows_unl=None):
        self.x_pos = x_pos
        self.x_unl = x_unl
        self.rows_pos = np.arange(len(x_pos)) if rows_pos is None else rows_pos
        self.rows_unl = np.arange(len(x_unl)) if rows_unl is None else rows_unl

    @property
    def n_pos(self):
        return len(self.rows_pos)

    @property
    def n_unl(self):
        return len(self.rows_unl)

    @property
    def n_features(self):
        return self.x_pos.shape[1]

    def column(self, feature):
        """Feature values of the node's examples, one array per group."""
        return (
            self.x_pos[self.rows_pos, feature],
            self.x_unl[self.rows_unl, feature],
        )


def enumerate_thresholds(values):
    """Midpoints between consecutive distinct values of a sorted array.

    Returns an empty array when all values are equal, so a constant
    feature yields no candidate thresholds.
    """
    values = np.asarray(values, dtype=np.float64)
    change = np.flatnonzero(values[:-1] != values[1:])
    return (values[change] + values[change + 1]) / 2.0


def _column_span(pos_vals, unl_vals):
    lo = math.inf
    hi = -math.inf
    if len(pos_vals):
        lo = pos_vals.min()
        hi = pos_vals.max()
    if len(unl_vals):
        lo = min(lo, unl_vals.min())
        hi = max(hi, unl_vals.max())
    return lo, hi


def _draw_nonconstant_features(view, wanted, rng):
    """Sample up to ``wanted`` non-constant features, uniformly without
    replacement.

    Walks a uniform permutation of all features and keeps the non-constant
    ones, which draws the same distribution as sampling directly from the
    non-constant subset.  Returns (feature, lo, hi, pos_vals, unl_vals)
    tuples so callers can reuse the fetched columns.
    """
    picked = []
    for f in rng.permutation(view.n_features):
        pos_vals, unl_vals = view.column(f)
        lo, hi = _column_span(pos_vals, unl_vals)
        if lo < hi:
            picked.append((int(f), lo, hi, pos_vals, unl_vals))
            if len(picked) == wanted:
                break
    return picked


def _draw_threshold(lo, hi, pos_vals, unl_vals, rng):
    # Uniform over the open interval (lo, hi); draws landing exactly on an
    # observed value (or an endpoint) are redrawn so both children stay
    # nonempty and no example sits on the boundary.
    while True:
        t = rng.uniform(lo, hi)
        if lo < t < hi and not np.any(pos_vals == t) and not np.any(unl_vals == t):
            return float(t)


def best_threshold_exact(feature, pos_vals, unl_vals, engine, parent_risk=None):
    """Best midpoint threshold for one feature via a single sorted sweep.

    Sorts the node's values once, then walks the boundaries between
    distinct values keeping integer left-side counts, so the whole sweep
    costs O(n log n + m) while each reduction equals a from-scratch
    evaluation at that midpoint bit for bit.  Returns ``None`` when the
    feature is constant on the node.  Ties in reduction resolve to the
    lowest threshold.
    """
    n_pos = len(pos_vals)
    n_unl = len(unl_vals)
    vals = np.concatenate([pos_vals, unl_vals])
    from_pos = np.zeros(len(vals), dtype=np.int64)
    from_pos[:n_pos] = 1
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    sorted_pos = from_pos[order]
    change = np.flatnonzero(sorted_vals[:-1] != sorted_vals[1:])
    if change.size == 0:
        return None
    thresholds = (sorted_vals[change] + sorted_vals[change + 1]) / 2.0
    left_pos = np.cumsum(sorted_pos)[change]
    left_unl = (change + 1) - left_pos
    if parent_risk is None:
        parent_risk = engine.risk(n_pos, n_unl)
    left_risks = engine.risks(left_pos, left_unl)
    right_risks = engine.risks(n_pos - left_pos, n_unl - left_unl)
    reductions = engine.split_reductions(parent_risk, left_risks, right_risks)
    best = int(np.argmax(reductions))  # first maximum = lowest threshold
    reduction = float(reductions[best])
    if math.isnan(reduction):
        raise InternalError("risk reduction evaluated to NaN")
    return SplitCandidate(feature, float(thresholds[best]), reduction)


def sample_split_candidates(view, config, rng):
    """Unscored random split candidates for a node (extra-trees rule).

    Samples ``config.feature_budget(d)`` features uniformly without
    replacement from the node's non-constant features (fewer if fewer
    exist), then draws ``config.n_thresholds`` thresholds per feature
    uniformly from the open (min, max) interval of that feature.  Returns
    an empty list when every feature is constant; the caller must then
    make the node a leaf.
    """
    if config.mode != RANDOM:
        raise ConfigError("candidate sampling applies to the random mode only")
    picked = _draw_nonconstant_features(view, config.feature_budget(view.n_features), rng)
    candidates = []
    for feature, lo, hi, pos_vals, unl_vals in picked:
        for _ in range(config.n_thresholds):
            candidates.append(
                SplitCandidate(feature, _draw_threshold(lo, hi, pos_vals, unl_vals, rng))
            )
    return candidates


def _better(current, challenger):
    # Higher reduction wins; ties break to the lowest feature index, then
    # the lowest threshold, so runs are reproducible under a fixed seed.
    if current is None:
        return challenger
    if challenger.reduction != current.reduction:
        return challenger if challenger.reduction > current.reduction else current
    if (challenger.feature, challenger.threshold) < (current.feature, current.threshold):
        return challenger
    return current


def find_split(view, config, engine, rng, parent_risk=None):
    """Best split for a node, or ``None`` when it must become a leaf.

    In exact mode, runs the sorted sweep on each sampled non-constant
    feature and takes the global argmax by reduction; in random mode,
    scores the sampled random candidates.  ``+inf`` reductions beat all
    finite ones; ties break to the lowest feature index, then threshold.
    """
    if parent_risk is None:
        parent_risk = engine.risk(view.n_pos, view.n_unl)
    picked = _draw_nonconstant_features(view, config.feature_budget(view.n_features), rng)
    best = None
    if config.mode == EXACT:
        for feature, _lo, _hi, pos_vals, unl_vals in picked:
            cand = best_threshold_exact(feature, pos_vals, unl_vals, engine, parent_risk)
            if cand is not None:
                best = _better(best, cand)
    else:
        n_pos = view.n_pos
        n_unl = view.n_unl
        for feature, lo, hi, pos_vals, unl_vals in picked:
            for _ in range(config.n_thresholds):
                t = _draw_threshold(lo, hi, pos_vals, unl_vals, rng)
                left_pos = int(np.count_nonzero(pos_vals <= t))
                left_unl = int(np.count_nonzero(unl_vals <= t))
                reduction = engine.split_reduction(
                    parent_risk,
                    engine.risk(left_pos, left_unl),
                    engine.risk(n_pos - left_pos, n_unl - left_unl),
                )
                if math.isnan(reduction):
                    raise InternalError("risk reduction evaluated to NaN")
                best = _better(best, SplitCandidate(feature, t, reduction))
    if best is None or best.reduction == -math.inf:
        return None
    return best
