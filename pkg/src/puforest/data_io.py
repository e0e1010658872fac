"""Dataset ingestion (sparse LIBSVM text and CSV), PU scenario
construction and optional min-max scaling.

Parsed matrices are dense float64: the tree kernels index feature columns
directly, so sparse inputs are densified at load time (a memory estimate
is included in the docstring of :func:`parse_libsvm`).
"""

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DataError


@dataclass
class LabeledDataset:
    """Dense feature matrix with {-1, +1} labels."""

    x: np.ndarray
    y: np.ndarray
    feature_names: Optional[list] = None


@dataclass
class PUDataset:
    """A PU training scenario: positives, unlabeled pool and the class prior."""

    x_pos: np.ndarray
    x_unl: np.ndarray
    prior: float


def _open_maybe(source):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r"), True


def parse_libsvm(source, n_features=None, positive_label=1.0):
    """Parse LIBSVM text (``label idx:val ...`` with 1-based ascending
    indices) into a dense dataset.

    Rows are densified with absent indices set to 0, so a file with n rows
    and d features needs about ``8 n d`` bytes.  ``n_features`` fixes the
    dimension; when omitted it is inferred as the largest index seen.
    Labels equal to ``positive_label`` (numeric comparison) map to +1 and
    everything else to -1.

    Raises
    ------
    DataError
        On malformed lines, non-ascending indices or unparseable labels,
        with the offending line number.
    """
    handle, owned = _open_maybe(source)
    rows = []
    labels = []
    max_index = 0
    try:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.split()
            try:
                label = float(tokens[0])
            except ValueError:
                raise DataError("line %d: unparseable label %r" % (lineno, tokens[0]))
            entries = []
            previous = 0
            for token in tokens[1:]:
                index_text, _, value_text = token.partition(":")
                try:
                    index = int(index_text)
                    value = float(value_text)
                except ValueError:
                    raise DataError("line %d: malformed entry %r" % (lineno, token))
                if index <= previous:
                    raise DataError(
                        "line %d: feature indices must be ascending and 1-based"
                        % lineno
                    )
                previous = index
                entries.append((index, value))
            if entries:
                max_index = max(max_index, entries[-1][0])
            rows.append(entries)
            labels.append(1 if label == positive_label else -1)
    finally:
        if owned:
            handle.close()
    dim = max_index if n_features is None else n_features
    if max_index > dim:
        raise DataError(
            "file uses feature index %d but %d features were requested"
            % (max_index, dim)
        )
    x = np.zeros((len(rows), dim))
    for i, entries in enumerate(rows):
        for index, value in entries:
            x[i, index - 1] = value
    return LabeledDataset(x, np.array(labels, dtype=np.int64))


def write_libsvm(dataset, handle):
    """Write a dataset back out as LIBSVM text (zeros omitted)."""
    for row, label in zip(dataset.x, dataset.y):
        parts = ["%d" % label]
        for index in np.flatnonzero(row != 0.0):
            parts.append("%d:%s" % (index + 1, format(row[index], ".17g")))
        handle.write(" ".join(parts) + "\n")


def _labels_match(cell, positive):
    try:
        return float(cell) == float(positive)
    except (TypeError, ValueError):
        return str(cell).strip() == str(positive).strip()


def parse_csv(source, label_column, positive_label):
    """Parse a headed CSV with numeric features and one label column.

    Features keep their column order (the label column is dropped); a row
    labels +1 exactly when its label cell equals ``positive_label``
    (numerically when both sides parse as numbers, else as strings).
    """
    handle, owned = _open_maybe(source)
    try:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("CSV file has no header row")
        if label_column not in header:
            raise DataError("label column %r not found in header" % label_column)
        label_at = header.index(label_column)
        names = [name for i, name in enumerate(header) if i != label_at]
        rows = []
        labels = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise DataError(
                    "line %d: expected %d cells, got %d"
                    % (lineno, len(header), len(record))
                )
            values = []
            for column, cell in enumerate(record):
                if column == label_at:
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise DataError(
                        "line %d, column %r: non-numeric cell %r"
                        % (lineno, header[column], cell)
                    )
            rows.append(values)
            labels.append(1 if _labels_match(record[label_at], positive_label) else -1)
    finally:
        if owned:
            handle.close()
    x = np.array(rows) if rows else np.zeros((0, len(names)))
    return LabeledDataset(x, np.array(labels, dtype=np.int64), names)


def write_csv(dataset, handle, label_column="label"):
    """Write a dataset as headed CSV, label column last."""
    names = dataset.feature_names or [
        "f%d" % i for i in range(dataset.x.shape[1])
    ]
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(list(names) + [label_column])
    for row, label in zip(dataset.x, dataset.y):
        writer.writerow([format(v, ".17g") for v in row] + ["%d" % label])


def make_pu_scenario(data, n_positive, rng):
    """Build a PU training scenario from labeled data.

    Samples ``n_positive`` positives uniformly without replacement for the
    P set, uses the entire dataset as the unlabeled set, and takes the
    class prior as the empirical positive fraction of the full data.
    """
    positive_rows = np.flatnonzero(data.y == 1)
    if len(positive_rows) < n_positive:
        raise DataError(
            "scenario needs %d positives but the data has only %d"
            % (n_positive, len(positive_rows))
        )
    chosen = rng.choice(positive_rows, size=n_positive, replace=False)
    prior = len(positive_rows) / len(data.y)
    return PUDataset(data.x[chosen], data.x.copy(), prior)


def min_max_scale(train, others=()):
    """Affine per-feature map of the training matrix onto [0, 1].

    Constant features map to 0.  The identical map is applied to each
    matrix in ``others`` (whose values may leave [0, 1]).

    Returns
    -------
    (scaled_train, scaled_others, mins, maxs)
        ``scaled_others`` is a list in the order given; ``mins``/``maxs``
        are the per-feature training extremes defining the map.
    """
    train = np.asarray(train, dtype=np.float64)
    if train.size == 0:
        raise DataError("cannot fit a scaler on an empty matrix")
    mins = train.min(axis=0)
    maxs = train.max(axis=0)
    span = maxs - mins
    scale = np.where(span > 0.0, 1.0 / np.where(span > 0.0, span, 1.0), 0.0)
    scaled_train = (train - mins) * scale
    scaled_others = [
        (np.asarray(other, dtype=np.float64) - mins) * scale for other in others
    ]
    return scaled_train, scaled_others, mins, maxs


def write_scaler_csv(mins, maxs, handle):
    """Export the per-feature scaling map as ``feature,min,max`` rows."""
    handle.write("feature,min,max\n")
    for feature, (lo, hi) in enumerate(zip(mins, maxs)):
        handle.write(
            "%d,%s,%s\n" % (feature, format(lo, ".17g"), format(hi, ".17g"))
        )
