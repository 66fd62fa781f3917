"""Dataset ingestion, standardization, and discretization.

Everything downstream (plug-in estimators, ICA fits, the selection engine)
works off the two containers defined here: DataTable holds numeric columns
plus integer class labels, DiscretizedView holds the integer-coded columns
that the entropy estimators consume.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"

# a column whose values are all integral with at most this many distinct
# values is treated as categorical unless overridden
CATEGORICAL_MAX_LEVELS = 32


class DataError(ValueError):
    """Raised for unusable input data (bad files, bad columns, bad labels)."""


@dataclass
class DataTable:
    """Column-major numeric samples with integer class labels.

    columns: list of float64 vectors, one per feature, each of length N.
    feature_kinds: "continuous" or "categorical" per feature.
    labels: int64 class codes in [0, L); label_values maps code -> original.
    """

    columns: list
    feature_names: list
    feature_kinds: list
    labels: np.ndarray
    label_values: list = None
    load_report: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.columns) != len(self.feature_names):
            raise DataError("feature_names length does not match columns")
        if len(self.feature_kinds) != len(self.columns):
            raise DataError("feature_kinds length does not match columns")
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = self.labels.shape[0]
        cols = []
        for name, col in zip(self.feature_names, self.columns):
            arr = np.asarray(col, dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] != n:
                raise DataError("column %r does not have %d samples" % (name, n))
            if not np.all(np.isfinite(arr)):
                raise DataError("column %r contains non-finite values" % (name,))
            cols.append(arr)
        self.columns = cols
        if n == 0:
            raise DataError("zero usable rows")
        levels = np.unique(self.labels)
        if levels.size < 2:
            raise DataError("labels must contain at least 2 classes")
        if levels[0] != 0 or levels[-1] != levels.size - 1:
            raise DataError("label codes must cover [0, L) with every class present")
        if self.label_values is None:
            self.label_values = [int(v) for v in levels]

    @property
    def n_samples(self):
        return int(self.labels.shape[0])

    @property
    def n_features(self):
        return len(self.columns)

    @property
    def n_classes(self):
        return int(self.labels.max()) + 1


@dataclass
class DiscretizedView:
    """Integer codes per column, the substrate for plug-in entropies.

    codes[j] has values in [0, n_levels[j]); bin_edges[j] is None for
    categorical columns and an ascending interior-edge array otherwise.
    """

    codes: list
    bin_edges: list
    bin_count: int
    n_levels: list
    source: DataTable = None


def _is_categorical(values):
    if not np.all(values == np.floor(values)):
        return False
    return np.unique(values).size <= CATEGORICAL_MAX_LEVELS


def _infer_kinds(columns, names, overrides):
    overrides = overrides or {}
    kinds = []
    for name, col in zip(names, columns):
        if name in overrides:
            kinds.append(overrides[name])
        elif _is_categorical(col):
            kinds.append(CATEGORICAL)
        else:
            kinds.append(CONTINUOUS)
    return kinds


def _encode_labels(raw):
    """Map raw label cells (numeric or string) to codes 0..L-1.

    Codes follow sorted order of the distinct values, numerically when every
    value parses as a number and lexicographically otherwise.
    """
    try:
        numeric = [float(v) for v in raw]
    except (TypeError, ValueError):
        numeric = None
    if numeric is not None:
        distinct = sorted(set(numeric))
        lookup = {v: i for i, v in enumerate(distinct)}
        codes = np.array([lookup[v] for v in numeric], dtype=np.int64)
        values = [int(v) if float(v).is_integer() else v for v in distinct]
    else:
        distinct = sorted(set(raw))
        lookup = {v: i for i, v in enumerate(distinct)}
        codes = np.array([lookup[v] for v in raw], dtype=np.int64)
        values = list(distinct)
    return codes, values


def load_csv(path, label_column, delimiter=",", has_header=True,
             missing_policy="drop", categorical_overrides=None):
    """Parse a delimited text file into a DataTable.

    label_column may be a header name or a 0-based column index. Rows with
    missing cells are dropped (missing_policy="drop") or imputed with the
    column mode/median (missing_policy="impute"). A load report (rows read,
    rows dropped, inferred kinds) is attached to the result.
    """
    if missing_policy not in ("drop", "impute"):
        raise DataError("unknown missing_policy %r" % (missing_policy,))
    try:
        fh = open(path, "r", newline="")
    except OSError as exc:
        raise DataError("cannot read %s: %s" % (path, exc))
    with fh:
        reader = csv.reader(fh, delimiter=delimiter)
        rows = [row for row in reader if row]
    if not rows:
        raise DataError("empty file %s" % (path,))

    if has_header:
        header = [h.strip() for h in rows[0]]
        body = rows[1:]
    else:
        header = ["c%d" % i for i in range(len(rows[0]))]
        body = rows
    if isinstance(label_column, int):
        if not 0 <= label_column < len(header):
            raise DataError("label column index %d out of range" % label_column)
        label_idx = label_column
    else:
        if label_column not in header:
            raise DataError("label column %r absent from header" % (label_column,))
        label_idx = header.index(label_column)

    n_cols = len(header)
    feature_names = [h for i, h in enumerate(header) if i != label_idx]

    def parse_cell(cell):
        cell = cell.strip()
        if cell == "" or cell.lower() in ("na", "nan", "null"):
            return None
        try:
            return float(cell)
        except ValueError:
            raise DataError("non-numeric cell %r outside the label column" % cell)

    rows_read = len(body)
    parsed = []
    raw_labels = []
    dropped = 0
    for row in body:
        if len(row) != n_cols:
            dropped += 1
            continue
        cells = []
        missing = False
        label_missing = False
        for i, cell in enumerate(row):
            if i == label_idx:
                lab = cell.strip()
                label_missing = lab == ""
                continue
            value = parse_cell(cell)
            if value is None or not math.isfinite(value):
                missing = True
                value = np.nan
            cells.append(value)
        # a missing label can never be imputed, so those rows always drop
        if label_missing or (missing and missing_policy == "drop"):
            dropped += 1
            continue
        parsed.append(cells)
        raw_labels.append(lab)

    if not parsed:
        raise DataError("zero usable rows in %s" % (path,))
    matrix = np.asarray(parsed, dtype=np.float64)

    if missing_policy == "impute":
        for j in range(matrix.shape[1]):
            col = matrix[:, j]
            bad = ~np.isfinite(col)
            if not bad.any():
                continue
            good = col[~bad]
            if good.size == 0:
                raise DataError("column %r has no usable values" % feature_names[j])
            if _is_categorical(good):
                vals, counts = np.unique(good, return_counts=True)
                fill = vals[np.argmax(counts)]
            else:
                fill = np.median(good)
            col[bad] = fill

    columns = [np.ascontiguousarray(matrix[:, j]) for j in range(matrix.shape[1])]
    kinds = _infer_kinds(columns, feature_names, categorical_overrides)
    labels, label_values = _encode_labels(raw_labels)
    report = {
        "rows_read": rows_read,
        "rows_dropped": dropped,
        "missing_policy": missing_policy,
        "feature_kinds": dict(zip(feature_names, kinds)),
    }
    return DataTable(columns=columns, feature_names=feature_names,
                     feature_kinds=kinds, labels=labels,
                     label_values=label_values, load_report=report)


def write_csv(table, path, label_name="label"):
    """Write a DataTable as delimited text that load_csv round-trips."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(table.feature_names) + [label_name])
        cols = table.columns
        labels = table.labels
        values = table.label_values
        for i in range(table.n_samples):
            row = []
            for j, col in enumerate(cols):
                v = col[i]
                if table.feature_kinds[j] == CATEGORICAL and float(v).is_integer():
                    row.append("%d" % int(v))
                else:
                    row.append(repr(float(v)))
            row.append(values[labels[i]])
            writer.writerow(row)


def standardize(table):
    """Return a copy whose continuous columns have mean 0 and variance 1.

    Categorical columns and labels pass through unchanged. A zero-variance
    continuous column is an error naming the column.
    """
    out = []
    for name, kind, col in zip(table.feature_names, table.feature_kinds,
                               table.columns):
        if kind != CONTINUOUS:
            out.append(col.copy())
            continue
        mu = col.mean()
        sd = col.std()
        if sd < 1e-12:
            raise DataError("zero variance in continuous column %r" % (name,))
        out.append((col - mu) / sd)
    return DataTable(columns=out, feature_names=list(table.feature_names),
                     feature_kinds=list(table.feature_kinds),
                     labels=table.labels.copy(),
                     label_values=list(table.label_values),
                     load_report=dict(table.load_report))


def standardize_column(col):
    """Standardize one vector; constant input is an error."""
    col = np.asarray(col, dtype=np.float64)
    sd = col.std()
    if sd < 1e-12:
        raise DataError("zero variance column")
    return (col - col.mean()) / sd


def _discretize_column(col, kind, bins, scheme):
    if kind == CATEGORICAL:
        _, codes = np.unique(col, return_inverse=True)
        return codes.astype(np.int64), None
    lo, hi = col.min(), col.max()
    if hi - lo < 1e-12:
        return np.zeros(col.shape[0], dtype=np.int64), np.empty(0)
    if scheme == "equal_frequency":
        qs = np.arange(1, bins) / bins
        edges = np.unique(np.quantile(col, qs))
    elif scheme == "equal_width":
        edges = lo + (hi - lo) * np.arange(1, bins) / bins
    else:
        raise DataError("unknown scheme %r" % (scheme,))
    codes = np.searchsorted(edges, col, side="right").astype(np.int64)
    # compact codes so levels are contiguous even when a bin came out empty
    levels, codes = np.unique(codes, return_inverse=True)
    return codes.astype(np.int64), edges


def discretize(table, bins=5, scheme="equal_frequency"):
    """Integer-code every column: categorical bijectively, continuous binned.

    equal_frequency places interior edges at the 1/B..(B-1)/B quantiles
    (duplicate edges collapse); equal_width slices [min, max] evenly.
    Labels are never binned; they stay class codes on the DataTable.
    """
    if bins < 2:
        raise DataError("bins must be >= 2")
    codes = []
    edges = []
    levels = []
    for kind, col in zip(table.feature_kinds, table.columns):
        c, e = _discretize_column(col, kind, bins, scheme)
        codes.append(c)
        edges.append(e)
        levels.append(int(c.max()) + 1 if c.size else 0)
    return DiscretizedView(codes=codes, bin_edges=edges, bin_count=bins,
                           n_levels=levels, source=table)
