"""Evaluation harness: linear probes, cross-validation, error metrics,
and whole-set information accounting."""

from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .infotheory import EstimatorError, mutual_information


class EvalError(ValueError):
    pass


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    n_classes: int


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def train_linear(X, y, n_classes, l2=1e-3, epochs=500, lr=0.1):
    """One-vs-rest logistic probe, full-batch gradient descent.

    Deterministic: zero init, fixed epoch count, no shuffling. Features
    are standardized on the training statistics; zero-variance columns
    pass through unscaled."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise EvalError("feature matrix and labels disagree in shape")
    n, d = X.shape
    present = np.unique(y)
    if len(present) < 2:
        raise EvalError("training split contains a single class")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std <= 1e-12, 1.0, std)
    Z = (X - mean) / std
    targets = np.zeros((n, n_classes))
    targets[np.arange(n), y] = 1.0
    W, b = _accel.train_ovr(np.ascontiguousarray(Z), targets, float(l2),
                            int(epochs), float(lr))
    return LinearModel(weights=W, bias=b, mean=mean, std=std,
                       n_classes=int(n_classes))


def predict(model, X):
    X = np.asarray(X, dtype=np.float64)
    Z = (X - model.mean) / model.std
    scores = Z @ model.weights.T + model.bias
    return np.argmax(scores, axis=1).astype(np.int64)


def error_rate(model, X, y):
    pred = predict(model, X)
    return float(np.mean(pred != np.asarray(y))) * 100.0


def stratified_folds(y, n_folds, seed=0):
    """Per-class shuffled round-robin fold assignment.

    Guarantees every training split contains every class as long as
    each class has at least two members."""
    y = np.asarray(y, dtype=np.int64)
    n = len(y)
    if n_folds < 2 or n_folds > n:
        raise EvalError("fold count %d out of range" % (n_folds,))
    rng = np.random.default_rng(np.random.SeedSequence((seed, 104729)))
    assign = np.empty(n, dtype=np.int64)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < 2:
            raise EvalError("class %d has fewer than 2 samples; "
                            "stratification impossible" % (cls,))
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = np.arange(len(idx)) % n_folds
    folds = [np.flatnonzero(assign == f) for f in range(n_folds)]
    return [f for f in folds if len(f)]


def cross_validate(data, features, n_folds=10, seed=0):
    """Mean held-out error (percent) of the linear probe.

    Stratified n_folds splits, or leave-one-out when the dataset has
    fewer than 100 samples."""
    features = list(features)
    if not features:
        raise EvalError("no features given")
    X = np.column_stack([np.asarray(data.columns[f], dtype=np.float64)
                         for f in features])
    y = data.labels
    n = len(y)
    counts = np.bincount(y)
    if (counts[counts > 0] < 2).any():
        raise EvalError("every class needs at least 2 samples")
    if n < 100:
        folds = [np.array([i]) for i in range(n)]
    else:
        folds = stratified_folds(y, n_folds, seed=seed)
    errors = []
    for test_idx in folds:
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        model = train_linear(X[mask], y[mask], data.n_classes)
        errors.append(error_rate(model, X[test_idx], y[test_idx]))
    return float(np.mean(errors))


def rae(predicted, actual):
    """Relative absolute error against the mean-of-actuals baseline."""
    predicted = np.asarray(predicted, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if predicted.shape != actual.shape:
        raise EvalError("prediction and actual shapes disagree")
    denom = np.abs(actual - actual.mean()).sum()
    if denom <= 0:
        raise EvalError("actuals are constant; relative error undefined")
    return float(np.abs(predicted - actual).sum() / denom)


def arae(values):
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EvalError("no error values to average")
    return float(values.mean())


PLUGIN_MAX_FEATURES = 16


def global_mi(view, features, labels, method="plugin", data=None,
              config=None):
    """Mutual information between a whole feature set and the label.

    method="plugin" joins the discretized codes into one variable
    (capped at PLUGIN_MAX_FEATURES columns to keep the joint support
    honest). method="ica_partition" replays the subset assignment over
    the given order and sums the per-subset model estimates; it needs
    the raw data table."""
    features = list(features)
    if not features:
        raise EvalError("no features given")
    if method == "plugin":
        if len(features) > PLUGIN_MAX_FEATURES:
            raise EstimatorError(
                "plugin estimate refused for %d features (cap %d)" %
                (len(features), PLUGIN_MAX_FEATURES))
        cols = [view.codes[f] for f in features]
        return mutual_information(cols, labels)
    if method == "ica_partition":
        from .hofs import accumulate_partition
        if data is None:
            data = view.source
        if data is None:
            raise EvalError("ica_partition needs the raw data table")
        partition = accumulate_partition(data, features, config)
        return partition.total_mi()
    raise EvalError("unknown method %r" % (method,))


def information_gain_curve(trace, view=None, labels=None):
    """Per-step increments of the running subset-total estimate.

    The first entry is the first feature's own estimate; the entries
    telescope back to the final total exactly."""
    totals = [step.total_mi for step in trace.steps]
    if not totals:
        return []
    curve = [totals[0]]
    for prev, cur in zip(totals, totals[1:]):
        curve.append(cur - prev)
    return curve


@dataclass
class BenchReport:
    methods: list
    k_values: list
    errors: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)


def default_k_values(n_features):
    ks = [k for k in range(10, min(100, n_features) + 1, 10)]
    if not ks:
        ks = [n_features]
    return ks
