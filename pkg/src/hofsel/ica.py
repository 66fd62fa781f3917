"""Maximum-likelihood linear unmixing under a logistic source prior.

The unmixing matrix is kept lower triangular: a batch fit trains the rows
one after another, and appending a column trains only the new last row while
the existing rows stay bit-identical. log|det W| is therefore always the sum
of log|diagonal| terms, which is what the joint entropy estimate
sum_j H(s_j) - log|det W| relies on.

Every stochastic fit derives its random stream from (rng_seed, *stream_key),
where the stream key encodes the ids of the columns being stacked. Fitting
the same stack twice, anywhere, reproduces the same model bit for bit.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel

DIAG_MIN = 1e-8


class IcaError(RuntimeError):
    pass


@dataclass
class IcaConfig:
    learning_rate: float = 0.01
    batch_size: int = 256
    max_epochs: int = 200
    convergence_tol: float = 1e-5
    rng_seed: int = 0
    bins: int = 5
    max_restarts: int = 3


@dataclass
class IcaModel:
    """Triangular unmixing state for one ordered column stack.

    W is (d, d) lower triangular; S holds the d signal vectors W @ X;
    columns keeps the raw standardized inputs so later appends can extend
    the stack. fit_meta records per-row convergence details.
    """

    feature_ids: tuple
    W: np.ndarray
    S: list
    signal_entropies: list
    columns: list
    fit_meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.feature_ids)

    @property
    def n_samples(self):
        return self.columns[0].shape[0] if self.columns else 0

    def log_abs_det(self):
        if self.dim == 0:
            return 0.0
        return float(np.log(np.abs(np.diag(self.W))).sum())


def empty_model():
    return IcaModel(feature_ids=(), W=np.zeros((0, 0)), S=[],
                    signal_entropies=[], columns=[],
                    fit_meta={"rows": []})


def _check_standardized(col):
    if abs(float(col.mean())) > 1e-6 or abs(float(col.std()) - 1.0) > 1e-3:
        raise IcaError("input column is not standardized (mean %.3g, std %.3g)"
                       % (col.mean(), col.std()))


def _stream_rng(config, stream):
    key = (int(config.rng_seed),) + tuple(int(v) for v in stream)
    return np.random.default_rng(np.random.SeedSequence(key))


def signal_entropy(s, bins):
    """Plug-in code entropy of an equal-width histogram of the signal.

    A signal with range below 1e-12 counts as constant and has entropy 0.
    """
    lo = float(s.min())
    hi = float(s.max())
    if hi - lo < 1e-12:
        return 0.0
    counts, _ = np.histogram(s, bins=bins, range=(lo, hi))
    counts = counts[counts > 0]
    n = counts.sum()
    return float(np.log(n) - (counts * np.log(counts)).sum() / n)


def append_feature(model, new_col, config, feature_id=None, stream_tag=0):
    """Extend the model by one column, learning only the new last row.

    The row is the unit-variance least-squares residual direction of
    the new column on the stacked predecessors, which makes the new
    signal exactly uncorrelated with every existing signal and keeps
    the diagonal at 1/sd(residual), so the log determinant accumulates
    the residual spreads and the joint entropy estimate stays on the
    same scale as the data. Minibatch ascent with the 1/sqrt(1+epoch)
    step decay fits the residual's concentration under the logistic
    source prior; the fitted value is recorded per row as "scale" in
    fit_meta and feeds shape-sensitive consumers without entering W.
    Numeric failures restart at half the step size up to
    config.max_restarts times. A column that is an exact linear
    combination of the stack is flagged degenerate: the row becomes the
    (negated) projection with the diagonal clamped to DIAG_MIN, giving
    a near-constant signal instead of a runaway fit.
    """
    new_col = np.asarray(new_col, dtype=np.float64)
    if model.dim and new_col.shape[0] != model.n_samples:
        raise IcaError("column length mismatch")
    _check_standardized(new_col)
    if feature_id is None:
        feature_id = model.dim
    d = model.dim + 1
    n = new_col.shape[0]
    stack = model.columns + [new_col]
    X = np.column_stack(stack) if d > 1 else new_col.reshape(-1, 1)

    degenerate = False
    row = None
    direction = np.zeros(d)
    direction[-1] = 1.0
    resid_unit = new_col
    if d > 1:
        prev = X[:, :-1]
        beta, _, _, _ = np.linalg.lstsq(prev, new_col, rcond=None)
        resid = new_col - prev @ beta
        resid_var = float(resid.var())
        if resid_var < 1e-9:
            degenerate = True
            row = np.concatenate([-beta, [1.0]]) * DIAG_MIN
            meta_row = {"epochs": 0, "converged": True, "loglik": float("nan"),
                        "restarts": 0, "degenerate": True,
                        "learning_rate": 0.0}
        else:
            sd = math.sqrt(resid_var)
            direction = np.concatenate([-beta, [1.0]]) / sd
            resid_unit = resid / sd

    if row is None:
        stream = (int(stream_tag),) + tuple(model.feature_ids) + (int(feature_id),)
        rng = _stream_rng(config, stream)
        perm = rng.permutation(n)
        Rp = np.ascontiguousarray(resid_unit[perm].reshape(-1, 1))
        w0 = np.ones(1)
        batch = min(int(config.batch_size), n)
        status = 2
        restarts = 0
        scale = 1.0
        ll = float("nan")
        epochs = 0
        lr = float(config.learning_rate)
        for attempt in range(int(config.max_restarts) + 1):
            lr = float(config.learning_rate) / (2.0 ** attempt)
            w, ll, epochs, status = _accel.fit_row(
                Rp, w0, lr, batch, int(config.max_epochs),
                float(config.convergence_tol))
            restarts = attempt
            if status != 2:
                scale = float(w[0])
                break
        if status == 2:
            raise IcaError("row fit diverged after %d restarts" % restarts)
        row = direction.copy()
        if abs(row[-1]) < DIAG_MIN:
            degenerate = True
            row = row.copy()
            row[-1] = math.copysign(DIAG_MIN, row[-1] if row[-1] != 0 else 1.0)
        meta_row = {"epochs": int(epochs), "converged": status == 0,
                    "loglik": float(ll), "restarts": int(restarts),
                    "degenerate": degenerate, "learning_rate": lr,
                    "scale": float(scale)}

    W = np.zeros((d, d))
    if model.dim:
        W[:-1, :-1] = model.W
    W[-1, :] = row
    s = X @ row
    entropies = model.signal_entropies + [signal_entropy(s, config.bins)]
    meta = {"rows": model.fit_meta.get("rows", []) + [meta_row],
            "batch_size": min(int(config.batch_size), n),
            "rng_seed": int(config.rng_seed)}
    return IcaModel(feature_ids=model.feature_ids + (int(feature_id),),
                    W=W, S=model.S + [s], signal_entropies=entropies,
                    columns=stack, fit_meta=meta)


def fit_batch(matrix, config, feature_ids=None, stream_tag=0):
    """Fit a full triangular model by appending the columns in order.

    matrix is a (N, d) array or a list of d columns, already standardized.
    Requires N > d so every row has something to learn from.
    """
    if isinstance(matrix, np.ndarray) and matrix.ndim == 2:
        cols = [np.ascontiguousarray(matrix[:, j]) for j in range(matrix.shape[1])]
    else:
        cols = [np.asarray(c, dtype=np.float64) for c in matrix]
    if not cols:
        raise IcaError("need at least one column")
    if cols[0].shape[0] <= len(cols):
        raise IcaError("need more samples than columns")
    if feature_ids is None:
        feature_ids = list(range(len(cols)))
    model = empty_model()
    for fid, col in zip(feature_ids, cols):
        model = append_feature(model, col, config, feature_id=fid,
                               stream_tag=stream_tag)
    return model


def signal_entropy_sum(model):
    return float(sum(model.signal_entropies))


def joint_entropy_estimate(model):
    """sum_j H(s_j) - log|det W|, the signal-space joint entropy estimate."""
    if model.dim == 0:
        raise IcaError("model is not fitted")
    diag = np.diag(model.W)
    if np.any(diag == 0.0):
        raise IcaError("zero diagonal entry")
    return signal_entropy_sum(model) - model.log_abs_det()


def avg_pearson(model):
    """Mean absolute pairwise Pearson correlation between signal vectors.

    Models with fewer than two signals report 0 (nothing to correlate).
    """
    d = model.dim
    if d < 2:
        return 0.0
    sig = np.vstack(model.S)
    sd = sig.std(axis=1)
    keep = sd > 1e-12
    total = 0.0
    count = 0
    for i in range(d):
        for j in range(i + 1, d):
            if keep[i] and keep[j]:
                ci = sig[i] - sig[i].mean()
                cj = sig[j] - sig[j].mean()
                r = float((ci * cj).mean() / (sd[i] * sd[j]))
            else:
                r = 0.0
            total += abs(r)
            count += 1
    return total / count


def infomax_loglik(W, X):
    """Mean log-likelihood of unrestricted unmixing W on samples X (N, d)."""
    S = X @ W.T
    a = np.abs(S)
    per_sample = -(a + 2.0 * np.log1p(np.exp(-a))).sum(axis=1)
    sign, logdet = np.linalg.slogdet(W)
    if sign == 0:
        return -np.inf
    return float(per_sample.mean() + logdet)


def infomax_grad(W, X):
    """Analytic gradient of infomax_loglik in W: (1/N)(1-2g(S))^T X + W^-T."""
    n = X.shape[0]
    S = X @ W.T
    T = -np.tanh(0.5 * S)
    return T.T @ X / n + np.linalg.inv(W).T
