"""Plug-in discrete estimators over integer-coded columns.

All five operations reduce to sparse joint counting: tuples of codes are
packed into a single int64 key (mixed radix, compacted when the radix would
overflow) and counted once. Values are natural-log by default; pass base=2
for bits. 0 * log 0 is 0 by convention and no bias correction is applied.
"""

import numpy as np

_RADIX_LIMIT = 1 << 62


class EstimatorError(ValueError):
    pass


def _as_columns(x):
    """Normalize an argument to a list of int64 code vectors."""
    if isinstance(x, np.ndarray) and x.ndim == 1:
        cols = [x]
    elif isinstance(x, (list, tuple)):
        cols = list(x)
        if cols and np.isscalar(cols[0]):
            cols = [np.asarray(cols)]
    else:
        cols = [np.asarray(x)]
    out = []
    for c in cols:
        arr = np.asarray(c)
        if arr.ndim != 1:
            raise EstimatorError("columns must be 1-D")
        out.append(arr.astype(np.int64, copy=False))
    return out


def joint_codes(cols):
    """Pack per-column codes into one int64 key per sample."""
    cols = _as_columns(cols)
    if not cols:
        raise EstimatorError("need at least one column")
    n = cols[0].shape[0]
    if n == 0:
        raise EstimatorError("empty column")
    codes = cols[0]
    radix = int(codes.max()) + 1 if codes.size else 1
    for c in cols[1:]:
        if c.shape[0] != n:
            raise EstimatorError("column length mismatch")
        width = int(c.max()) + 1
        if radix > _RADIX_LIMIT // max(width, 1):
            # compact the keys seen so far to keep the radix in range
            _, codes = np.unique(codes, return_inverse=True)
            codes = codes.astype(np.int64)
            radix = int(codes.max()) + 1
        codes = codes * width + c
        radix = radix * width
    return codes


def _joint_counts(cols):
    codes = joint_codes(cols)
    _, counts = np.unique(codes, return_counts=True)
    return counts


def _h_from_counts(counts):
    n = counts.sum()
    return float(np.log(n) - (counts * np.log(counts)).sum() / n)


def _convert(value, base):
    if base in (None, "e", "nats"):
        return value
    if base in (2, "2", "bits"):
        return value / np.log(2.0)
    return value / np.log(float(base))


def _clamp(value):
    # plug-in information quantities are nonnegative for the empirical
    # distribution; only float rounding can push them below zero
    if value < 0.0:
        if value < -1e-9:
            raise EstimatorError("negative information value %r" % value)
        return 0.0
    return value


def entropy(col, base=None):
    """H(X) = -sum p log p with p = count / N."""
    cols = _as_columns(col)
    if len(cols) != 1:
        return joint_entropy(cols, base=base)
    if cols[0].shape[0] == 0:
        raise EstimatorError("empty column")
    _, counts = np.unique(cols[0], return_counts=True)
    return _convert(_h_from_counts(counts), base)


def joint_entropy(cols, base=None):
    """Entropy of the tuple-valued variable over the given columns."""
    return _convert(_h_from_counts(_joint_counts(cols)), base)


def conditional_entropy(cols, given, base=None):
    """H(cols | given) = H(cols, given) - H(given); empty given degenerates."""
    cols = _as_columns(cols)
    given = _as_columns(given) if given is not None and len(given) else []
    if not given:
        return joint_entropy(cols, base=base)
    h_all = _h_from_counts(_joint_counts(cols + given))
    h_given = _h_from_counts(_joint_counts(given))
    return _convert(_clamp(h_all - h_given), base)


def mutual_information(a, b, base=None):
    """I(A : B) = H(A) + H(B) - H(A, B), symmetric and nonnegative."""
    a = _as_columns(a)
    b = _as_columns(b)
    h_a = _h_from_counts(_joint_counts(a))
    h_b = _h_from_counts(_joint_counts(b))
    h_ab = _h_from_counts(_joint_counts(a + b))
    return _convert(_clamp(h_a + h_b - h_ab), base)


def conditional_mutual_information(a, b, given, base=None):
    """I(A : B | given) via four joint entropies; empty given gives MI."""
    a = _as_columns(a)
    b = _as_columns(b)
    given = _as_columns(given) if given is not None and len(given) else []
    if not given:
        return mutual_information(a, b, base=base)
    h_ag = _h_from_counts(_joint_counts(a + given))
    h_bg = _h_from_counts(_joint_counts(b + given))
    h_abg = _h_from_counts(_joint_counts(a + b + given))
    h_g = _h_from_counts(_joint_counts(given))
    return _convert(_clamp(h_ag + h_bg - h_abg - h_g), base)
