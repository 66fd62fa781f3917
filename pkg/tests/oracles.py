"""Independent reference implementations used to cross-check the package.

Everything here deliberately takes the slow road: explicit probability
tables indexed by outcome tuples, expectation-form conditionals, and a
from-scratch greedy loop for the selection criteria. None of it shares
code with the package so that agreement is evidence, not tautology.
"""

import math

import numpy as np


def prob_table(cols):
    """Full joint probability table as {outcome tuple: probability}."""
    cols = [np.asarray(c, dtype=np.int64) for c in cols]
    n = cols[0].shape[0]
    table = {}
    for i in range(n):
        key = tuple(int(c[i]) for c in cols)
        table[key] = table.get(key, 0.0) + 1.0 / n
    return table


def table_entropy(cols):
    """H of the joint outcome distribution, in nats, by direct -sum p log p."""
    return -sum(p * math.log(p) for p in prob_table(cols).values() if p > 0)


def table_conditional_entropy(target_cols, given_cols):
    """H(target | given) as the expectation of per-context entropies."""
    given = [np.asarray(c, dtype=np.int64) for c in given_cols]
    target = [np.asarray(c, dtype=np.int64) for c in target_cols]
    n = given[0].shape[0]
    contexts = {}
    for i in range(n):
        key = tuple(int(c[i]) for c in given)
        contexts.setdefault(key, []).append(i)
    h = 0.0
    for rows in contexts.values():
        w = len(rows) / n
        sub = [c[rows] for c in target]
        h += w * table_entropy(sub)
    return h


def table_mi(a, b):
    """I(a:b) by the direct sum over p(a,b) log[p(a,b) / (p(a) p(b))]."""
    pab = prob_table([a, b])
    pa = prob_table([a])
    pb = prob_table([b])
    total = 0.0
    for (va, vb), p in pab.items():
        total += p * math.log(p / (pa[(va,)] * pb[(vb,)]))
    return total


def table_cmi(a, b, given):
    """I(a:b | given) as the expectation of per-context table_mi values."""
    g = np.asarray(given, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = g.shape[0]
    total = 0.0
    for v in np.unique(g):
        rows = np.flatnonzero(g == v)
        total += (len(rows) / n) * table_mi(a[rows], b[rows])
    return total


def joint_column(cols):
    """Single column encoding the joint outcome of several columns."""
    table = {}
    cols = [np.asarray(c, dtype=np.int64) for c in cols]
    out = np.zeros(cols[0].shape[0], dtype=np.int64)
    for i in range(out.shape[0]):
        key = tuple(int(c[i]) for c in cols)
        out[i] = table.setdefault(key, len(table))
    return out


def criterion_score(kind, cand, selected, codes, labels, beta=1.0):
    """Re-derive one candidate's score for the named greedy criterion."""
    rel = table_mi(codes[cand], labels)
    if kind == "MIM":
        return rel
    if kind == "MIFS":
        return rel - beta * sum(table_mi(codes[cand], codes[j])
                                for j in selected)
    if kind == "JMI":
        if not selected:
            return rel
        return sum(table_mi(joint_column([codes[cand], codes[j]]), labels)
                   for j in selected)
    if kind == "MRMR":
        if not selected:
            return rel
        pen = sum(table_mi(codes[cand], codes[j]) for j in selected)
        return rel - pen / len(selected)
    if kind == "CMIM":
        if not selected:
            return rel
        worst = max(table_mi(codes[cand], codes[j])
                    - table_cmi(codes[cand], codes[j], labels)
                    for j in selected)
        return rel - worst
    if kind == "SPECCMI_GREEDY":
        return rel + sum(table_cmi(codes[cand], labels, codes[j])
                         for j in selected)
    raise ValueError("unknown criterion %r" % (kind,))


def greedy_order(kind, codes, labels, t, beta=1.0):
    """Forward selection with the lowest-index tie-break, from scratch."""
    selected = []
    remaining = list(range(len(codes)))
    for _ in range(t):
        best = None
        best_score = None
        for cand in remaining:
            s = criterion_score(kind, cand, selected, codes, labels, beta)
            if best_score is None or s > best_score:
                best = cand
                best_score = s
        selected.append(best)
        remaining.remove(best)
    return selected


def ovr_logistic_error(X_train, y_train, X_test, y_test, n_classes,
                       l2=1e-3, epochs=500, lr=0.1):
    """Reference one-vs-rest probe matching the documented recipe."""
    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    std = np.where(std <= 1e-12, 1.0, std)
    Z = (X_train - mean) / std
    T = np.zeros((len(y_train), n_classes))
    T[np.arange(len(y_train)), y_train] = 1.0
    W = np.zeros((n_classes, Z.shape[1]))
    b = np.zeros(n_classes)
    for _ in range(epochs):
        P = 0.5 * (1.0 + np.tanh(0.5 * (Z @ W.T + b)))
        G = (P - T) / len(y_train)
        W -= lr * (G.T @ Z + l2 * W)
        b -= lr * G.sum(axis=0)
    Zt = (X_test - mean) / std
    pred = np.argmax(Zt @ W.T + b, axis=1)
    return float(np.mean(pred != y_test) * 100.0)
