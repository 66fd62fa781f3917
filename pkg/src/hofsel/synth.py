"""Synthetic benchmark generators.

Two families:

* a Gaussian tree model whose nine features inherit a binary root signal
  through weighted edges, giving three branches of graded relevance, and
* a heterogeneous block model with twenty features over five classes,
  mixing categorical block patterns, signed continuous magnitudes,
  corrupted copies, and pure noise.

Every feature draws from its own spawned random substream, so adding or
removing features never reshuffles the data of the others.
"""

from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, CONTINUOUS, DataTable


@dataclass
class TreeModelSpec:
    n_samples: int = 100000
    seed: int = 0
    root_edge_weights: tuple = (1.0, 0.65, 0.42)
    child_noise_sd: float = 1.0


def gen_tree(spec=None):
    """Binary-root Gaussian tree with three branches of two children each.

    The root y is a fair {0,1} coin. Each branch head is a unit-variance
    Gaussian whose mean is the root value scaled by that branch's edge
    weight, x_k = w_k * y + noise; each head has two children equal to
    the head plus fresh unit noise. Feature order: x1..x3 heads, then
    x4, x5 (children of x1), x6, x7 (children of x2), x8, x9 (children
    of x3).
    """
    if spec is None:
        spec = TreeModelSpec()
    n = int(spec.n_samples)
    if n < 2:
        raise ValueError("n_samples must be at least 2")
    streams = np.random.SeedSequence(spec.seed).spawn(10)
    rng_y = np.random.default_rng(streams[0])
    y = rng_y.integers(0, 2, size=n).astype(np.int64)
    w1, w2, w3 = spec.root_edge_weights
    sd = float(spec.child_noise_sd)

    def head(weight, stream):
        rng = np.random.default_rng(stream)
        return weight * y.astype(np.float64) + rng.normal(0.0, 1.0, size=n)

    def child(parent, stream):
        rng = np.random.default_rng(stream)
        return parent + rng.normal(0.0, sd, size=n)

    x1 = head(w1, streams[1])
    x2 = head(w2, streams[2])
    x3 = head(w3, streams[3])
    x4 = child(x1, streams[4])
    x5 = child(x1, streams[5])
    x6 = child(x2, streams[6])
    x7 = child(x2, streams[7])
    x8 = child(x3, streams[8])
    x9 = child(x3, streams[9])
    columns = [x1, x2, x3, x4, x5, x6, x7, x8, x9]
    names = ["x%d" % (k,) for k in range(1, 10)]
    kinds = [CONTINUOUS] * 9
    return DataTable(columns=columns, feature_names=names,
                     feature_kinds=kinds, labels=y, label_values=[0, 1])


@dataclass
class HeteroModelSpec:
    seed: int = 0
    block_size: int = 100
    flip_rate: float = 0.30
    flip_count: int = 200
    magnitude_mean: float = 1.0
    magnitude_sd: float = 0.5
    magnitude_floor: float = 0.05
    n_noise: int = 5


_LEVEL_PATTERNS = {
    "F1": (1, 1, 2, 2, 0, 0, 0, 0, 0, 0),
    "F2": (0, 0, 1, 1, 0, 0, 0, 0, 0, 0),
    "F3": (0, 0, 0, 0, 1, 1, 0, 0, 0, 0),
    "F6": (1, 1, 1, 1, 0, 0, 0, 0, 0, 0),
    "F7": (0, 1, 1, 1, 1, 0, 0, 0, 0, 0),
    "F8": (0, 0, 0, 1, 1, 1, 1, 0, 0, 0),
}

_SIGN_PATTERNS = {
    "F4": (-1, -1, -1, -1, -1, -1, 1, 1, 1, 1),
    "F5": (-1, -1, -1, -1, -1, -1, -1, -1, 1, 1),
    "F9": (-1, -1, -1, -1, -1, 1, 1, 1, 1, 1),
    "F10": (-1, -1, -1, -1, -1, -1, -1, 1, 1, 1),
}


def gen_hetero(spec=None):
    """Five-class block dataset with four qualitatively different groups.

    Ten blocks of block_size samples map pairwise onto five classes.
    Group one (F1..F10) carries block-aligned structure: categorical
    level patterns and signed magnitude features. Group two (F11..F13)
    copies F1..F3 and flips each entry with probability flip_rate to a
    uniformly chosen other level. Group three (F14, F15) copies F4, F5
    and replaces exactly flip_count negative entries with positive
    draws. Group four (F16..F20) is pure standard normal noise.
    """
    if spec is None:
        spec = HeteroModelSpec()
    b = int(spec.block_size)
    if b < 1:
        raise ValueError("block_size must be positive")
    n = 10 * b
    blocks = np.repeat(np.arange(10), b)
    labels = (blocks // 2).astype(np.int64)
    streams = np.random.SeedSequence(spec.seed).spawn(20)

    def magnitudes(rng):
        raw = np.abs(rng.normal(spec.magnitude_mean, spec.magnitude_sd,
                                size=n))
        return raw + spec.magnitude_floor

    columns = {}
    for name, pattern in _LEVEL_PATTERNS.items():
        columns[name] = np.asarray(pattern, dtype=np.float64)[blocks]
    for name, pattern in _SIGN_PATTERNS.items():
        idx = int(name[1:]) - 1
        rng = np.random.default_rng(streams[idx])
        signs = np.asarray(pattern, dtype=np.float64)[blocks]
        columns[name] = signs * magnitudes(rng)

    def flipped_copy(source, stream):
        rng = np.random.default_rng(stream)
        out = source.copy()
        levels = np.unique(source)
        k = len(levels)
        mask = rng.random(n) < spec.flip_rate
        if k > 1 and mask.any():
            pos = np.searchsorted(levels, out[mask]).astype(np.int64)
            offs = rng.integers(1, k, size=int(mask.sum()))
            out[mask] = levels[(pos + offs) % k]
        return out

    columns["F11"] = flipped_copy(columns["F1"], streams[10])
    columns["F12"] = flipped_copy(columns["F2"], streams[11])
    columns["F13"] = flipped_copy(columns["F3"], streams[12])

    def sign_corrupted(source, stream):
        rng = np.random.default_rng(stream)
        out = source.copy()
        neg = np.flatnonzero(out < 0)
        count = min(spec.flip_count, len(neg))
        pick = rng.choice(neg, size=count, replace=False)
        out[pick] = magnitudes(rng)[pick]
        return out

    columns["F14"] = sign_corrupted(columns["F4"], streams[13])
    columns["F15"] = sign_corrupted(columns["F5"], streams[14])

    for i in range(spec.n_noise):
        rng = np.random.default_rng(streams[15 + i])
        columns["F%d" % (16 + i,)] = rng.normal(0.0, 1.0, size=n)

    names = ["F%d" % (k,) for k in range(1, 21)]
    categorical = {"F1", "F2", "F3", "F6", "F7", "F8", "F11", "F12", "F13"}
    kinds = [CATEGORICAL if nm in categorical else CONTINUOUS for nm in names]
    return DataTable(columns=[columns[nm] for nm in names],
                     feature_names=names, feature_kinds=kinds,
                     labels=labels, label_values=[1, 2, 3, 4, 5])
