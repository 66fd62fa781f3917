"""Classic lower-order feature scoring criteria and the shared greedy loop.

Each criterion scores a candidate feature against the already-selected set
using only single- and pairwise plug-in estimates. Selection is forward
greedy: at every step the highest-scoring unselected feature wins, ties
broken toward the lowest feature index.
"""

from dataclasses import dataclass, field

import numpy as np

from .infotheory import (conditional_mutual_information, mutual_information)

MIM = "MIM"
MIFS = "MIFS"
JMI = "JMI"
MRMR = "MRMR"
CMIM = "CMIM"
SPECCMI_GREEDY = "SPECCMI_GREEDY"

KINDS = (MIM, MIFS, JMI, MRMR, CMIM, SPECCMI_GREEDY)

_ALIASES = {
    "mim": MIM, "mifs": MIFS, "jmi": JMI, "mrmr": MRMR, "cmim": CMIM,
    "speccmi": SPECCMI_GREEDY, "speccmi_greedy": SPECCMI_GREEDY,
}


class CriterionError(ValueError):
    pass


@dataclass
class Criterion:
    kind: str
    beta: float = 1.0

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise CriterionError("unknown criterion %r" % (self.kind,))
        self.kind = kind
        if self.kind == MIFS and self.beta < 0:
            raise CriterionError("MIFS beta must be >= 0")


@dataclass
class SelectionResult:
    order: list
    scores: list
    per_step_candidates: list = field(default_factory=list)


class _PairCache:
    """Memoizes the pairwise quantities the criteria share."""

    def __init__(self, view, labels):
        self.codes = view.codes
        self.labels = np.asarray(labels, dtype=np.int64)
        self.rel = {}
        self.pair_mi = {}
        self.pair_cmi = {}
        self.pair_joint_rel = {}

    def relevance(self, i):
        if i not in self.rel:
            self.rel[i] = mutual_information(self.codes[i], self.labels)
        return self.rel[i]

    def feature_mi(self, i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in self.pair_mi:
            self.pair_mi[key] = mutual_information(self.codes[i], self.codes[j])
        return self.pair_mi[key]

    def feature_cmi_given_label(self, i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in self.pair_cmi:
            self.pair_cmi[key] = conditional_mutual_information(
                self.codes[i], self.codes[j], self.labels)
        return self.pair_cmi[key]

    def joint_relevance(self, i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in self.pair_joint_rel:
            self.pair_joint_rel[key] = mutual_information(
                [self.codes[i], self.codes[j]], self.labels)
        return self.pair_joint_rel[key]

    def label_cmi_given_feature(self, i, j):
        # I(x_i : y | x_j) by the chain I({x_i,x_j}:y) - I(x_j:y)
        return max(0.0, self.joint_relevance(i, j) - self.relevance(j))


def score_candidate(criterion, candidate, selected, view, labels, cache=None):
    """J value of one candidate given the ordered selected set."""
    if candidate in selected:
        raise CriterionError("candidate %r already selected" % (candidate,))
    if cache is None:
        cache = _PairCache(view, labels)
    rel = cache.relevance(candidate)
    kind = criterion.kind
    if kind == MIM:
        return rel
    if kind == MIFS:
        penalty = sum(cache.feature_mi(candidate, j) for j in selected)
        return rel - criterion.beta * penalty
    if kind == JMI:
        if not selected:
            return rel
        return sum(cache.joint_relevance(candidate, j) for j in selected)
    if kind == MRMR:
        if not selected:
            return rel
        penalty = sum(cache.feature_mi(candidate, j) for j in selected)
        return rel - penalty / len(selected)
    if kind == CMIM:
        if not selected:
            return rel
        worst = max(cache.feature_mi(candidate, j)
                    - cache.feature_cmi_given_label(candidate, j)
                    for j in selected)
        return rel - worst
    if kind == SPECCMI_GREEDY:
        bonus = sum(cache.label_cmi_given_feature(candidate, j)
                    for j in selected)
        return rel + bonus
    raise CriterionError("unknown criterion %r" % (kind,))


def select_greedy(criterion, view, labels, T, record_candidates=True):
    """Forward greedy selection of T features under one criterion."""
    m = len(view.codes)
    if not 1 <= T <= m:
        raise CriterionError("T=%d out of range for %d features" % (T, m))
    cache = _PairCache(view, labels)
    selected = []
    chosen_scores = []
    per_step = []
    for _ in range(T):
        best = None
        best_score = None
        step_scores = {}
        for cand in range(m):
            if cand in selected:
                continue
            s = score_candidate(criterion, cand, selected, view, labels,
                                cache=cache)
            step_scores[cand] = s
            if best_score is None or s > best_score:
                best = cand
                best_score = s
        selected.append(best)
        chosen_scores.append(best_score)
        if record_candidates:
            per_step.append(step_scores)
    return SelectionResult(order=selected, scores=chosen_scores,
                           per_step_candidates=per_step)
