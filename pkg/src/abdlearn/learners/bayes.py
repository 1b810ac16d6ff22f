"""Frequency-counting classifier for nominal features.

For a query point the criterion holds one badness rule per feature: align
the constant class hypothesis with every observation that agrees on that
feature, take the mean feedback gap (an error rate), and combine the
per-feature rates ``a_j`` through ``1 - prod_j (1 - a_j)``.  Minimizing the
combined value is the same as maximizing the product of per-feature
accuracies, which makes a class with even one never-seen feature/class
combination unselectable.
"""

from __future__ import annotations

import numpy as np

from ..aggregation import l1
from ..logic import (
    BadnessRule,
    ExplanationCriterion,
    feature_equality,
    one_minus_product_of_complements,
    ydist,
)
from ..training import BasicTrainingConfig, basic_train, binary_constants
from .datasets import LabeledDataset


def naive_bayes_criterion(n_features: int) -> ExplanationCriterion:
    rules = tuple(BadnessRule(feature_equality(j), ydist(), l1()) for j in range(n_features))
    return ExplanationCriterion(rules, combining=one_minus_product_of_complements())


def naive_bayes_classify(s: LabeledDataset, z) -> int:
    """Class whose per-feature accuracy product is largest at ``z``; ties go to 0."""
    if s.m == 0:
        raise ValueError("empty dataset")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape[0] != s.n:
        raise ValueError(f"query has {z.shape[0]} features, dataset has {s.n}")
    for j in range(s.n):
        if not np.any(s.X[:, j] == z[j]):
            raise ValueError(f"unseen feature value {z[j]!r} for feature {j}")
    cfg = BasicTrainingConfig(
        enumerator=binary_constants(z),
        criterion=naive_bayes_criterion(s.n),
    )
    h, _ = basic_train(cfg, s.rows)
    return int(h.params[0])
