"""Nearest-neighbor classification and its two adaptive-k variants.

All three learners score the two constant hypotheses at a query point with
the mean feedback gap over a distance-ball of observations.  Plain k-NN
fixes the ball by ``k``; the adaptive variants wrap the same basic training
in a loop over ``k``, one stopping at the first neighborhood whose class
bias clears a shrinking threshold, the other scanning all neighborhood
sizes and keeping the one with the smallest concentration weight
``2 * exp(-2 k (p - 1/2)^2)``.

Ball cutoffs always include observations tied with the k-th distance, so a
"k-neighborhood" may hold more than k points; class ties resolve to 0.
"""

from __future__ import annotations

import math

import numpy as np

from ..aggregation import l1
from ..logic import BadnessRule, ExplanationCriterion, ball, ydist
from ..training import (
    BasicTrainingConfig,
    WrapperConfig,
    basic_train,
    binary_constants,
    k_nearest_focus,
)
from .datasets import LabeledDataset


def _neighborhood_labels(s: LabeledDataset, x0, k: int) -> np.ndarray:
    """Labels of the k closest rows to ``x0``, cutoff ties included."""
    x0 = np.asarray(x0, dtype=float)
    dists = np.sqrt(((s.X - x0) ** 2).sum(axis=1))
    cutoff = np.sort(dists)[min(k, s.m) - 1]
    return s.y[dists <= cutoff]


def _prevalent(labels: np.ndarray) -> tuple[int, float]:
    """(prevalent class, its frequency); the tie at 1/2 goes to class 0."""
    p1 = float(labels.mean())
    if p1 > 0.5:
        return 1, p1
    return 0, 1.0 - p1


def knn_criterion(s: LabeledDataset, x0, k: int) -> ExplanationCriterion:
    """Mean feedback gap over the ball reaching the k-th closest observation."""
    x0v = tuple(float(v) for v in np.atleast_1d(x0))
    dists = np.sqrt(((s.X - np.asarray(x0v)) ** 2).sum(axis=1))
    d_k = float(np.sort(dists)[k - 1])
    rule = BadnessRule(ball(x0v, d_k), ydist(), l1())
    return ExplanationCriterion((rule,))


def knn_classify(s: LabeledDataset, x0, k: int) -> int:
    """Majority class among the k nearest observations, via basic training."""
    if s.m == 0:
        raise ValueError("empty dataset")
    if not 1 <= k <= s.m:
        raise ValueError(f"k must lie in [1, {s.m}], got {k}")
    cfg = BasicTrainingConfig(
        enumerator=binary_constants(np.atleast_1d(x0)),
        criterion=knn_criterion(s, x0, k),
    )
    h, _ = basic_train(cfg, s.rows, k)
    return int(h.params[0])


def ada_threshold(n: int, k: int, delta: float, c1: float) -> float:
    """Bias threshold c1 * sqrt((log n + log(1/delta)) / k)."""
    return c1 * math.sqrt((math.log(n) + math.log(1.0 / delta)) / k)


def ada_knn_classify(s: LabeledDataset, x0, delta: float, c1: float) -> int | None:
    """Grow k from 1 and answer at the first neighborhood whose bias beats the threshold.

    Returns ``None`` (a refusal) when no k up to the dataset size reaches
    the threshold.
    """
    if s.m == 0:
        raise ValueError("empty dataset")
    n = s.m
    for k in range(1, n + 1):
        labels = _neighborhood_labels(s, x0, k)
        cls, p = _prevalent(labels)
        if p - 0.5 > ada_threshold(n, k, delta, c1):
            return cls
    return None


def hoeffding_weight(p: float, k: int) -> float:
    """Concentration weight 2 * exp(-2 k (p - 1/2)^2); 2 at p = 1/2."""
    t = abs(p - 0.5)
    return 2.0 * math.exp(-2.0 * k * t * t)


def hoeffding_knn_classify(s: LabeledDataset, x0) -> int:
    """Answer with the prevalent class of the neighborhood minimizing the weight.

    Scans k = 1 .. m-1; weight ties resolve toward the larger k, which
    favors decisions supported by more observations.
    """
    if s.m < 2:
        raise ValueError("adaptive neighborhood selection needs at least 2 rows")
    best_k = None
    best_w = math.inf
    best_cls = 0
    for k in range(1, s.m):
        labels = _neighborhood_labels(s, x0, k)
        cls, p = _prevalent(labels)
        w = hoeffding_weight(p, k)
        if w <= best_w:
            best_k, best_w, best_cls = k, w, cls
    return best_cls


def hoeffding_selected_k(s: LabeledDataset, x0) -> int:
    """The neighborhood size the weight rule selects (for diagnostics)."""
    best_k = 1
    best_w = math.inf
    for k in range(1, s.m):
        labels = _neighborhood_labels(s, x0, k)
        _, p = _prevalent(labels)
        w = hoeffding_weight(p, k)
        if w <= best_w:
            best_k, best_w = k, w
    return best_k


# ---------------------------------------------------------------------------
# Wrapper-form configurations of the same two learners
# ---------------------------------------------------------------------------


def _ball_mean_training(x0) -> BasicTrainingConfig:
    # After focusing on the k nearest rows, an unbounded ball around the
    # query point aligns the constant hypothesis with exactly those rows.
    x0v = tuple(float(v) for v in np.atleast_1d(x0))
    rule = BadnessRule(ball(x0v, math.inf), ydist(), l1())
    return BasicTrainingConfig(
        enumerator=binary_constants(x0v),
        criterion=ExplanationCriterion((rule,)),
        focusing=k_nearest_focus(x0v),
    )


def _focused_prevalence(s_q) -> float:
    labels = np.array([a.y for a in s_q])
    p1 = float(labels.mean())
    return max(p1, 1.0 - p1)


def ada_knn_training(s: LabeledDataset, x0, delta: float, c1: float):
    """(WrapperConfig, BasicTrainingConfig) reproducing :func:`ada_knn_classify`."""
    n = s.m
    bcfg = _ball_mean_training(x0)

    def param_generator(records):
        return len(records) + 1

    def weight_fn(h, s_q, q):
        return _focused_prevalence(s_q) - 0.5

    def stop_fn(records):
        rec = records[-1]
        return rec.weight > ada_threshold(n, rec.q, delta, c1) or rec.q >= n

    def combiner(records):
        rec = records[-1]
        if rec.weight > ada_threshold(n, rec.q, delta, c1):
            return int(rec.hypothesis.params[0])
        return None

    return WrapperConfig(param_generator, weight_fn, stop_fn, combiner), bcfg


def hoeffding_knn_training(s: LabeledDataset, x0):
    """(WrapperConfig, BasicTrainingConfig) reproducing :func:`hoeffding_knn_classify`."""
    n = s.m
    bcfg = _ball_mean_training(x0)

    def param_generator(records):
        return len(records) + 1

    def weight_fn(h, s_q, q):
        return hoeffding_weight(_focused_prevalence(s_q), q)

    def stop_fn(records):
        return records[-1].q >= n - 1

    def combiner(records):
        best = records[0]
        for rec in records[1:]:
            if rec.weight <= best.weight:
                best = rec
        return int(best.hypothesis.params[0])

    return WrapperConfig(param_generator, weight_fn, stop_fn, combiner), bcfg
