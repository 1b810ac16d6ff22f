"""Greedy binary decision tree over ordinal features.

Features are treated as ordinal: each has finitely many ordered values and
no arithmetic is assumed on them.  Each subdomain scores the two constant
class hypotheses with the pointwise mean-gap rule and keeps the better
one; a subdomain becomes a leaf when its row count falls below ``cap_n``
or its prevalent-class fraction reaches ``q``.  Splits partition a
subdomain at an observed feature value, chosen to minimize the
count-weighted sum of the children's best-constant error rates.

Because the features are ordinal, routing a query is defined only while
every split recognizes the query's value for the split feature; otherwise
the prediction is undefined and ``None`` is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..logic import ExplanationCriterion, pointwise_rule, support_points
from ..training import BasicTrainingConfig, basic_train
from .datasets import LabeledDataset


@dataclass(frozen=True)
class Leaf:
    klass: int
    weight: float
    count: int
    prevalent_fraction: float


@dataclass(frozen=True)
class Split:
    feature: int
    value: float
    values: tuple[float, ...]
    left: "Split | Leaf"
    right: "Split | Leaf"
    count: int
    prevalent_fraction: float


@dataclass(frozen=True)
class DecisionTreeModel:
    root: Split | Leaf
    cap_n: int
    q: float

    def predict(self, x) -> int | None:
        node = self.root
        while isinstance(node, Split):
            v = float(x[node.feature])
            if v not in node.values:
                return None
            node = node.left if v <= node.value else node.right
        return node.klass

    def leaves(self) -> list[Leaf]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                out.append(node)
            else:
                stack.extend([node.left, node.right])
        return out

    def internal_nodes(self) -> list[Split]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Split):
                out.append(node)
                stack.extend([node.left, node.right])
        return out


def _best_constant(rows) -> tuple[int, float]:
    """Class and error rate of the better constant hypothesis on ``rows``."""

    def enumerate_constants(s_q, q):
        from ..logic import constant_hypothesis

        support = support_points(s_q)
        return [constant_hypothesis(0.0, support), constant_hypothesis(1.0, support)]

    cfg = BasicTrainingConfig(
        enumerator=enumerate_constants,
        criterion=ExplanationCriterion((pointwise_rule(),)),
    )
    h, err = basic_train(cfg, rows)
    return int(h.params[0]), err


def _build(rows, n_features: int, cap_n: int, q: float):
    klass, err = _best_constant(rows)
    fraction = 1.0 - err
    count = len(rows)
    if count < cap_n or fraction >= q:
        return Leaf(klass, 1.0, count, fraction)

    best = None  # (score, feature, value, left_rows, right_rows)
    for f in range(n_features):
        values = sorted({r.x[f] for r in rows})
        for v in values[:-1]:
            left = [r for r in rows if r.x[f] <= v]
            right = [r for r in rows if r.x[f] > v]
            _, err_l = _best_constant(left)
            _, err_r = _best_constant(right)
            score = len(left) * err_l + len(right) * err_r
            if best is None or score < best[0]:
                best = (score, f, v, left, right)
    if best is None:
        # Every feature is constant on the subdomain; nothing left to split.
        return Leaf(klass, 1.0, count, fraction)

    _, f, v, left, right = best
    values = tuple(sorted({r.x[f] for r in rows}))
    return Split(
        feature=f,
        value=v,
        values=values,
        left=_build(left, n_features, cap_n, q),
        right=_build(right, n_features, cap_n, q),
        count=count,
        prevalent_fraction=fraction,
    )


def decision_tree_fit(s: LabeledDataset, cap_n: int, q: float) -> DecisionTreeModel:
    """Grow the tree by greedy splitting until every subdomain is a leaf."""
    if s.m == 0:
        raise ValueError("empty dataset")
    root = _build(list(s.rows), s.n, cap_n, q)
    return DecisionTreeModel(root, cap_n, q)


def decision_tree_predict(model: DecisionTreeModel, x) -> int | None:
    """Leaf class for ``x``; ``None`` when routing leaves the modeled region."""
    return model.predict(x)
