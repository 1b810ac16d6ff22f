"""Linear-model learners: logistic, soft-margin SVM, SVR, ridge.

Each learner's objective is an explanation criterion (a pointwise badness
rule plus, where applicable, a squared-weight regularization under a
weighted-sum combining).  The fitters run plain (sub)gradient descent with
a fixed step and return the best iterate seen; the criteria, not the
optimizers, are the contract, and tests verify the descent losses against
the criterion machinery and the gradients against finite differences.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..aggregation import l1, total
from ..logic import (
    BadnessRule,
    ExplanationCriterion,
    Hypothesis,
    basis_linear_hypothesis,
    epsilon_insensitive,
    linear_hypothesis,
    log_ydist,
    logistic_hypothesis,
    pointwise,
    signclass_ydist,
    square_ydist,
    squared_gradient_norm,
    support_points,
    weighted_sum,
    ydist,
)
from .datasets import LabeledDataset

LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class LinearModel:
    """Weights, bias, and the functional form they parameterize.

    ``form`` is ``linear``, ``logistic``, or ``basis_linear``; the last
    carries the names of its basis functions.  ``normalized`` is cleared by
    the SVM fitter when the final model misclassified every observation and
    therefore could not be rescaled into the unit-margin class.
    """

    w: tuple[float, ...]
    b: float
    form: str = "linear"
    basis: tuple[str, ...] = ()
    normalized: bool = True

    def decision_function(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.form == "basis_linear":
            x = np.array(expand_point(tuple(x), self.basis))
        z = float(np.dot(self.w, x) + self.b)
        if self.form == "logistic":
            return 1.0 / (1.0 + math.exp(-z))
        return z

    def as_hypothesis(self, support) -> Hypothesis:
        if self.form == "logistic":
            return logistic_hypothesis(self.w, self.b, support)
        if self.form == "basis_linear":
            return basis_linear_hypothesis(self.w, self.b, self.basis, support)
        return linear_hypothesis(self.w, self.b, support)


_BASIS_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def expand_point(x: tuple[float, ...], basis: tuple[str, ...]) -> tuple[float, ...]:
    """Evaluate named basis functions ("x1", "x2^3", ...) at a point.

    Coordinates are 1-based in the names.
    """
    out = []
    for name in basis:
        match = _BASIS_RE.match(name)
        if not match:
            raise ValueError(f"unknown basis function name: {name!r}")
        i = int(match.group(1)) - 1
        p = int(match.group(2)) if match.group(2) else 1
        if not 0 <= i < len(x):
            raise ValueError(f"basis function {name!r} exceeds dimension {len(x)}")
        out.append(x[i] ** p)
    return tuple(out)


def identity_basis(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def expand_dataset(s: LabeledDataset, basis) -> LabeledDataset:
    basis = tuple(basis)
    Z = np.array([expand_point(r.x, basis) for r in s.rows], dtype=float)
    return LabeledDataset.from_arrays(Z, s.y, s.label_kind)


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------


def logistic_criterion() -> ExplanationCriterion:
    """Mean log feedback gap, pointwise; the log argument is clamped at 1e-12."""
    rule = BadnessRule(pointwise(), log_ydist(LOG_CLAMP), l1())
    return ExplanationCriterion((rule,))


def logistic_loss(params: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    w, b = params[:-1], params[-1]
    f = 1.0 / (1.0 + np.exp(-(X @ w + b)))
    gap = np.maximum(np.abs(y - f), LOG_CLAMP)
    return float(np.log(gap).mean())


def logistic_gradient(params: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    w, b = params[:-1], params[-1]
    f = 1.0 / (1.0 + np.exp(-(X @ w + b)))
    gap = np.abs(y - f)
    # d log|y - f| / dz: (1 - f) for y = 0, -f for y = 1; zero inside the clamp
    g = np.where(y == 0, 1.0 - f, -f)
    g = np.where(gap <= LOG_CLAMP, 0.0, g)
    m = len(y)
    return np.concatenate([(g @ X) / m, [g.mean()]])


def logistic_fit(s: LabeledDataset, step: float, iters: int) -> LinearModel:
    """Gradient descent on the clamped log-gap criterion; best iterate wins."""
    if iters < 1:
        raise ValueError("iters must be at least 1")
    X, y = s.X, s.y
    params = np.zeros(s.n + 1)
    best = params.copy()
    best_loss = logistic_loss(params, X, y)
    for _ in range(iters):
        params = params - step * logistic_gradient(params, X, y)
        loss = logistic_loss(params, X, y)
        if loss < best_loss:
            best, best_loss = params.copy(), loss
    return LinearModel(tuple(best[:-1]), float(best[-1]), form="logistic")


# ---------------------------------------------------------------------------
# Soft-margin SVM classification (labels in {-1, +1})
# ---------------------------------------------------------------------------


def svm_criterion(alpha: float) -> ExplanationCriterion:
    """Sign-class mean gap plus alpha-weighted squared weight norm."""
    rule = BadnessRule(pointwise(), signclass_ydist(), l1())
    return ExplanationCriterion(
        (rule,), regularization=squared_gradient_norm(), combining=weighted_sum(1.0, alpha)
    )


def svm_slack_minimum(f: LinearModel, s: LabeledDataset, alpha: float) -> float:
    """Margin objective with every slack at its analytic minimum.

    alpha * ||w||^2 + mean(max(1 - y * f(x), 0)); the smallest slack
    admissible for an observation is exactly its hinge value.
    """
    X, y = s.X, s.y
    margins = y * (X @ np.asarray(f.w) + f.b)
    slacks = np.maximum(1.0 - margins, 0.0)
    return alpha * float(np.dot(f.w, f.w)) + float(slacks.sum()) / s.m


def correctly_classified(f: LinearModel, s: LabeledDataset) -> np.ndarray:
    """Boolean mask of observations with y * f(x) > 0."""
    scores = s.X @ np.asarray(f.w) + f.b
    return s.y * scores > 0


def in_normalized_class(f: LinearModel, s: LabeledDataset, tol: float = 1e-9) -> bool:
    """True when some observation is correctly classified and the smallest
    correct |f(x)| equals 1."""
    mask = correctly_classified(f, s)
    if not mask.any():
        return False
    scores = s.X @ np.asarray(f.w) + f.b
    return abs(float(np.min(np.abs(scores[mask]))) - 1.0) <= tol


def svm_explanation_criterion(f: LinearModel, s: LabeledDataset, alpha: float) -> float:
    """Criterion value alpha*||w||^2 + mean |y - f(x)| over misclassified rows.

    Only defined on the unit-margin class: the smallest |f(x)| among
    correctly classified observations must be 1.
    """
    if not in_normalized_class(f, s):
        raise ValueError("not in normalized class: smallest correct margin must be 1")
    criterion = svm_criterion(alpha)
    from ..logic import criterion_value

    h = f.as_hypothesis(support_points(s.rows))
    return criterion_value(criterion, h, s.rows)


def _svm_objective_and_subgradient(params, X, y, alpha):
    w, b = params[:-1], params[-1]
    margins = y * (X @ w + b)
    slacks = np.maximum(1.0 - margins, 0.0)
    obj = alpha * float(w @ w) + float(slacks.sum()) / len(y)
    active = margins < 1.0
    gw = 2.0 * alpha * w - (y[active] @ X[active]) / len(y)
    gb = -float(y[active].sum()) / len(y)
    return obj, np.concatenate([gw, [gb]])


def svm_fit(s: LabeledDataset, alpha: float, step: float, iters: int) -> LinearModel:
    """Subgradient descent on the slack-minimum objective, then rescale so the
    smallest correctly classified |f(x)| is 1.

    When the final model classifies nothing correctly it is returned
    unscaled with ``normalized=False``.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    X, y = s.X, s.y
    params = np.zeros(s.n + 1)
    best = params.copy()
    best_obj, _ = _svm_objective_and_subgradient(params, X, y, alpha)
    for _ in range(iters):
        obj, g = _svm_objective_and_subgradient(params, X, y, alpha)
        if obj < best_obj:
            best, best_obj = params.copy(), obj
        params = params - step * g
    obj, _ = _svm_objective_and_subgradient(params, X, y, alpha)
    if obj < best_obj:
        best, best_obj = params.copy(), obj

    model = LinearModel(tuple(best[:-1]), float(best[-1]))
    mask = correctly_classified(model, s)
    if not mask.any():
        return LinearModel(model.w, model.b, normalized=False)
    scores = X @ best[:-1] + best[-1]
    q = float(np.min(np.abs(scores[mask])))
    return LinearModel(tuple(v / q for v in model.w), model.b / q)


# ---------------------------------------------------------------------------
# Support vector regression, linear and with basis expansion
# ---------------------------------------------------------------------------


def svr_criterion(eps: float, lam: float) -> ExplanationCriterion:
    """Summed epsilon-insensitive gap plus lambda-weighted squared weight norm."""
    rule = BadnessRule(pointwise(), epsilon_insensitive(eps), total())
    return ExplanationCriterion(
        (rule,), regularization=squared_gradient_norm(), combining=weighted_sum(1.0, lam)
    )


def svr_objective(params, X, y, eps, lam):
    w, b = params[:-1], params[-1]
    r = y - (X @ w + b)
    losses = np.maximum(np.abs(r) - eps, 0.0)
    return float(losses.sum()) + lam * float(w @ w)


def _svr_subgradient(params, X, y, eps, lam):
    w, b = params[:-1], params[-1]
    r = y - (X @ w + b)
    active = np.abs(r) > eps
    sign = np.sign(r) * active
    gw = 2.0 * lam * w - sign @ X
    gb = -float(sign.sum())
    return np.concatenate([gw, [gb]])


def svr_fit(s: LabeledDataset, eps: float, lam: float, step: float, iters: int) -> LinearModel:
    """Subgradient descent on the epsilon-insensitive objective; best iterate wins."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    X, y = s.X, s.y
    params = np.zeros(s.n + 1)
    best = params.copy()
    best_obj = svr_objective(params, X, y, eps, lam)
    for _ in range(iters):
        params = params - step * _svr_subgradient(params, X, y, eps, lam)
        obj = svr_objective(params, X, y, eps, lam)
        if obj < best_obj:
            best, best_obj = params.copy(), obj
    return LinearModel(tuple(best[:-1]), float(best[-1]))


def kernel_svr_fit(s: LabeledDataset, basis, eps: float, lam: float,
                   step: float, iters: int) -> LinearModel:
    """Basis-expand the data, then solve the linear problem in that space."""
    basis = tuple(basis)
    if not basis:
        raise ValueError("basis must be nonempty")
    expanded = expand_dataset(s, basis)
    fitted = svr_fit(expanded, eps, lam, step, iters)
    return LinearModel(fitted.w, fitted.b, form="basis_linear", basis=basis)


# ---------------------------------------------------------------------------
# Ridge regression
# ---------------------------------------------------------------------------


def ridge_criterion(alpha: float) -> ExplanationCriterion:
    """Mean squared feedback gap plus alpha-weighted squared weight norm."""
    rule = BadnessRule(pointwise(), square_ydist(), l1())
    return ExplanationCriterion(
        (rule,), regularization=squared_gradient_norm(), combining=weighted_sum(1.0, alpha)
    )


def ridge_fit(s: LabeledDataset, alpha: float) -> LinearModel:
    """Closed-form minimizer of alpha*||w||^2 + mean squared error, bias unpenalized."""
    X, y = s.X, s.y
    m, n = X.shape
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = X.T @ X / m + alpha * np.eye(n)
    A[:n, n] = X.mean(axis=0)
    A[n, :n] = X.mean(axis=0)
    A[n, n] = 1.0
    rhs = np.concatenate([X.T @ y / m, [y.mean()]])
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular regularized system (alpha={alpha}): {exc}") from exc
    return LinearModel(tuple(sol[:-1]), float(sol[-1]))
