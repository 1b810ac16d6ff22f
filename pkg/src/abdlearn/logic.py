"""Hypothesis scoring against observations via alignments and deviations.

The central object is the *conglomerate*: the training observations plus
the hypothetical instances a hypothesis generates at finitely many support
points.  A *badness rule* scores a hypothesis in three steps:

1. an alignment predicate selects the ordered instance pairs to compare;
2. a deviation function maps each aligned pair to a score that grows with
   the feedback distance and never grows with the data-point distance;
3. an aggregation collapses the deviation sequence into one number.

An *explanation criterion* combines one or more badness rules, optionally
with a regularization term on the hypothesis parameters, through a
componentwise-monotone combining operation.  Smaller is better throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .aggregation import AggregationSpec, aggregate, l1

OBS = "obs"
HYP = "hyp"

Vector = tuple[float, ...]


def _as_vector(x) -> Vector:
    if isinstance(x, (int, float)):
        return (float(x),)
    return tuple(float(v) for v in x)


def _as_feedback(y):
    if isinstance(y, (int, float)):
        return float(y)
    return tuple(float(v) for v in y)


@dataclass(frozen=True)
class Instance:
    """One observed or hypothetical data tuple.

    ``x`` is the data point (feature vector), ``y`` the feedback.  Feedback
    is a scalar for every supervised learner; the clustering encodings use a
    vector feedback with the cluster index as the data point.  ``tag`` is
    exactly one of the two type symbols ``OBS`` / ``HYP``.
    """

    x: Vector
    y: float | Vector
    tag: str

    def __post_init__(self):
        if self.tag not in (OBS, HYP):
            raise ValueError(f"instance tag must be {OBS!r} or {HYP!r}, got {self.tag!r}")


def observation(x, y) -> Instance:
    return Instance(_as_vector(x), _as_feedback(y), OBS)


def hypothetical(x, y) -> Instance:
    return Instance(_as_vector(x), _as_feedback(y), HYP)


def is_observation(a: Instance) -> bool:
    return a.tag == OBS


def is_hypothetical(a: Instance) -> bool:
    return a.tag == HYP


def x_distance(a: Instance, b: Instance, i: int | None = None) -> float:
    """Data-point distance: coordinate ``i`` when given, else Euclidean."""
    if i is not None:
        return abs(a.x[i] - b.x[i])
    return math.sqrt(sum((p - q) ** 2 for p, q in zip(a.x, b.x)))


def y_distance(a: Instance, b: Instance) -> float:
    """Feedback distance: absolute difference, Euclidean for vector feedback."""
    if isinstance(a.y, tuple) or isinstance(b.y, tuple):
        ya = a.y if isinstance(a.y, tuple) else (a.y,)
        yb = b.y if isinstance(b.y, tuple) else (b.y,)
        return math.sqrt(sum((p - q) ** 2 for p, q in zip(ya, yb)))
    return abs(a.y - b.y)


@dataclass(frozen=True)
class Conglomerate:
    """Training observations together with a hypothesis' instances."""

    instances: tuple[Instance, ...]

    @property
    def n(self) -> int:
        return len(self.instances[0].x) if self.instances else 0


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------

_GRADIENT_FORMS = ("linear", "logistic", "basis_linear")


@dataclass(frozen=True)
class Hypothesis:
    """A candidate explanation with a named functional form.

    ``params`` holds the parameter vector; for the linear family the last
    entry is the bias and the rest are the weights.  ``support`` lists the
    data points at which hypothetical instances are generated; the
    ``cluster_assignment`` form instead enumerates its (x, y) pairs
    explicitly because it places several feedback values at one data point.
    """

    form: str
    params: tuple[float, ...] = ()
    support: tuple[Vector, ...] = ()
    pairs: tuple[tuple[Vector, float | Vector], ...] = ()
    basis: tuple[str, ...] = ()
    model: object = None

    def evaluate(self, x) -> float:
        xv = _as_vector(x)
        if self.form == "constant":
            return self.params[0]
        if self.form == "linear":
            w, b = self.params[:-1], self.params[-1]
            return sum(wi * xi for wi, xi in zip(w, xv)) + b
        if self.form == "logistic":
            w, b = self.params[:-1], self.params[-1]
            z = sum(wi * xi for wi, xi in zip(w, xv)) + b
            return 1.0 / (1.0 + math.exp(-z))
        if self.form == "basis_linear":
            from .learners.linear import expand_point  # local import: avoids cycle

            zv = expand_point(xv, self.basis)
            w, b = self.params[:-1], self.params[-1]
            return sum(wi * zi for wi, zi in zip(w, zv)) + b
        if self.form == "tree":
            return self.model.predict(xv)
        raise ValueError(f"hypothesis form {self.form!r} has no point evaluator")

    def hypothetical_instances(self) -> tuple[Instance, ...]:
        if self.form == "cluster_assignment":
            return tuple(Instance(_as_vector(x), _as_feedback(y), HYP) for x, y in self.pairs)
        return tuple(hypothetical(x, self.evaluate(x)) for x in self.support)


def constant_hypothesis(c: float, support: Iterable) -> Hypothesis:
    return Hypothesis("constant", (float(c),), tuple(_as_vector(x) for x in support))


def linear_hypothesis(w: Iterable[float], b: float, support: Iterable) -> Hypothesis:
    params = tuple(float(v) for v in w) + (float(b),)
    return Hypothesis("linear", params, tuple(_as_vector(x) for x in support))


def logistic_hypothesis(w: Iterable[float], b: float, support: Iterable) -> Hypothesis:
    params = tuple(float(v) for v in w) + (float(b),)
    return Hypothesis("logistic", params, tuple(_as_vector(x) for x in support))


def basis_linear_hypothesis(w: Iterable[float], b: float, basis: Iterable[str],
                            support: Iterable) -> Hypothesis:
    params = tuple(float(v) for v in w) + (float(b),)
    return Hypothesis("basis_linear", params, tuple(_as_vector(x) for x in support),
                      basis=tuple(basis))


def cluster_hypothesis(index: int, points: Iterable, params: Iterable[float] = ()) -> Hypothesis:
    """Hypothesis placing each of ``points`` as feedback at data point ``(index,)``."""
    pairs = tuple(((float(index),), _as_feedback(p)) for p in points)
    return Hypothesis("cluster_assignment", tuple(float(v) for v in params), pairs=pairs)


def support_points(instances: Sequence[Instance]) -> tuple[Vector, ...]:
    """Distinct data points of ``instances`` in first-seen order."""
    seen: dict[Vector, None] = {}
    for a in instances:
        seen.setdefault(a.x, None)
    return tuple(seen)


def build_conglomerate(h: Hypothesis, s: Sequence[Instance]) -> Conglomerate:
    """Union of the observations ``s`` and the hypothetical instances of ``h``."""
    for a in s:
        if a.tag != OBS:
            raise ValueError("training instances must carry the observation tag")
    hyp = h.hypothetical_instances()
    all_instances = tuple(s) + hyp
    dims = {len(a.x) for a in all_instances}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch across instances: {sorted(dims)}")
    return Conglomerate(all_instances)


# ---------------------------------------------------------------------------
# Alignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlignmentPredicate:
    """Which ordered instance pairs of a conglomerate are compared.

    Shipped kinds:

    * ``pointwise`` -- hypothetical against observed at the same data point;
    * ``ball`` -- hypothetical at the query point ``x0`` against every
      observation within ``radius`` of it;
    * ``same_x_symmetric`` -- any two distinct instances at the same data
      point, both orders emitted, tags ignored;
    * ``feature_equality`` -- hypothetical against observed agreeing on one
      coordinate;
    * ``cluster_pair`` -- pointwise restricted to the data point
      ``(cluster,)``; ``partner`` records which cluster supplied the
      hypothetical feedback values.
    """

    kind: str
    x0: Vector | None = None
    radius: float | None = None
    feature: int | None = None
    cluster: int | None = None
    partner: int | None = None

    def holds(self, a: Instance, b: Instance) -> bool:
        if self.kind == "pointwise":
            return is_hypothetical(a) and is_observation(b) and a.x == b.x
        if self.kind == "ball":
            return (is_hypothetical(a) and is_observation(b)
                    and a.x == self.x0 and x_distance(a, b) <= self.radius)
        if self.kind == "same_x_symmetric":
            return a.x == b.x
        if self.kind == "feature_equality":
            return (is_hypothetical(a) and is_observation(b)
                    and a.x[self.feature] == b.x[self.feature])
        if self.kind == "cluster_pair":
            at = (float(self.cluster),)
            return is_hypothetical(a) and is_observation(b) and a.x == at and b.x == at
        raise ValueError(f"unknown alignment kind: {self.kind!r}")


def pointwise() -> AlignmentPredicate:
    return AlignmentPredicate("pointwise")


def ball(x0, radius: float) -> AlignmentPredicate:
    return AlignmentPredicate("ball", x0=_as_vector(x0), radius=float(radius))


def same_x_symmetric() -> AlignmentPredicate:
    return AlignmentPredicate("same_x_symmetric")


def feature_equality(i: int) -> AlignmentPredicate:
    return AlignmentPredicate("feature_equality", feature=int(i))


def cluster_pair(i: int, j: int) -> AlignmentPredicate:
    return AlignmentPredicate("cluster_pair", cluster=int(i), partner=int(j))


def aligned_pairs(pi, m: Conglomerate) -> list[tuple[Instance, Instance]]:
    """All ordered pairs of distinct instances of ``m`` satisfying ``pi``.

    ``pi`` is an :class:`AlignmentPredicate` or any callable on two
    instances (the latter is a hook for closure-check experiments).
    """
    holds = pi.holds if isinstance(pi, AlignmentPredicate) else pi
    out = []
    insts = m.instances
    for i, a in enumerate(insts):
        for j, b in enumerate(insts):
            if i != j and holds(a, b):
                out.append((a, b))
    return out


def check_alignment_downward_closure(pi, m: Conglomerate) -> bool:
    """Verify that alignment on ``m`` is downward closed in data-point distance.

    For every aligned pair, every pair with the same tag pattern at a
    distance no larger must be aligned as well.  Distance is taken in the
    predicate's own coordinate for single-feature alignments, Euclidean
    otherwise.
    """
    holds = pi.holds if isinstance(pi, AlignmentPredicate) else pi
    feat = pi.feature if isinstance(pi, AlignmentPredicate) else None
    insts = m.instances
    k = len(insts)
    flags = [[i != j and holds(insts[i], insts[j]) for j in range(k)] for i in range(k)]
    dist = [[x_distance(insts[i], insts[j], feat) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            if not flags[i][j]:
                continue
            for p in range(k):
                for q in range(k):
                    if p == q:
                        continue
                    if insts[p].tag != insts[i].tag or insts[q].tag != insts[j].tag:
                        continue
                    if dist[p][q] <= dist[i][j] and not flags[p][q]:
                        return False
    return True


# ---------------------------------------------------------------------------
# Deviations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeviationFunction:
    """Score of an aligned pair, isotone in the feedback distance.

    ``log_ydist`` clamps its argument at ``eps`` before the logarithm so a
    perfect fit scores log(eps) instead of diverging.  ``signclass_ydist``
    scores 0 whenever the two feedback values agree in sign and the raw
    feedback gap otherwise, which is the natural comparison for -1/+1
    labels against a real-valued score.
    """

    kind: str
    eps: float | None = None

    def value(self, a: Instance, b: Instance, i: int | None = None) -> float:
        ry = y_distance(a, b)
        if self.kind == "ydist":
            return ry
        if self.kind == "log_ydist":
            return math.log(max(ry, self.eps))
        if self.kind == "half_square_ydist":
            return 0.5 * ry * ry
        if self.kind == "epsilon_insensitive":
            return 0.0 if ry < self.eps else ry - self.eps
        if self.kind == "square_ydist":
            return ry * ry
        if self.kind == "signclass_ydist":
            if a.y * b.y >= 0:
                return 0.0
            return ry
        raise ValueError(f"unknown deviation kind: {self.kind!r}")


def ydist() -> DeviationFunction:
    return DeviationFunction("ydist")


def log_ydist(eps: float = 1e-12) -> DeviationFunction:
    return DeviationFunction("log_ydist", eps=float(eps))


def half_square_ydist() -> DeviationFunction:
    return DeviationFunction("half_square_ydist")


def epsilon_insensitive(eps: float) -> DeviationFunction:
    return DeviationFunction("epsilon_insensitive", eps=float(eps))


def square_ydist() -> DeviationFunction:
    return DeviationFunction("square_ydist")


def signclass_ydist() -> DeviationFunction:
    return DeviationFunction("signclass_ydist")


def deviation_sequence(pairs: Sequence[tuple[Instance, Instance]],
                       t: DeviationFunction, i: int | None = None) -> list[float]:
    """One deviation per aligned pair, in the order the pairs were given."""
    return [t.value(a, b, i) for a, b in pairs]


# ---------------------------------------------------------------------------
# Badness rules and criteria
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BadnessRule:
    """(alignment, deviation, aggregation) scoring one aspect of a hypothesis."""

    alignment: AlignmentPredicate
    deviation: DeviationFunction
    aggregation: AggregationSpec


def pointwise_rule(aggregation: AggregationSpec | None = None) -> BadnessRule:
    """Hypothetical-vs-observed feedback gap at shared data points.

    With the default mean aggregation this scores a hypothesis by its mean
    absolute error on the training points. Library code refers to this as
    the pointwise rule.
    """
    return BadnessRule(pointwise(), ydist(), aggregation if aggregation is not None else l1())


def badness(rule: BadnessRule, h: Hypothesis, s: Sequence[Instance]) -> float:
    m = build_conglomerate(h, s)
    pairs = aligned_pairs(rule.alignment, m)
    if not pairs:
        raise ValueError("vacuous badness: alignment selected no pairs")
    i = rule.alignment.feature if rule.alignment.kind == "feature_equality" else None
    return aggregate(rule.aggregation, deviation_sequence(pairs, rule.deviation, i))


@dataclass(frozen=True)
class Regularization:
    kind: str
    weight: float = 1.0

    def __post_init__(self):
        if self.kind != "squared_gradient_norm":
            raise ValueError(f"unknown regularization kind: {self.kind!r}")
        if self.weight < 0:
            raise ValueError("regularization weight must be nonnegative")


def squared_gradient_norm(weight: float = 1.0) -> Regularization:
    return Regularization("squared_gradient_norm", float(weight))


def regularization_value(h: Hypothesis, kind: Regularization) -> float:
    """Squared Euclidean norm of the weight part of ``h`` (bias excluded)."""
    if h.form not in _GRADIENT_FORMS:
        raise ValueError(f"regularization undefined for form {h.form!r}")
    w = h.params[:-1]
    return sum(v * v for v in w)


@dataclass(frozen=True)
class Combining:
    """Componentwise-monotone map from rule values to the criterion value."""

    kind: str
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("single", "weighted_sum", "one_minus_product_of_complements"):
            raise ValueError(f"unknown combining kind: {self.kind!r}")
        if self.kind == "weighted_sum":
            if not self.weights:
                raise ValueError("weighted_sum requires weights")
            if any(w < 0 for w in self.weights):
                raise ValueError("weighted_sum weights must be nonnegative")

    def apply(self, components: Sequence[float]) -> float:
        if self.kind == "single":
            return components[0]
        if self.kind == "weighted_sum":
            if len(self.weights) != len(components):
                raise ValueError("weight count does not match component count")
            return sum(w * v for w, v in zip(self.weights, components))
        prod = 1.0
        for v in components:
            prod *= 1.0 - v
        return 1.0 - prod


def single() -> Combining:
    return Combining("single")


def weighted_sum(*weights: float) -> Combining:
    return Combining("weighted_sum", tuple(float(w) for w in weights))


def one_minus_product_of_complements() -> Combining:
    return Combining("one_minus_product_of_complements")


@dataclass(frozen=True)
class ExplanationCriterion:
    """Badness rules plus optional regularization under one combining map.

    The component vector handed to the combining operation lists the rule
    values in rule order, then the weighted regularization value when a
    regularization is present.
    """

    rules: tuple[BadnessRule, ...]
    regularization: Regularization | None = None
    combining: Combining = field(default_factory=single)

    def __post_init__(self):
        if not self.rules:
            raise ValueError("criterion requires at least one badness rule")
        n_components = len(self.rules) + (1 if self.regularization else 0)
        if self.combining.kind == "single":
            if n_components != 1:
                raise ValueError("single combining requires exactly one component")
        elif len(self.rules) == 1 and self.regularization is None:
            raise ValueError("one rule and no regularization must combine with 'single'")
        if self.combining.kind == "weighted_sum" and len(self.combining.weights) != n_components:
            raise ValueError("weighted_sum weights must cover every component")


def criterion_value(c: ExplanationCriterion, h: Hypothesis, s: Sequence[Instance]) -> float:
    components = [badness(rule, h, s) for rule in c.rules]
    if c.regularization is not None:
        components.append(c.regularization.weight * regularization_value(h, c.regularization))
    return c.combining.apply(components)
