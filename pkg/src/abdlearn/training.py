"""The two generic search procedures every shipped learner reduces to.

*Basic training* optionally focuses the training set (subset selection,
feature filtering, or basis expansion), enumerates a finite family of
hypotheses, and returns the first one minimizing the explanation criterion
on the focused set.

The *wrapper* repeats basic training over a generated parameter sequence,
attaches a weight to each round's winner, and combines the collected
(hypothesis, weight) records into one decision once the stopping predicate
fires.  All callables are expected to be deterministic; any randomness must
be frozen into the configs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .logic import (
    ExplanationCriterion,
    Hypothesis,
    Instance,
    constant_hypothesis,
    criterion_value,
    x_distance,
    observation,
)


@dataclass
class BasicTrainingConfig:
    """Focusing transform (optional), hypothesis enumerator, and criterion.

    ``focusing(s, q)`` returns the focused instance list; ``enumerator(s_q,
    q)`` yields the candidate hypotheses for that focused set.
    """

    enumerator: Callable[[Sequence[Instance], object], Sequence[Hypothesis]]
    criterion: ExplanationCriterion
    focusing: Callable[[Sequence[Instance], object], Sequence[Instance]] | None = None


@dataclass(frozen=True)
class IterationRecord:
    q: object
    hypothesis: Hypothesis
    value: float
    weight: float


@dataclass
class TrainingTrace:
    records: list[IterationRecord]
    decision: object


@dataclass
class WrapperConfig:
    """Parameter loop around basic training.

    ``param_generator(records)`` produces the next parameter value (or
    ``None`` to exhaust the loop), ``weight_fn(h, s_q, q)`` scores the
    round, ``stop_fn(records)`` is checked after every round, and
    ``combiner(records)`` forms the final decision.
    """

    param_generator: Callable[[list[IterationRecord]], object]
    weight_fn: Callable[[Hypothesis, Sequence[Instance], object], float]
    stop_fn: Callable[[list[IterationRecord]], bool]
    combiner: Callable[[list[IterationRecord]], object]


def basic_train(cfg: BasicTrainingConfig, s: Sequence[Instance],
                q: object = None) -> tuple[Hypothesis, float]:
    """Return the enumerated hypothesis minimizing the criterion, with its value.

    Ties go to the earliest enumerated minimum, which keeps the procedure
    deterministic.
    """
    if not s:
        raise ValueError("basic training requires a nonempty training set")
    s_q = cfg.focusing(s, q) if cfg.focusing is not None else s
    best_h = None
    best_v = math.inf
    count = 0
    for h in cfg.enumerator(s_q, q):
        count += 1
        v = criterion_value(cfg.criterion, h, s_q)
        if v < best_v:
            best_h, best_v = h, v
    if count == 0:
        raise ValueError("hypothesis enumeration produced no candidates")
    return best_h, best_v


def wrapper_run(wcfg: WrapperConfig, bcfg: BasicTrainingConfig,
                s: Sequence[Instance]) -> tuple[object, TrainingTrace]:
    """Run the wrapper loop and return (decision, trace).

    A hard cap of ``len(s)`` iterations guards against non-terminating
    parameter generators; the shipped learner loops are all bounded by the
    training-set size, so the cap never fires for them.
    """
    records: list[IterationRecord] = []
    cap = len(s)
    while True:
        q = wcfg.param_generator(records)
        if q is None:
            break
        h, v = basic_train(bcfg, s, q)
        s_q = bcfg.focusing(s, q) if bcfg.focusing is not None else s
        w = wcfg.weight_fn(h, s_q, q)
        records.append(IterationRecord(q, h, v, w))
        if wcfg.stop_fn(records):
            break
        if len(records) >= cap:
            raise RuntimeError(f"wrapper exceeded the iteration cap of {cap}")
    decision = wcfg.combiner(records)
    return decision, TrainingTrace(records, decision)


# ---------------------------------------------------------------------------
# The closed set of focusing transforms the shipped learners use
# ---------------------------------------------------------------------------


def k_nearest_focus(x0) -> Callable:
    """Focus on the ``q`` observations closest to ``x0``, ties at the cutoff included."""
    probe = observation(x0, 0.0)

    def focus(s: Sequence[Instance], q) -> list[Instance]:
        k = int(q)
        dists = [x_distance(a, probe) for a in s]
        cutoff = sorted(dists)[min(k, len(s)) - 1]
        return [a for a, d in zip(s, dists) if d <= cutoff]

    return focus


def feature_value_focus(i: int) -> Callable:
    """Focus on observations whose coordinate ``i`` equals the parameter value."""

    def focus(s: Sequence[Instance], q) -> list[Instance]:
        return [a for a in s if a.x[i] == q]

    return focus


def subdomain_focus() -> Callable:
    """Focus on a box subdomain; the parameter is ((feature, lo, hi), ...)."""

    def focus(s: Sequence[Instance], q) -> list[Instance]:
        out = []
        for a in s:
            if all(lo <= a.x[f] <= hi for f, lo, hi in q):
                out.append(a)
        return out

    return focus


def basis_expansion_focus(basis: Sequence[str]) -> Callable:
    """Re-express every observation through the named basis functions."""
    from .learners.linear import expand_point

    names = tuple(basis)

    def focus(s: Sequence[Instance], q) -> list[Instance]:
        return [Instance(expand_point(a.x, names), a.y, a.tag) for a in s]

    return focus


def binary_constants(x0) -> Callable:
    """Enumerate the two constant hypotheses 0 and 1 at the query point."""
    support = (x0,)

    def enumerate_hypotheses(s_q, q):
        return [constant_hypothesis(0.0, support), constant_hypothesis(1.0, support)]

    return enumerate_hypotheses
