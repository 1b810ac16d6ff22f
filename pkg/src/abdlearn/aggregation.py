"""Aggregation operators over finite sequences of nonnegative deviations.

An aggregation maps a finite sequence of real numbers to a single real and
must be insensitive to the order of the elements and strictly monotone under
the sequence dominance order implemented by :func:`seq_less`.  An aggregation
is *stable* when it maps constant sequences to the constant; stable
aggregations are always bracketed by the sequence minimum and maximum.

Two families are provided:

* recursive aggregations, built from three enumerated function slots --
  a scaling function applied per element, a symmetric associative
  compounding operator folded over the scaled elements, and a
  normalization applied to the fold result together with the length;
* order statistics -- percentiles plus direct ``min`` / ``max`` shortcuts.

Only the enumerated function names below may be used in a spec; arbitrary
callables are deliberately not accepted so every constructible operator is
known to satisfy the axioms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

_SCALE_FNS = {
    "identity": lambda x: x,
    "square": lambda x: x * x,
}

_COMPOUND_FNS = {
    "sum": lambda x, y: x + y,
    "product": lambda x, y: x * y,
    "max": max,
}

_NORMALIZE_FNS = {
    "divide_by_n": lambda x, n: x / n,
    "nth_root": lambda x, n: x ** (1.0 / n),
    "identity": lambda x, n: x,
    "sqrt_of_quotient": lambda x, n: math.sqrt(x / n),
}


@dataclass(frozen=True)
class AggregationSpec:
    """Declarative description of an aggregation operator.

    ``kind`` is one of ``recursive``, ``percentile``, ``min``, ``max``.
    Recursive specs name their three function slots; percentile specs carry
    the rank ``r`` in [0, 100].
    """

    kind: str
    scale: str | None = None
    compound: str | None = None
    normalize: str | None = None
    r: float | None = None

    def __post_init__(self):
        if self.kind == "recursive":
            if self.scale not in _SCALE_FNS:
                raise ValueError(f"unknown scaling function: {self.scale!r}")
            if self.compound not in _COMPOUND_FNS:
                raise ValueError(f"unknown compounding function: {self.compound!r}")
            if self.normalize not in _NORMALIZE_FNS:
                raise ValueError(f"unknown normalization function: {self.normalize!r}")
        elif self.kind == "percentile":
            if self.r is None or not 0.0 <= self.r <= 100.0:
                raise ValueError(f"percentile rank must lie in [0, 100], got {self.r!r}")
        elif self.kind not in ("min", "max"):
            raise ValueError(f"unknown aggregation kind: {self.kind!r}")


def l1() -> AggregationSpec:
    """Arithmetic mean: fold with ``+``, divide by the length.  Stable."""
    return AggregationSpec("recursive", scale="identity", compound="sum", normalize="divide_by_n")


def l2() -> AggregationSpec:
    """Quadratic mean sqrt(sum(a_i^2) / n).  Stable.

    This is the canonical quadratic aggregation.  See :func:`l2_literal`
    for the non-stable variant that divides after the square root.
    """
    return AggregationSpec("recursive", scale="square", compound="sum", normalize="sqrt_of_quotient")


def l3() -> AggregationSpec:
    """Geometric mean: fold with ``*``, take the n-th root.  Stable."""
    return AggregationSpec("recursive", scale="identity", compound="product", normalize="nth_root")


def total() -> AggregationSpec:
    """Plain sum with no normalization.

    Order insensitive and strictly monotone, but not stable ({c, c} maps
    to 2c), so the min/max bracketing does not apply.
    """
    return AggregationSpec("recursive", scale="identity", compound="sum", normalize="identity")


def percentile(r: float) -> AggregationSpec:
    """Percentile of rank ``r`` in [0, 100] under the rule of :func:`aggregate`."""
    return AggregationSpec("percentile", r=float(r))


def minimum() -> AggregationSpec:
    """Smallest element; behaves like ``percentile(0)`` with an O(n) path."""
    return AggregationSpec("min")


def maximum() -> AggregationSpec:
    """Largest element; behaves like ``percentile(100)`` with an O(n) path."""
    return AggregationSpec("max")


def stable_specs() -> list[tuple[str, AggregationSpec]]:
    """The shipped stable aggregations, named, for property suites."""
    named = [("l1", l1()), ("l2", l2()), ("l3", l3()), ("min", minimum()), ("max", maximum())]
    named += [(f"percentile_{r}", percentile(r)) for r in (0, 25, 50, 75, 100)]
    return named


def seq_sim(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``b`` is a permutation of ``a`` (sorted copies agree)."""
    return sorted(a) == sorted(b)


def seq_less(a: Sequence[float], b: Sequence[float], strict: bool = True) -> bool:
    """Dominance order on equal-length sequences.

    ``a`` is below ``b`` when some pairing matches every element of ``b``
    with a smaller (or equal, when ``strict`` is false) element of ``a``.
    Such a pairing exists exactly when the sorted copies dominate
    elementwise, which is what is computed here; the exhaustive search over
    pairings is kept as a test oracle only.
    """
    if len(a) != len(b):
        return False
    if strict:
        return all(x < y for x, y in zip(sorted(a), sorted(b)))
    return all(x <= y for x, y in zip(sorted(a), sorted(b)))


def _percentile_value(ordered: list[float], r: float) -> float:
    # Rank rule: p = r/100 * n; integer p selects the (p+1)-th smallest
    # element, fractional p averages the floor(p)-th and next.  Indices are
    # clamped into range at the two extremes (r = 100 and p < 1).
    n = len(ordered)
    p = r / 100.0 * n
    if float(p).is_integer():
        idx = min(int(p) + 1, n)
        return ordered[idx - 1]
    q = int(math.floor(p))
    if q == 0:
        return ordered[0]
    return (ordered[q - 1] + ordered[q]) / 2.0


def aggregate(spec: AggregationSpec, values: Iterable[float]) -> float:
    """Apply the operator described by ``spec`` to a nonempty sequence.

    Recursive specs scale the first element, fold the compounding operator
    left to right over the remaining scaled elements, and normalize the
    result with the sequence length.  Percentile/min/max specs are order
    statistics of the sorted sequence.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("empty aggregation input")
    if spec.kind == "recursive":
        scale = _SCALE_FNS[spec.scale]
        comp = _COMPOUND_FNS[spec.compound]
        norm = _NORMALIZE_FNS[spec.normalize]
        acc = scale(vals[0])
        for v in vals[1:]:
            acc = comp(acc, scale(v))
        return float(norm(acc, len(vals)))
    if spec.kind == "percentile":
        if not 0.0 <= spec.r <= 100.0:
            raise ValueError(f"percentile rank must lie in [0, 100], got {spec.r!r}")
        return _percentile_value(sorted(vals), spec.r)
    if spec.kind == "min":
        return min(vals)
    return max(vals)


def l2_literal(values: Iterable[float]) -> float:
    """Quadratic aggregation variant sqrt(sum(a_i^2)) / n.

    Order insensitive and strictly monotone like :func:`l2`, but not
    stable: a constant sequence {c, c} maps to c / sqrt(2).  Kept alongside
    the canonical form because both normalizations occur in practice and
    only the canonical one keeps the constant-sequence and min/max
    bracketing guarantees.  Tests document the difference.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("empty aggregation input")
    return math.sqrt(sum(v * v for v in vals)) / len(vals)
