"""Labeled datasets and the synthetic generators used by experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..logic import Instance, observation

BINARY01 = "binary01"
PM1 = "pm1"
REAL = "real"


def infer_label_kind(y) -> str:
    values = set(float(v) for v in y)
    if values <= {0.0, 1.0}:
        return BINARY01
    if values <= {-1.0, 1.0}:
        return PM1
    return REAL


@dataclass(frozen=True)
class LabeledDataset:
    """Observation rows with a declared label kind.

    ``rows`` are observation-tagged instances; ``X`` / ``y`` expose the
    same data as numpy arrays for the vectorized fitters.
    """

    rows: tuple[Instance, ...]
    n: int
    label_kind: str

    def __post_init__(self):
        if self.label_kind == BINARY01:
            bad = [r.y for r in self.rows if r.y not in (0.0, 1.0)]
        elif self.label_kind == PM1:
            bad = [r.y for r in self.rows if r.y not in (-1.0, 1.0)]
        else:
            bad = []
        if bad:
            raise ValueError(f"labels {bad[:3]} violate label kind {self.label_kind!r}")

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def X(self) -> np.ndarray:
        return np.array([r.x for r in self.rows], dtype=float).reshape(self.m, self.n)

    @property
    def y(self) -> np.ndarray:
        return np.array([r.y for r in self.rows], dtype=float)

    @classmethod
    def from_arrays(cls, X, y, label_kind: str | None = None) -> "LabeledDataset":
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.asarray(y, dtype=float)
        if len(X) != len(y):
            raise ValueError("feature and label counts differ")
        kind = label_kind if label_kind is not None else infer_label_kind(y)
        rows = tuple(observation(tuple(xi), float(yi)) for xi, yi in zip(X, y))
        return cls(rows, X.shape[1], kind)

    def subset(self, indices) -> "LabeledDataset":
        rows = tuple(self.rows[i] for i in indices)
        return LabeledDataset(rows, self.n, self.label_kind)


def train_test_split(s: LabeledDataset, train_fraction: float, seed: int):
    """Deterministic shuffled split; returns (train, test)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(s.m)
    cut = int(round(train_fraction * s.m))
    return s.subset(order[:cut]), s.subset(order[cut:])


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------


def two_blobs_1d(m: int, seed: int, separation: float = 4.0, sigma: float = 1.0) -> LabeledDataset:
    """Two unit-variance 1-D blobs, centers ``separation * sigma`` apart."""
    rng = np.random.default_rng(seed)
    half = m // 2
    x0 = rng.normal(0.0, sigma, size=half)
    x1 = rng.normal(separation * sigma, sigma, size=m - half)
    X = np.concatenate([x0, x1]).reshape(-1, 1)
    y = np.concatenate([np.zeros(half), np.ones(m - half)])
    order = rng.permutation(m)
    return LabeledDataset.from_arrays(X[order], y[order], BINARY01)


def noisy_threshold(m: int, seed: int, p: float = 0.8) -> LabeledDataset:
    """1-D uniform features; label = indicator(x > 0) kept with probability ``p``."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=m).reshape(-1, 1)
    clean = (X[:, 0] > 0).astype(float)
    flip = rng.random(m) >= p
    y = np.where(flip, 1.0 - clean, clean)
    return LabeledDataset.from_arrays(X, y, BINARY01)


def xor2d(m: int = 4, seed: int | None = None) -> LabeledDataset:
    """The four XOR corner points, cycled to ``m`` rows."""
    pattern = [((0.0, 0.0), 0.0), ((0.0, 1.0), 1.0), ((1.0, 0.0), 1.0), ((1.0, 1.0), 0.0)]
    rows = [pattern[i % 4] for i in range(m)]
    X = np.array([r[0] for r in rows])
    y = np.array([r[1] for r in rows])
    return LabeledDataset.from_arrays(X, y, BINARY01)


SYNTH_GENERATORS = {
    "two_blobs_1d": two_blobs_1d,
    "noisy_threshold": noisy_threshold,
    "xor2d": xor2d,
}
