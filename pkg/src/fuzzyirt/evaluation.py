"""Classification-style scoring of probabilistic response predictions.

Predictions in [0, 1] are compared against observed 0/1 responses over a
threshold sweep; zero-denominator metrics are reported as None (missing)
rather than coerced to 0, and excluded from curves and the AUC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .irt import ItemParams, icc_probability

THRESHOLD_STEP = 0.01


def oracle_3pl(item: ItemParams, theta) -> float:
    """Ground-truth success probability used as the training target."""
    return icc_probability(item, theta)


@dataclass(frozen=True)
class LabeledPrediction:
    """A predicted success probability paired with the observed outcome."""

    predicted: float
    actual: int

    def __post_init__(self):
        predicted = float(self.predicted)
        if not math.isfinite(predicted) or not 0.0 <= predicted <= 1.0:
            raise ValueError(f"predicted must lie in [0, 1], got {predicted!r}")
        if self.actual not in (0, 1):
            raise ValueError(f"actual must be 0 or 1, got {self.actual!r}")
        object.__setattr__(self, "predicted", predicted)
        object.__setattr__(self, "actual", int(self.actual))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer")
            object.__setattr__(self, name, int(value))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class FoldSplit:
    """Student-level fold assignment for cross validation."""

    k: int
    assignments: dict[str, int]

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need at least 2 folds")
        folds = list(self.assignments.values())
        if any(f < 0 or f >= self.k for f in folds):
            raise ValueError("fold index out of range")
        sizes = [folds.count(f) for f in range(self.k)]
        if min(sizes) == 0:
            raise ValueError("every fold needs at least one student")
        if max(sizes) - min(sizes) > 1:
            raise ValueError("fold sizes must differ by at most 1")

    def test_ids(self, fold: int) -> list[str]:
        return [sid for sid, f in self.assignments.items() if f == fold]

    def train_ids(self, fold: int) -> list[str]:
        return [sid for sid, f in self.assignments.items() if f != fold]

    def splits(self) -> list[tuple[list[str], list[str]]]:
        return [(self.train_ids(f), self.test_ids(f)) for f in range(self.k)]

    def __iter__(self) -> Iterator[tuple[list[str], list[str]]]:
        return iter(self.splits())

    def __len__(self) -> int:
        return self.k


def kfold_split(student_ids: Sequence[str], k: int = 5,
                rng_seed: int = 0) -> FoldSplit:
    """Shuffle students once and deal them round-robin into k folds."""
    ids = list(student_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("student ids must be unique")
    if k < 2 or k > len(ids):
        raise ValueError(f"k must lie in [2, {len(ids)}]")
    rng = np.random.default_rng(rng_seed)
    order = rng.permutation(len(ids))
    assignments = {ids[j]: int(pos % k) for pos, j in enumerate(order)}
    return FoldSplit(k=k, assignments={sid: assignments[sid] for sid in ids})


def _pred_arrays(preds: Sequence[LabeledPrediction]) -> tuple[np.ndarray, np.ndarray]:
    if len(preds) == 0:
        raise ValueError("need at least one prediction")
    predicted = np.array([p.predicted for p in preds])
    actual = np.array([p.actual for p in preds])
    return predicted, actual


def confusion_at_threshold(preds: Sequence[LabeledPrediction],
                           threshold: float) -> ConfusionCounts:
    """Classify predicted >= threshold as positive and count outcomes."""
    threshold = float(threshold)
    if not math.isfinite(threshold):
        raise ValueError("threshold must be finite")
    predicted, actual = _pred_arrays(preds)
    positive = predicted >= threshold
    return ConfusionCounts(
        tp=int(np.sum(positive & (actual == 1))),
        fp=int(np.sum(positive & (actual == 0))),
        tn=int(np.sum(~positive & (actual == 0))),
        fn=int(np.sum(~positive & (actual == 1))),
    )


def precision(counts: ConfusionCounts) -> float | None:
    denom = counts.tp + counts.fp
    return counts.tp / denom if denom else None


def recall(counts: ConfusionCounts) -> float | None:
    denom = counts.tp + counts.fn
    return counts.tp / denom if denom else None


def true_positive_rate(counts: ConfusionCounts) -> float | None:
    return recall(counts)


def false_positive_rate(counts: ConfusionCounts) -> float | None:
    denom = counts.fp + counts.tn
    return counts.fp / denom if denom else None


@dataclass(frozen=True)
class ThresholdPoint:
    threshold: float
    precision: float | None
    recall: float | None
    tpr: float | None
    fpr: float | None


@dataclass(frozen=True)
class SweepResult:
    points: tuple[ThresholdPoint, ...]
    auc: float | None


def curve_sweep(preds: Sequence[LabeledPrediction],
                step: float = THRESHOLD_STEP) -> SweepResult:
    """Metrics at every threshold 0.00, step, ..., 1.00 plus ROC AUC.

    The AUC is the trapezoidal area under the swept (fpr, tpr) points,
    with a virtual (0, 0) origin when the sweep does not reach it; it is
    None when either class is absent from the data.
    """
    n_steps = int(round(1.0 / step))
    thresholds = np.linspace(0.0, 1.0, n_steps + 1)
    points = []
    roc: list[tuple[float, float]] = []
    for t in thresholds:
        counts = confusion_at_threshold(preds, float(t))
        point = ThresholdPoint(
            threshold=float(t),
            precision=precision(counts),
            recall=recall(counts),
            tpr=true_positive_rate(counts),
            fpr=false_positive_rate(counts),
        )
        points.append(point)
        if point.tpr is not None and point.fpr is not None:
            roc.append((point.fpr, point.tpr))
    if roc:
        pairs = sorted(roc)
        if pairs[0] != (0.0, 0.0):
            pairs.insert(0, (0.0, 0.0))
        xs = np.array([p[0] for p in pairs])
        ys = np.array([p[1] for p in pairs])
        auc = float(np.trapezoid(ys, xs))
    else:
        auc = None
    return SweepResult(points=tuple(points), auc=auc)
